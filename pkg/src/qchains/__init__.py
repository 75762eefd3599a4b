"""qchains: exact-arithmetic partition measures, absorbing Markov chains on
partition diagrams, and a q-series engine that verifies the identities those
chains prove.

The hot series kernels have a compiled core with a pure-Python fallback; see
qchains._backend (QCHAINS_PURE=1 forces the fallback).
"""

from qchains._backend import BACKEND
from qchains.qalgebra import (
    Interval,
    PochValue,
    QSeries,
    Rational,
    jacobi_product,
    poch_desc,
    poch_desc_extended,
    poch_inf,
    poch_std,
    q_binomial_check,
    series_inv,
    theta_sum,
)
from qchains.partitions import (
    MeasureParams,
    Partition,
    conjugate,
    enumerate_partitions,
    gl_order,
    mass_v1,
    mass_v2,
    measure_normalizer,
    n_stat,
)
from qchains.glchain import (
    ChainSample,
    Diagonalization,
    TruncatedMatrix,
    build_diagonalization,
    chain_mass,
    first_col_law,
    kernel,
    kernel_matrix,
    kr_closed,
    sample,
    sample_stream,
)
from qchains.identities import (
    AGSpec,
    BaileyPair,
    absorption_limit_series,
    ag_product,
    ag_sum,
    bailey_check,
    bailey_pair_from_alpha,
    bailey_step,
    unit_bailey_pair,
    verify_ag,
)
from qchains.fristedt import (
    FristedtParams,
    f_chain_mass,
    f_diagonalization,
    f_kernel,
    f_kernel_matrix,
    f_kr_closed,
    f_sample,
    f_sample_stream,
    row_law_limit,
    uniform_mass,
    weight_normalizer,
)
from qchains.quiver import (
    ConvergenceError,
    PartitionTuple,
    Quiver,
    QuiverParams,
    load_quiver,
    normalizer,
    pairing,
    quiver_chain_mass,
    quiver_first_cols,
    quiver_kernel,
    quiver_sample,
    tuple_weight,
)

__version__ = "0.1.0"
