"""Selects the series-kernel backend at import time.

The compiled extension (qchains._kernels) is preferred; set QCHAINS_PURE=1
to force the pure-Python twin, e.g. for benchmarking or debugging.
"""

import os

if os.environ.get("QCHAINS_PURE"):
    from qchains import _kernels_py as kernels
else:
    try:
        from qchains import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from qchains import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.IMPL

conv_trunc = kernels.conv_trunc
inv_scaled = kernels.inv_scaled
geom_inv_mul = kernels.geom_inv_mul
