"""Graph-indexed partition tuples: weights, truncated normalizer, the
componentwise chain, and its factorization."""

import itertools
import json
import warnings
from fractions import Fraction as F

import pytest

from qchains.glchain import first_col_unnormalized, kernel
from qchains.glchain import sample_stream as gl_sample_stream
from qchains.partitions import MeasureParams, Partition, enumerate_partitions, mass_v1
from qchains.qalgebra import poch_inf
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
    quiver_m_entry,
    quiver_sample,
    tuple_weight,
)

POINT = Quiver(n=1, f=((0,),))
POINT_PARAMS = QuiverParams(q=F(2), u=(F(1, 2),))
JORDAN = Quiver(n=1, f=((1,),))
JORDAN_PARAMS = QuiverParams(q=F(2), u=(F(1, 4),))
A2 = Quiver.from_edges(2, [(1, 2, 1)])
A2_PARAMS = QuiverParams(q=F(2), u=(F(1, 4), F(1, 4)))


def all_tuples(n_components, total):
    """All partition tuples with the given total size."""
    if n_components == 1:
        return [PartitionTuple((lam,)) for lam in enumerate_partitions(total)]
    out = []
    for s1 in range(total + 1):
        for lam in enumerate_partitions(s1):
            for rest in all_tuples(n_components - 1, total - s1):
                out.append(PartitionTuple((lam,) + rest.components))
    return out


def test_quiver_validation():
    with pytest.raises(ValueError):
        Quiver(n=2, f=((0, 1), (2, 0)))  # not symmetric
    with pytest.raises(ValueError):
        Quiver(n=2, f=((0, -1), (-1, 0)))
    with pytest.raises(ValueError):
        QuiverParams(q=F(1, 2), u=(F(1, 4),))
    with pytest.raises(ValueError):
        QuiverParams(q=F(2), u=(F(1),))


def test_disconnected_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        Quiver(n=2, f=((0, 0), (0, 0)))
    assert any("not connected" in str(w.message) for w in caught)


def test_pairing_examples():
    assert pairing(Partition([]), Partition([3, 1])) == 0
    assert pairing(Partition([1]), Partition([1])) == 1
    assert pairing(Partition([2, 1]), Partition([2, 1])) == 5


def test_tuple_weight_empty():
    assert tuple_weight(PartitionTuple((Partition([]),)), POINT, POINT_PARAMS) == 1


def test_single_point_reduces_to_measure():
    mp = MeasureParams(u=F(1, 2), q=F(2))
    for n in range(11):
        for lam in enumerate_partitions(n):
            got = tuple_weight(PartitionTuple((lam,)), POINT, POINT_PARAMS)
            assert got == mass_v1(lam, mp), lam


def test_jordan_loop_weight():
    w = tuple_weight(PartitionTuple((Partition([1]),)), JORDAN, JORDAN_PARAMS)
    assert w == F(1, 4) / (1 - F(1, 2))


def test_normalizer_single_point_matches_product():
    res = normalizer(POINT, POINT_PARAMS, size_cap=30, eps=F(1, 10**8))
    assert not res.certified
    iv = poch_inf(F(1, 2), F(2), F(1, 10**10))
    inv = 1 / res.value
    assert iv.lo - F(1, 10**7) <= inv <= iv.hi + F(1, 10**7)


def test_normalizer_small_u_near_one():
    tiny = Quiver(n=1, f=((0,),))
    p = QuiverParams(q=F(2), u=(F(1, 1000),))
    res = normalizer(tiny, p, size_cap=12, eps=F(1, 10**6))
    assert abs(res.value - 1) < F(1, 500)


def test_normalizer_cauchy_failure():
    with pytest.raises(ConvergenceError):
        normalizer(A2, A2_PARAMS, size_cap=8, eps=F(1, 10**30))


def test_normalizer_a2_cauchy_by_size_20():
    res = normalizer(A2, A2_PARAMS, size_cap=20, eps=F(1, 10**8))
    assert res.last_increment < F(1, 10**8)


def test_first_cols_empty_state():
    assert quiver_first_cols((0,), POINT, POINT_PARAMS, size_cap=10) == 1
    assert quiver_first_cols((0, 0), A2, A2_PARAMS, size_cap=10) == 1


def test_first_cols_single_point_matches_chain_law():
    cap = 26
    mp = MeasureParams(u=F(1, 2), q=F(2))
    p0 = quiver_first_cols((0,), POINT, POINT_PARAMS, cap)
    for a in range(1, 5):
        got = quiver_first_cols((a,), POINT, POINT_PARAMS, cap) / p0
        expect = first_col_unnormalized(a, mp) / first_col_unnormalized(0, mp)
        assert abs(got - expect) < F(1, 10**6), a


def test_first_cols_jordan_geometric():
    cap = 40
    got = quiver_first_cols((1,), JORDAN, JORDAN_PARAMS, cap) / quiver_first_cols(
        (0,), JORDAN, JORDAN_PARAMS, cap
    )
    u = JORDAN_PARAMS.u[0]
    expect = u / ((1 - u) * (1 - F(1, 2)))
    assert abs(got - expect) < F(1, 10**9)


def test_kernel_absorbing_and_support():
    assert quiver_kernel((0, 0), (0, 0), A2, A2_PARAMS, 10) == 1
    assert quiver_kernel((1, 1), (2, 0), A2, A2_PARAMS, 10) == 0
    assert quiver_m_entry((1,), (2,), POINT, POINT_PARAMS) == 0


def test_kernel_single_point_matches_glchain():
    cap = 26
    mp = MeasureParams(u=F(1, 2), q=F(2))
    for a in range(6):
        for b in range(a + 1):
            got = quiver_kernel((a,), (b,), POINT, POINT_PARAMS, cap)
            assert abs(got - kernel(a, b, mp)) < F(1, 10**6), (a, b)


@pytest.mark.parametrize(
    "g,p,cap",
    [(A2, A2_PARAMS, 20), (JORDAN, JORDAN_PARAMS, 24)],
    ids=["a2", "jordan"],
)
def test_kernel_rows_near_stochastic(g, p, cap):
    vectors = [
        a
        for a in itertools.product(range(5), repeat=g.n)
        if 0 < sum(a) <= 4
    ]
    for a in vectors:
        support = itertools.product(*(range(v + 1) for v in a))
        total = sum(quiver_kernel(a, b, g, p, cap) for b in support)
        assert abs(total - 1) < F(1, 10**6), a


@pytest.mark.parametrize(
    "g,p",
    [(A2, A2_PARAMS), (JORDAN, JORDAN_PARAMS)],
    ids=["a2", "jordan"],
)
def test_factorization_against_mass_ratios(g, p):
    cap = 20
    budget = 4
    vectors = [
        a
        for a in itertools.product(range(budget + 1), repeat=g.n)
        if sum(a) <= budget
    ]
    for a in vectors:
        pa = quiver_first_cols(a, g, p, cap)
        for b in itertools.product(*(range(v + 1) for v in a)):
            lhs = quiver_kernel(a, b, g, p, cap)
            rhs = quiver_m_entry(a, b, g, p) * quiver_first_cols(b, g, p, cap) / pa
            assert lhs == rhs, (a, b)


@pytest.mark.parametrize(
    "g,p",
    [(A2, A2_PARAMS), (JORDAN, JORDAN_PARAMS)],
    ids=["a2", "jordan"],
)
def test_chain_mass_cross_ratios_exact(g, p):
    cap = 16
    tuples = [t for s in range(7) for t in all_tuples(g.n, s)]
    base = tuples[0]
    cb = quiver_chain_mass(base, g, p, cap)
    wb = tuple_weight(base, g, p)
    for t in tuples:
        assert quiver_chain_mass(t, g, p, cap) * wb == tuple_weight(t, g, p) * cb, t


def test_sample_determinism_and_columns():
    t1 = quiver_sample(A2, A2_PARAMS, seed=5, size_cap=16)
    t2 = quiver_sample(A2, A2_PARAMS, seed=5, size_cap=16)
    assert t1.components == t2.components
    assert len(t1) == 2


def test_sample_surfaces_nonconvergence():
    with pytest.raises(ConvergenceError):
        quiver_sample(A2, A2_PARAMS, seed=5, size_cap=8, eps=F(1, 10**30))


def test_sample_single_point_matches_gl_statistics():
    """Empirical first-column law of the one-vertex quiver chain agrees with
    the GL chain within 4 standard errors."""
    mp = MeasureParams(u=F(1, 2), q=F(2))
    runs = 4000
    quiver_counts = {}
    for i in range(runs):
        t = quiver_sample(POINT, POINT_PARAMS, seed=10_000 + i, size_cap=20)
        lam = t.components[0]
        a = len(lam)
        quiver_counts[a] = quiver_counts.get(a, 0) + 1
    gl_counts = {}
    for s in gl_sample_stream(mp, 77, runs):
        a = len(s.partition)
        gl_counts[a] = gl_counts.get(a, 0) + 1
    z = poch_inf(F(1, 2), F(2), F(1, 10**10))
    for a in range(3):
        p_exact = float(first_col_unnormalized(a, mp)) * float(z.mid)
        se = (p_exact * (1 - p_exact) / runs) ** 0.5
        assert abs(quiver_counts.get(a, 0) / runs - p_exact) < 4 * se, a
        assert abs(gl_counts.get(a, 0) / runs - p_exact) < 4 * se, a


def test_load_quiver_roundtrip(tmp_path):
    data = {"n": 2, "edges": [[1, 2, 1]], "U": ["1/4", "1/4"], "q": "2"}
    path = tmp_path / "a2.json"
    path.write_text(json.dumps(data))
    g, p = load_quiver(str(path))
    assert g == A2
    assert p == A2_PARAMS
    with pytest.raises(ValueError):
        load_quiver({"n": 2, "edges": [[1, 3, 1]], "U": ["1/4", "1/4"], "q": "2"})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # edgeless quiver also warns
        with pytest.raises(ValueError):
            load_quiver({"n": 2, "edges": [], "U": ["1/4"], "q": "2"})
