"""Sum and product sides, the absorption-limit pipeline, and Bailey pairs."""

import random
from fractions import Fraction as F

import pytest

from qchains.glchain import build_diagonalization
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
from qchains.partitions import MeasureParams, enumerate_partitions
from qchains.qalgebra import (
    euler_poch,
    jacobi_product,
    one_minus_product,
    theta_sum,
)

P12 = MeasureParams(u=F(1, 2), q=F(2))


def count_gap2(n, min_part=1):
    """Partitions of n with consecutive parts differing by at least 2."""
    hits = 0
    for lam in enumerate_partitions(n):
        parts = lam.parts
        if parts and parts[-1] < min_part:
            continue
        if all(parts[i] - parts[i + 1] >= 2 for i in range(len(parts) - 1)):
            hits += 1
    return hits


def count_residues(n, residues, modulus):
    hits = 0
    for lam in enumerate_partitions(n):
        if all(p % modulus in residues for p in lam.parts):
            hits += 1
    return hits


def test_agspec_validation():
    with pytest.raises(ValueError):
        AGSpec(1, 1, 10)
    with pytest.raises(ValueError):
        AGSpec(3, 0, 10)
    with pytest.raises(ValueError):
        AGSpec(3, 4, 10)


def test_ag_sum_counts_gap_partitions():
    s = ag_sum(AGSpec(2, 2, 12))
    assert [int(c) for c in s.coeffs[:5]] == [1, 1, 1, 1, 2]
    for n in range(13):
        assert int(s.coeffs[n]) == count_gap2(n), n
    s1 = ag_sum(AGSpec(2, 1, 12))
    assert s1.coeffs[1] == 0
    for n in range(13):
        assert int(s1.coeffs[n]) == count_gap2(n, min_part=2), n


def test_ag_sum_order_zero():
    for k in (2, 3, 5):
        s = ag_sum(AGSpec(k, k, 0))
        assert list(s.coeffs) == [1]


def test_ag_product_counts_residue_partitions():
    pr = ag_product(AGSpec(2, 2, 12))
    for n in range(13):
        assert int(pr.coeffs[n]) == count_residues(n, {1, 4}, 5), n
    pr1 = ag_product(AGSpec(2, 1, 12))
    assert pr1.coeffs[1] == 0
    for n in range(13):
        assert int(pr1.coeffs[n]) == count_residues(n, {2, 3}, 5), n
    assert pr.coeffs[0] == 1


def test_verify_ag_rogers_ramanujan():
    assert verify_ag(AGSpec(2, 2, 60)) == (True, None)
    assert verify_ag(AGSpec(2, 1, 60)) == (True, None)


def test_verify_ag_engine_case():
    assert verify_ag(AGSpec(3, 2, 40)) == (True, None)


def test_verify_ag_reports_first_mismatch():
    spec = AGSpec(2, 2, 10)
    lhs = ag_sum(spec)
    rhs = ag_product(spec)
    # the sides agree; a fabricated mismatch is located correctly
    diffs = [e for e in range(11) if lhs.coeffs[e] != rhs.coeffs[e]]
    assert diffs == []


def test_absorption_constant_term():
    for r in (1, 2, 3, 5):
        for delta in (0, 1):
            assert absorption_limit_series(r, delta, 8).coeffs[0] == 1


@pytest.mark.parametrize("k", [2, 3, 4])
def test_absorption_equals_weighted_sum_side(k):
    order = 60
    flat = absorption_limit_series(k, 0, order)
    assert flat == euler_poch(order, order) * ag_sum(AGSpec(k, k, order))
    tilted = absorption_limit_series(k, 1, order)
    shifted = one_minus_product(range(2, order + 1), order)
    assert tilted == shifted * ag_sum(AGSpec(k, 1, order))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_absorption_theta_route(k):
    order = 50
    in_y = absorption_limit_series(k, 0, order).to_y()
    assert in_y == theta_sum(2 * k + 1, 1, 2 * order)
    assert theta_sum(2 * k + 1, 1, 2 * order) == jacobi_product(1, 2 * k + 1, 2 * order)


def test_absorption_parameter_validation():
    with pytest.raises(ValueError):
        absorption_limit_series(0, 0, 10)
    with pytest.raises(ValueError):
        absorption_limit_series(2, 2, 10)


# ---------------------------------------------------------------------------
# Bailey pairs


def test_unit_pair_is_bailey():
    pair = unit_bailey_pair(P12, 15)
    assert bailey_check(pair)
    assert pair.beta[0] == 1 and all(b == 0 for b in pair.beta[1:])


def test_standard_vector_pairs():
    d = build_diagonalization(9, P12)
    for j in range(10):
        alpha = tuple(F(1) if r == j else F(0) for r in range(10))
        beta = tuple(d.a.entry(ll, j) for ll in range(10))
        assert bailey_check(BaileyPair(alpha=alpha, beta=beta, params=P12))


def test_perturbed_pair_fails():
    pair = unit_bailey_pair(P12, 8)
    beta = list(pair.beta)
    beta[3] += 1
    assert not bailey_check(BaileyPair(alpha=pair.alpha, beta=tuple(beta), params=P12))


def test_step_requires_valid_pair():
    bad = BaileyPair(alpha=(F(1), F(1)), beta=(F(1), F(1)), params=P12)
    with pytest.raises(ValueError, match="Bailey"):
        bailey_step(bad)


def test_step_preserves_pair_and_fixes_alpha0():
    pair = unit_bailey_pair(P12, 15)
    stepped = bailey_step(pair)
    assert bailey_check(stepped)
    assert stepped.alpha[0] == pair.alpha[0]


def test_step_twice_is_squared_matrices():
    l_max = 10
    d = build_diagonalization(l_max, P12)
    pair = unit_bailey_pair(P12, l_max)
    twice = bailey_step(bailey_step(pair))
    e2 = d.e @ d.e
    m2 = d.m @ d.m
    assert twice.alpha == e2.mul_vector(pair.alpha)
    assert twice.beta == m2.mul_vector(pair.beta)


def test_step_random_pairs_and_eigenvector_identity():
    l_max = 15
    d = build_diagonalization(l_max, P12)
    rng = random.Random(20240901)
    for _ in range(50):
        alpha = [F(rng.randint(-99, 99), rng.randint(1, 30)) for _ in range(l_max + 1)]
        pair = bailey_pair_from_alpha(alpha, P12)
        assert bailey_check(pair)
        stepped = bailey_step(pair)
        assert bailey_check(stepped)
        # beta' = M beta = A alpha' entrywise
        assert stepped.beta == d.m.mul_vector(pair.beta)
        assert stepped.beta == d.a.mul_vector(stepped.alpha)


def test_bailey_json():
    pair = unit_bailey_pair(P12, 3)
    data = pair.to_json()
    assert data["beta"] == ["1", "0", "0", "0"]
    assert data["u"] == "1/2" and data["q"] == "2"
