"""Row-length Markov chain for the geometric-weight measure on partitions.

Here 0 < q < 1 and every Pochhammer symbol is the ascending convention:
(q)_n = (1-q)...(1-q^n), and (1/q)_n means the same product evaluated at
1/q, i.e. prod_{s<=n} (1 - q^(-s)).  Conditioning the measure on a fixed
size gives the uniform measure on partitions of that size.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from qchains.glchain import ChainSample, Diagonalization, TruncatedMatrix, _Cdf
from qchains.partitions import Partition
from qchains.qalgebra import Interval, as_fraction, poch_inf, poch_std

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class FristedtParams:
    """The geometric weight: 0 < q < 1."""

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", as_fraction(self.q))
        if not 0 < self.q < 1:
            raise ValueError("q must satisfy 0 < q < 1")


def uniform_mass(lam: Partition, p: FristedtParams) -> Fraction:
    """Unnormalized mass q^|lam|; partitions of equal size are equally likely."""
    return p.q**lam.size


def weight_normalizer(p: FristedtParams, eps) -> Interval:
    """Certified interval for prod_{i>=1} (1 - q^i)."""
    return poch_inf(1, 1 / p.q, eps)


def f_kernel(a: int, b: int, p: FristedtParams) -> Fraction:
    """Row-length transition probability  q^b (q)_a / (q)_b  for 0 <= b <= a."""
    if a < 0:
        raise ValueError("state must be >= 0")
    if b < 0 or b > a:
        return _ZERO
    q = p.q
    return q**b * poch_std(q, a) / poch_std(q, b)


def _inv_poch(q: Fraction, m: int) -> Fraction:
    """(1/q)_m = prod_{s<=m} (1 - q^(-s)), ascending symbol at 1/q."""
    return poch_std(1 / q, m)


def f_diagonalization(l_max: int, p: FristedtParams) -> Diagonalization:
    """Exact diagonalization on states 0..l_max:

    C(i,i) = (q)_i / q^i
    M(i,j) = q^i for i >= j, else 0
    D(i,i) = q^i
    A(i,j) = (-1)^(i-j) / (q^binom(i-j,2) (1/q)_{i-j})
    A^-1(i,j) = 1 / (1/q)_{i-j}

    D is stored in the slot the GL chain uses for its eigenvalue matrix.
    """
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    q = p.q
    size = l_max + 1

    c = TruncatedMatrix.diagonal(poch_std(q, i) / q**i for i in range(size))
    d = TruncatedMatrix.diagonal(q**i for i in range(size))

    def m_entry(i, j):
        return q**i if i >= j else _ZERO

    def a_entry(i, j):
        if i < j:
            return _ZERO
        k = i - j
        sign = -1 if k % 2 else 1
        return sign / (q ** (k * (k - 1) // 2) * _inv_poch(q, k))

    def ainv_entry(i, j):
        if i < j:
            return _ZERO
        return 1 / _inv_poch(q, i - j)

    return Diagonalization(
        c=c,
        m=TruncatedMatrix.build(size, m_entry),
        a=TruncatedMatrix.build(size, a_entry),
        a_inv=TruncatedMatrix.build(size, ainv_entry),
        e=d,
        params=p,
    )


def f_kernel_matrix(l_max: int, p: FristedtParams) -> TruncatedMatrix:
    return TruncatedMatrix.build(l_max + 1, lambda i, j: f_kernel(i, j, p))


def f_kr_closed(l: int, j: int, r: int, p: FristedtParams) -> Fraction:
    """Closed form for the r-step transition probability:

        q^j q^(l(r-1)) (q)_l (1/q)_{l-j+r-1} / ((q)_j (1/q)_{l-j} (1/q)_{r-1})
    """
    if not 0 <= j <= l:
        raise ValueError("need 0 <= j <= l")
    if r < 1:
        raise ValueError("need r >= 1")
    q = p.q
    num = q**j * q ** (l * (r - 1)) * poch_std(q, l) * _inv_poch(q, l - j + r - 1)
    den = poch_std(q, j) * _inv_poch(q, l - j) * _inv_poch(q, r - 1)
    return num / den


def row_law_limit(r: int, j: int, p: FristedtParams, eps) -> Interval:
    """Probability that the r-th row has size j:  (q)_inf q^(rj) / ((q)_j (q)_{r-1})."""
    if r < 1 or j < 0:
        raise ValueError("need r >= 1 and j >= 0")
    q = p.q
    ratio = q ** (r * j) / (poch_std(q, j) * poch_std(q, r - 1))
    return weight_normalizer(p, eps).scale(ratio)


def first_row_unnormalized(a: int, p: FristedtParams) -> Fraction:
    """Large-start limit of the kernel into a, without (q)_inf:  q^a / (q)_a."""
    if a < 0:
        raise ValueError("state must be >= 0")
    return p.q**a / poch_std(p.q, a)


def f_chain_mass(lam: Partition, p: FristedtParams) -> Fraction:
    """Chain probability of spelling out the rows of lam, without (q)_inf.

    Telescopes to q^|lam| exactly, which is the conditional-uniformity fact.
    """
    rows = lam.parts
    if not rows:
        return _ONE
    mass = first_row_unnormalized(rows[0], p)
    for prev, nxt in zip(rows, rows[1:] + (0,)):
        mass *= f_kernel(prev, nxt, p)
    return mass


# ---------------------------------------------------------------------------
# Sampling

TAIL_BITS = 64


@lru_cache(maxsize=None)
def _first_row_cdf(p: FristedtParams, eps: Fraction):
    q = p.q
    z = weight_normalizer(p, eps)
    if z.lo <= 0:
        raise ValueError("eps too large to certify the support cap")
    bound = Fraction(1, 2**TAIL_BITS)
    a = 0
    while True:
        # sum_{b>a} q^b (q)_inf/(q)_b <= (hi/lo) q^(a+1)/(1-q)
        tail = z.hi / z.lo * q ** (a + 1) / (1 - q)
        if tail < bound:
            break
        a += 1
    return _Cdf([first_row_unnormalized(b, p) for b in range(a + 1)])


@lru_cache(maxsize=None)
def _row_kernel_cdf(a: int, p: FristedtParams):
    return _Cdf([f_kernel(a, b, p) for b in range(a + 1)])


def _draw_rows(p, rng, eps):
    state = _first_row_cdf(p, eps).pick(rng.getrandbits(128))
    rows = []
    while state > 0:
        rows.append(state)
        state = _row_kernel_cdf(state, p).pick(rng.getrandbits(128))
    return tuple(rows)


def f_sample(p: FristedtParams, seed: int, eps=Fraction(1, 2**20)) -> ChainSample:
    """Draw one partition; the chain states are row lengths, and the sampled
    partition is the state sequence itself."""
    rng = random.Random(seed)
    rows = _draw_rows(p, rng, eps)
    return ChainSample(seed=seed, columns=rows, partition=Partition(rows))


def f_sample_stream(p: FristedtParams, seed: int, count: int, eps=Fraction(1, 2**20)):
    rng = random.Random(seed)
    for _ in range(count):
        rows = _draw_rows(p, rng, eps)
        yield ChainSample(seed=seed, columns=rows, partition=Partition(rows))


__all__ = [
    "FristedtParams",
    "f_chain_mass",
    "f_diagonalization",
    "f_kernel",
    "f_kernel_matrix",
    "f_kr_closed",
    "f_sample",
    "f_sample_stream",
    "first_row_unnormalized",
    "row_law_limit",
    "uniform_mass",
    "weight_normalizer",
]
