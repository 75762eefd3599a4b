"""Sum/product sides of the Rogers-Ramanujan and Andrews-Gordon identities,
the absorption-limit series that proves them probabilistically, and Bailey
pairs with the Bailey step.

Everything here is a formal series in x with exact rational coefficients;
the chain parameters enter through the substitution u = x^delta, x = 1/q
(delta is 0 or 1; those are the only two values the pipeline needs).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from qchains.partitions import MeasureParams
from qchains.qalgebra import QSeries, poch_desc

_ZERO = Fraction(0)


@dataclass(frozen=True)
class AGSpec:
    """One identity instance: modulus family k, residue index i, order."""

    k: int
    i: int
    order: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if not 1 <= self.i <= self.k:
            raise ValueError("i must satisfy 1 <= i <= k")
        if self.order < 0:
            raise ValueError("order must be >= 0")


@lru_cache(maxsize=None)
def _inv_poch_table(order: int) -> tuple:
    """1/((1-x)...(1-x^m)) for m = 0..isqrt(order)+1, each to the full order."""
    top = 1
    while top * top <= order:
        top += 1
    out = [QSeries.one(order)]
    for m in range(1, top + 1):
        out.append(out[-1].mul_geom_inv(m))
    return tuple(out)


def ag_sum(spec: AGSpec) -> QSeries:
    """Sum side: over decreasing tails N_1 >= ... >= N_{k-1} >= 0,

        x^(N_1^2+...+N_{k-1}^2 + N_i+...+N_{k-1}) / ((x)_{n_1}...(x)_{n_{k-1}})

    where n_j = N_j - N_{j+1} and (x)_n is the ascending symbol.  Enumeration
    prunes on the exponent, so N_1 never exceeds isqrt(order).
    """
    k, i, order = spec.k, spec.i, spec.order
    inv = _inv_poch_table(order)
    acc = QSeries.zero(order)
    stack = [(1, order, 0, ())]  # (position, value bound, exponent so far, tail)
    while stack:
        pos, bound, expo, tail = stack.pop()
        if pos == k:
            term = QSeries.one(order - expo)
            for nj in _diffs(tail):
                if nj:
                    term = term * inv[nj]
            acc = acc + term.shift(expo)
            continue
        for v in range(bound + 1):
            add = v * v + (v if pos >= i else 0)
            if expo + add > order:
                break
            stack.append((pos + 1, v, expo + add, tail + (v,)))
    return acc


def _diffs(tail):
    """n_j = N_j - N_{j+1} with N_k = 0."""
    return tuple(
        tail[j] - (tail[j + 1] if j + 1 < len(tail) else 0) for j in range(len(tail))
    )


def ag_product(spec: AGSpec) -> QSeries:
    """Product side: prod 1/(1-x^r) over r >= 1 with r, +-i not congruent
    to 0 mod 2k+1."""
    k, i, order = spec.k, spec.i, spec.order
    modulus = 2 * k + 1
    skip = {0, i % modulus, (-i) % modulus}
    out = QSeries.one(order)
    for r in range(1, order + 1):
        if r % modulus not in skip:
            out = out.mul_geom_inv(r)
    return out


def verify_ag(spec: AGSpec):
    """Compare the two sides coefficientwise.

    Returns (True, None) on agreement up to the order, else (False, e) with
    e the smallest mismatching exponent.
    """
    lhs = ag_sum(spec)
    rhs = ag_product(spec)
    for e in range(spec.order + 1):
        if lhs.coeffs[e] != rhs.coeffs[e]:
            return False, e
    return True, None


def absorption_limit_series(r: int, delta: int, order: int) -> QSeries:
    """Large-start limit of the r-step absorption probability, as a series.

    With u = x^delta (delta in {0, 1}) the limit of the r-step closed form
    into the absorbing state is

        sum_{n>=0} (-1)^n x^(r n^2 + delta r n + binom(n,2)) (1 - x^(delta+2n))
                   prod_{s=1}^{n-1} (1 - x^(delta+s)) / prod_{s=1}^{n} (1-x^s)

    with the n = 0 term equal to 1: for delta = 1 the defining expression
    evaluates to 1 directly, for delta = 0 it is the u -> 1 limit.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    acc = QSeries.one(order)
    inv = QSeries.one(order)  # 1/prod_{s<=n}(1-x^s)
    num = QSeries.one(order)  # prod_{s<=n-1}(1-x^(delta+s))
    n = 1
    while True:
        expo = r * n * n + delta * r * n + n * (n - 1) // 2
        if expo > order:
            break
        inv = inv.mul_geom_inv(n)
        if n >= 2:
            num = num.mul_one_minus_pow(delta + n - 1)
        reduced = order - expo
        term = num.truncate(reduced) * inv
        term = term.mul_one_minus_pow(delta + 2 * n)
        if n % 2:
            term = -term
        acc = acc + term.shift(expo)
        n += 1
    return acc


# ---------------------------------------------------------------------------
# Bailey pairs


@dataclass(frozen=True)
class BaileyPair:
    """Finite sequences (alpha, beta) at fixed (u, q) tied by

        beta_L = sum_{r=0}^{L} alpha_r / ((1/q)_{L-r} (u/q)_{L+r})

    for all L up to the common length.  bailey_check tests the relation;
    bailey_step maps a pair to a new pair (this closure is the lemma).
    """

    alpha: tuple
    beta: tuple
    params: MeasureParams

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(Fraction(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(Fraction(b) for b in self.beta))
        if len(self.alpha) != len(self.beta):
            raise ValueError("alpha and beta must have equal length")
        if not self.alpha:
            raise ValueError("sequences must be nonempty")

    @property
    def l_max(self) -> int:
        return len(self.alpha) - 1

    def to_json(self) -> dict:
        return {
            "u": str(self.params.u),
            "q": str(self.params.q),
            "l_max": self.l_max,
            "alpha": [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
        }


def _beta_from_alpha(alpha, p: MeasureParams):
    u, q = p.u, p.q
    iq, uq = 1 / q, u / q
    beta = []
    for ll in range(len(alpha)):
        acc = _ZERO
        for r in range(ll + 1):
            acc += alpha[r] / (
                poch_desc(iq, ll - r, q).value * poch_desc(uq, ll + r, q).value
            )
        beta.append(acc)
    return tuple(beta)


def bailey_pair_from_alpha(alpha, p: MeasureParams) -> BaileyPair:
    """The unique Bailey pair with the given alpha."""
    alpha = tuple(Fraction(a) for a in alpha)
    return BaileyPair(alpha=alpha, beta=_beta_from_alpha(alpha, p), params=p)


def unit_bailey_pair(p: MeasureParams, l_max: int) -> BaileyPair:
    """The pair with beta = (1, 0, 0, ...); alpha is column 0 of the inverse
    eigenvector matrix."""
    from qchains.glchain import build_diagonalization

    diag = build_diagonalization(l_max, p)
    alpha = tuple(diag.a_inv.entry(r, 0) for r in range(l_max + 1))
    beta = (Fraction(1),) + (_ZERO,) * l_max
    return BaileyPair(alpha=alpha, beta=beta, params=p)


def bailey_check(pair: BaileyPair) -> bool:
    """True iff the defining relation holds exactly for every L <= l_max."""
    return pair.beta == _beta_from_alpha(pair.alpha, pair.params)


def bailey_step(pair: BaileyPair) -> BaileyPair:
    """One Bailey-lemma step:

        alpha'_L = u^L / q^(L^2) alpha_L
        beta'_L  = sum_{r<=L} u^r / (q^(r^2) (1/q)_{L-r}) beta_r

    The input must be a Bailey pair; the output then is one (in matrix form
    alpha' = E alpha and beta' = M beta with M A = A E).
    """
    if not bailey_check(pair):
        raise ValueError("input does not satisfy the Bailey pair relation")
    u, q = pair.params.u, pair.params.q
    iq = 1 / q
    alpha = tuple(
        u**ll / q ** (ll * ll) * a for ll, a in enumerate(pair.alpha)
    )
    beta = []
    for ll in range(len(pair.beta)):
        acc = _ZERO
        for r in range(ll + 1):
            acc += u**r / (q ** (r * r) * poch_desc(iq, ll - r, q).value) * pair.beta[r]
        beta.append(acc)
    return BaileyPair(alpha=alpha, beta=tuple(beta), params=pair.params)


__all__ = [
    "AGSpec",
    "BaileyPair",
    "absorption_limit_series",
    "ag_product",
    "ag_sum",
    "bailey_check",
    "bailey_pair_from_alpha",
    "bailey_step",
    "unit_bailey_pair",
    "verify_ag",
]
