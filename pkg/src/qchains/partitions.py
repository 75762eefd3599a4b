"""Integer partitions, bounded enumeration, and the GL-conjugacy measure.

The measure on all partitions is evaluated here by its two finite formulas
(mass_v1, mass_v2); both return the mass *without* the infinite-product
prefactor, which is irrational in general and only available as a certified
interval (measure_normalizer).
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from qchains.qalgebra import Interval, as_fraction, poch_desc, poch_inf

ENUMERATION_CAP = 40


class Partition:
    """A weakly decreasing tuple of positive integers."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p <= 0:
                raise ValueError("parts must be positive")
            if i and parts[i - 1] < p:
                raise ValueError("parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __lt__(self, other):
        return self.parts < other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def part(self, i: int) -> int:
        """The i-th part (1-indexed), 0 beyond the last row."""
        if i < 1:
            raise ValueError("parts are 1-indexed")
        return self.parts[i - 1] if i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        """Column lengths of the diagram: lambda'_j = #{i : lambda_i >= j}."""
        if not self.parts:
            return Partition()
        cols = []
        for j in range(1, self.parts[0] + 1):
            cols.append(sum(1 for p in self.parts if p >= j))
        return Partition(cols)

    def multiplicity(self, i: int) -> int:
        """Number of parts equal to i."""
        return sum(1 for p in self.parts if p == i)

    def multiplicities(self) -> dict:
        out = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    def n_stat(self) -> int:
        """sum_i (i-1) * lambda_i."""
        return sum(i * p for i, p in enumerate(self.parts))

    def to_json(self) -> str:
        return json.dumps(list(self.parts))

    @classmethod
    def from_json(cls, text: str) -> "Partition":
        return cls(json.loads(text))


def conjugate(lam: Partition) -> Partition:
    return lam.conjugate()


def n_stat(lam: Partition) -> int:
    return lam.n_stat()


@lru_cache(maxsize=None)
def _partitions_of(n: int, max_part: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int, cap: int = ENUMERATION_CAP) -> list:
    """All partitions of n, in decreasing lexicographic order of part lists."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the enumeration cap {cap}")
    return [Partition(parts) for parts in _partitions_of(n, n if n else 1)]


def partition_count(n: int, cap: int = ENUMERATION_CAP) -> int:
    if n > cap:
        raise ValueError(f"n = {n} exceeds the enumeration cap {cap}")
    return len(_partitions_of(n, n if n else 1))


@dataclass(frozen=True)
class MeasureParams:
    """Parameters (u, q) of the measure: q > 1, 0 < u <= 1, u/q < 1.

    u = 1 is allowed (the identity-verification limit); normalization claims
    are only made for u < 1.
    """

    u: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", as_fraction(self.u))
        object.__setattr__(self, "q", as_fraction(self.q))
        if self.q <= 1:
            raise ValueError("q must be > 1")
        if not 0 < self.u <= 1:
            raise ValueError("u must satisfy 0 < u <= 1")
        if self.u / self.q >= 1:
            raise ValueError("u/q must be < 1")


def gl_order(m: int, q) -> Fraction:
    """Order of the general linear group of degree m: prod_{i<m} (q^m - q^i)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    q = as_fraction(q)
    qm = q**m
    out = Fraction(1)
    for i in range(m):
        out *= qm - q**i
    return out


def mass_v1(lam: Partition, p: MeasureParams) -> Fraction:
    """Unnormalized mass  u^|lam| / (q^(sum lam'_i^2) prod_i (1/q)_{m_i})."""
    conj = lam.conjugate()
    sq = sum(c * c for c in conj.parts)
    denom = p.q**sq
    for m in lam.multiplicities().values():
        denom *= poch_desc(1 / p.q, m, p.q).value
    return p.u**lam.size / denom


def mass_v2(lam: Partition, p: MeasureParams) -> Fraction:
    """Unnormalized mass via multiplicities and GL orders:

    u^|lam| / (q^(2[sum_{h<i} h m_h m_i + (1/2) sum_i (i-1) m_i^2])
               * prod_i |GL(m_i, q)|)
    """
    mults = lam.multiplicities()
    sizes = sorted(mults)
    expo = 0
    for a, h in enumerate(sizes):
        for i in sizes[a + 1 :]:
            expo += 2 * h * mults[h] * mults[i]
        expo += (h - 1) * mults[h] ** 2
    denom = p.q**expo
    for h in sizes:
        denom *= gl_order(mults[h], p.q)
    return p.u**lam.size / denom


def measure_normalizer(p: MeasureParams, eps) -> Interval:
    """Certified interval for the prefactor prod_{r>=1} (1 - u/q^r)."""
    return poch_inf(p.u, p.q, eps)


__all__ = [
    "ENUMERATION_CAP",
    "MeasureParams",
    "Partition",
    "conjugate",
    "enumerate_partitions",
    "gl_order",
    "mass_v1",
    "mass_v2",
    "measure_normalizer",
    "n_stat",
    "partition_count",
]
