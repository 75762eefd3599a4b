"""Exact rational scalars, q-Pochhammer symbols, and truncated power series.

Two Pochhammer conventions coexist and are kept apart by name:

* ``poch_std(x, n)``  = (1-x)(1-x^2)...(1-x^n)           (ascending powers)
* ``poch_desc(x, n, q)`` = (1-x)(1-x/q)...(1-x/q^(n-1))  (descending powers),
  with the convention that the symbol is zero for n < 0.

Scalars are fractions.Fraction throughout; nothing in this module rounds.
Series are truncated at a known order: coefficients beyond the order are
unknown (not zero), so binary operations shrink to the smaller order and
equality only compares up to the common order.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from qchains._backend import conv_trunc, geom_inv_mul, inv_scaled

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, and "p/q" strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


# ---------------------------------------------------------------------------
# Certified enclosures for (irrational) infinite products


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] with exact rational endpoints.

    Used wherever an infinite product enters: the true value is certified to
    lie inside, and downstream exact statements are phrased so the interval
    either cancels or carries through arithmetic done here.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @classmethod
    def point(cls, value) -> "Interval":
        value = as_fraction(value)
        return cls(value, value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def scale(self, c: Fraction) -> "Interval":
        c = as_fraction(c)
        if c >= 0:
            return Interval(self.lo * c, self.hi * c)
        return Interval(self.hi * c, self.lo * c)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        corners = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(min(corners), max(corners))

    def inverse(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ValueError("interval straddles zero")
        return Interval(1 / self.hi, 1 / self.lo)


# ---------------------------------------------------------------------------
# Pochhammer symbols


@dataclass(frozen=True)
class PochValue:
    """Value of a descending Pochhammer symbol.

    is_zero_by_convention marks the n < 0 case; a flagged value appearing in
    a denominator annihilates the enclosing term (the term evaluates to 0).
    """

    value: Fraction
    is_zero_by_convention: bool = False


@lru_cache(maxsize=None)
def _poch_std_frac(x: Fraction, n: int) -> Fraction:
    if n == 0:
        return _ONE
    return _poch_std_frac(x, n - 1) * (1 - x**n)


def poch_std(x, n: int):
    """(1-x)(1-x^2)...(1-x^n); the empty product 1 for n = 0.

    x may be a Fraction (exact scalar result) or a QSeries (truncated
    series result).
    """
    if n < 0:
        raise ValueError("poch_std needs n >= 0")
    if isinstance(x, QSeries):
        if x.is_gen():
            return euler_poch(n, x.order, x.var)
        out = QSeries.one(x.order, x.var)
        for r in range(1, n + 1):
            out = out * (QSeries.one(x.order, x.var) - x**r)
        return out
    return _poch_std_frac(as_fraction(x), n)


@lru_cache(maxsize=None)
def _poch_desc_frac(x: Fraction, q: Fraction, n: int) -> Fraction:
    if n == 0:
        return _ONE
    return _poch_desc_frac(x, q, n - 1) * (1 - x / q ** (n - 1))


def poch_desc(x, n: int, q) -> PochValue:
    """(1-x)(1-x/q)...(1-x/q^(n-1)), zero-by-convention for n < 0."""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    if n < 0:
        return PochValue(_ZERO, is_zero_by_convention=True)
    return PochValue(_poch_desc_frac(as_fraction(x), q, n))


def poch_desc_extended(x, n: int, q) -> Fraction:
    """Analytic extension of poch_desc to n = -1.

    Forced by the recurrence (x)_n = (x)_{n-1} * (1 - x/q^(n-1)) at n = 0:
    (x)_{-1} = 1/(1 - x*q).
    """
    if n != -1:
        raise ValueError("extension is defined only for n = -1")
    x = as_fraction(x)
    q = as_fraction(q)
    if x * q == 1:
        raise ValueError("singular extension: x*q = 1")
    return 1 / (1 - x * q)


def poch_inf(x, q, eps) -> Interval:
    """Certified enclosure of the infinite product prod_{r>=1} (1 - x/q^r).

    Needs q > 1 and 0 <= x < q so every factor lies in (0, 1].  The interval
    has width <= eps; its upper endpoint is the partial product at the cutoff
    chosen from the geometric tail bound sum_{r>R} x/q^r <= eps/2.
    """
    x = as_fraction(x)
    q = as_fraction(q)
    eps = as_fraction(eps)
    if q <= 1:
        raise ValueError("infinite product needs q > 1")
    if not 0 <= x < q:
        raise ValueError("need 0 <= x < q")
    if x == 0:
        return Interval(_ONE, _ONE)
    if eps <= 0:
        raise ValueError("eps must be positive")
    tail = Fraction(x, q - 1)  # sum_{r>R} x/q^r at R = 0
    rr = 0
    while tail > eps / 2:
        tail /= q
        rr += 1
    partial = _ONE
    for r in range(1, rr + 1):
        partial *= 1 - x / q**r
    # prod_{r>R}(1 - x/q^r) >= 1 - tail (Weierstrass), and each factor <= 1
    return Interval(partial * (1 - tail), partial)


# ---------------------------------------------------------------------------
# Truncated power series


class QSeries:
    """Truncated formal power series with exact rational coefficients.

    Coefficients of exponents > order are unknown, not zero.  The variable
    tag is "x" or "y" with y^2 = x; the y carrier exists so theta sums with
    half-integer x-exponents stay integral.
    """

    __slots__ = ("coeffs", "order", "var", "_scaled")

    def __init__(self, coeffs, order=None, var="x"):
        coeffs = [as_fraction(c) for c in coeffs]
        if order is None:
            if not coeffs:
                raise ValueError("order is required for empty coefficients")
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        if len(coeffs) > order + 1:
            raise ValueError("more coefficients than order+1; truncate explicitly")
        if var not in ("x", "y"):
            raise ValueError("variable tag must be 'x' or 'y'")
        coeffs.extend([_ZERO] * (order + 1 - len(coeffs)))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "_scaled", None)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors

    @classmethod
    def zero(cls, order, var="x"):
        return cls([], order=order, var=var)

    @classmethod
    def one(cls, order, var="x"):
        return cls([_ONE], order=order, var=var)

    @classmethod
    def constant(cls, value, order, var="x"):
        return cls([as_fraction(value)], order=order, var=var)

    @classmethod
    def gen(cls, order, var="x"):
        """The series of the variable itself."""
        if order < 1:
            raise ValueError("generator needs order >= 1")
        return cls([_ZERO, _ONE], order=order, var=var)

    @classmethod
    def from_dict(cls, terms, order, var="x"):
        coeffs = [_ZERO] * (order + 1)
        for e, c in terms.items():
            if 0 <= e <= order:
                coeffs[e] = as_fraction(c)
            elif e < 0:
                raise ValueError("negative exponent")
        return cls(coeffs, order=order, var=var)

    @classmethod
    def _from_ints(cls, nums, den, order, var):
        if den == 1:
            coeffs = [Fraction(n) for n in nums[: order + 1]]
        else:
            coeffs = [Fraction(n, den) for n in nums[: order + 1]]
        return cls(coeffs, order=order, var=var)

    # -- internals

    def _as_ints(self):
        """Coefficients scaled onto a common denominator: (nums, den)."""
        if self._scaled is None:
            den = 1
            for c in self.coeffs:
                d = c.denominator
                den = den // gcd(den, d) * d
            nums = [c.numerator * (den // c.denominator) for c in self.coeffs]
            object.__setattr__(self, "_scaled", (nums, den))
        return self._scaled

    def _check_var(self, other):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def is_gen(self) -> bool:
        return (
            self.order >= 1
            and self.coeffs[1] == 1
            and all(c == 0 for i, c in enumerate(self.coeffs) if i != 1)
        )

    # -- ring operations

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, self.order, self.var)
        self._check_var(other)
        n = min(self.order, other.order)
        return QSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)],
            order=n,
            var=self.var,
        )

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], order=self.order, var=self.var)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, self.order, self.var)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            return QSeries([c * a for a in self.coeffs], order=self.order, var=self.var)
        self._check_var(other)
        n = min(self.order, other.order)
        na, da = self._as_ints()
        nb, db = other._as_ints()
        return QSeries._from_ints(conv_trunc(na, nb, n), da * db, n, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power; use series_inv")
        out = QSeries.one(self.order, self.var)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def __eq__(self, other):
        """Equality up to the common truncation order."""
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.var != other.var:
            return False
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    __hash__ = None  # equality is only up to common order

    # -- structure

    def coefficient(self, e: int) -> Fraction:
        if not 0 <= e <= self.order:
            raise IndexError(f"exponent {e} outside known range 0..{self.order}")
        return self.coeffs[e]

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(list(self.coeffs[: order + 1]), order=order, var=self.var)

    def shift(self, e: int) -> "QSeries":
        """Multiply by var^e; the result is known to order+e."""
        if e < 0:
            raise ValueError("negative shift")
        return QSeries(
            [_ZERO] * e + list(self.coeffs), order=self.order + e, var=self.var
        )

    def mul_one_minus_pow(self, e: int) -> "QSeries":
        """Multiply by (1 - var^e) in O(order) coefficient operations."""
        if e <= 0:
            raise ValueError("exponent must be positive")
        coeffs = list(self.coeffs)
        for i in range(self.order, e - 1, -1):
            coeffs[i] = coeffs[i] - coeffs[i - e]
        return QSeries(coeffs, order=self.order, var=self.var)

    def mul_geom_inv(self, r: int) -> "QSeries":
        """Multiply by 1/(1 - var^r) in O(order) coefficient operations."""
        nums, den = self._as_ints()
        return QSeries._from_ints(
            geom_inv_mul(nums, r, self.order), den, self.order, self.var
        )

    def to_y(self) -> "QSeries":
        """Reinterpret an x-series in y with y^2 = x (exponents double)."""
        if self.var != "x":
            raise ValueError("to_y applies to x-series")
        coeffs = [_ZERO] * (2 * self.order + 2)
        for i, c in enumerate(self.coeffs):
            coeffs[2 * i] = c
        # odd y-exponents of an x-series are identically zero, hence known
        return QSeries(coeffs, order=2 * self.order + 1, var="y")

    def to_x(self) -> "QSeries":
        """Convert a y-series back to x; every odd coefficient must vanish."""
        if self.var != "y":
            raise ValueError("to_x applies to y-series")
        for i in range(1, self.order + 1, 2):
            if self.coeffs[i] != 0:
                raise ValueError(f"odd y-coefficient at exponent {i} is nonzero")
        return QSeries(
            [self.coeffs[2 * i] for i in range(self.order // 2 + 1)],
            order=self.order // 2,
            var="x",
        )

    # -- io

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "order": self.order,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data) -> "QSeries":
        return cls(
            [Fraction(c) for c in data["coeffs"]],
            order=data["order"],
            var=data["var"],
        )

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        if self.order >= 8:
            shown += ", ..."
        return f"QSeries([{shown}], order={self.order}, var={self.var!r})"


def series_inv(s: QSeries) -> QSeries:
    """Multiplicative inverse up to the truncation order."""
    if s.coeffs[0] == 0:
        raise ValueError("series with zero constant term is not invertible")
    nums, den = s._as_ints()
    c = inv_scaled(nums, s.order)
    p0 = nums[0]
    coeffs = []
    pw = p0
    for n in range(s.order + 1):
        coeffs.append(Fraction(den * c[n], pw))
        pw *= p0
    return QSeries(coeffs, order=s.order, var=s.var)


def euler_poch(n: int, order: int, var: str = "x") -> QSeries:
    """(1-v)(1-v^2)...(1-v^n) as a truncated series in the variable v."""
    if n < 0:
        raise ValueError("needs n >= 0")
    nums = [1] + [0] * order
    for r in range(1, min(n, order) + 1):
        for i in range(order, r - 1, -1):
            nums[i] -= nums[i - r]
    return QSeries._from_ints(nums, 1, order, var)


def geometric_inv(r: int, order: int, var: str = "x") -> QSeries:
    """1/(1 - v^r) as a truncated series."""
    return QSeries.one(order, var).mul_geom_inv(r)


def one_minus_product(exponents, order: int, var: str = "x") -> QSeries:
    """prod_e (1 - v^e) over the given exponents, truncated."""
    nums = [1] + [0] * order
    for e in exponents:
        if e <= 0:
            raise ValueError("exponents must be positive")
        for i in range(order, e - 1, -1):
            nums[i] -= nums[i - e]
    return QSeries._from_ints(nums, 1, order, var)


# ---------------------------------------------------------------------------
# Theta sums and the Jacobi triple product


def theta_sum(a: int, b: int, order: int) -> QSeries:
    """Two-sided alternating sum  sum_n (-1)^n y^(a n^2 + b n), truncated.

    Needs a > b >= 0 so all exponents are nonnegative and only finitely many
    terms land below the truncation order.
    """
    if not (a > 0 and b >= 0 and a > b):
        raise ValueError("theta_sum needs a > b >= 0")
    coeffs = [0] * (order + 1)
    n = 0
    while True:
        hit = False
        for m in (n, -n) if n else (0,):
            e = a * m * m + b * m
            if 0 <= e <= order:
                coeffs[e] += -1 if n % 2 else 1
                hit = True
        if not hit and a * n * n - b * n > order:
            break
        n += 1
    return QSeries._from_ints(coeffs, 1, order, "y")


def jacobi_product(v_exp: int, w_exp: int, order: int) -> QSeries:
    """Triple product  prod_n (1-vw^(2n-1))(1-w^(2n-1)/v)(1-w^(2n))
    with v = y^v_exp, w = y^w_exp, truncated at the given order.

    Needs w_exp > v_exp >= 0 so every factor exponent is positive.
    """
    if not (w_exp > v_exp >= 0):
        raise ValueError("jacobi_product needs w_exp > v_exp >= 0")
    nums = [1] + [0] * order
    n = 1
    while True:
        exps = [
            w_exp * (2 * n - 1) + v_exp,
            w_exp * (2 * n - 1) - v_exp,
            2 * n * w_exp,
        ]
        live = [e for e in exps if e <= order]
        if not live:
            break
        for e in live:
            for i in range(order, e - 1, -1):
                nums[i] -= nums[i - e]
        n += 1
    return QSeries._from_ints(nums, 1, order, "y")


def q_binomial_check(n: int, q, order: int | None = None) -> bool:
    """Check the q-binomial theorem as a polynomial identity in y:

        sum_m y^m q^((m^2+m)/2) (q)_n / ((q)_m (q)_{n-m})
            = (1+yq)(1+yq^2)...(1+yq^n)

    with (q)_m the ascending symbol.  The sum runs m = 0..n (the symbol with
    a negative index would vanish).  Exact rational coefficients.
    """
    if n < 0:
        raise ValueError("needs n >= 0")
    q = as_fraction(q)
    for m in range(n + 1):
        if poch_std(q, m) == 0:
            raise ValueError("degenerate q: (q)_m vanishes")
    deg = n if order is None else min(n, order)
    top = poch_std(q, n)
    lhs = QSeries.zero(deg, "y")
    for m in range(deg + 1):
        c = q ** ((m * m + m) // 2) * top / (poch_std(q, m) * poch_std(q, n - m))
        lhs = lhs + QSeries.from_dict({m: c}, deg, "y")
    rhs = QSeries.one(deg, "y")
    y = QSeries.gen(deg, "y") if deg >= 1 else None
    for s in range(1, n + 1):
        if y is None:
            break
        rhs = rhs * (QSeries.one(deg, "y") + (q**s) * y)
    return lhs == rhs


__all__ = [
    "Rational",
    "Interval",
    "PochValue",
    "QSeries",
    "as_fraction",
    "euler_poch",
    "geometric_inv",
    "jacobi_product",
    "one_minus_product",
    "poch_desc",
    "poch_desc_extended",
    "poch_inf",
    "poch_std",
    "q_binomial_check",
    "series_inv",
    "theta_sum",
]
