"""Pure-Python twin of the compiled series kernels.

Semantics must match qchains._kernels exactly; the backend is chosen in
qchains._backend. Coefficients are arbitrary-precision ints (the callers
scale rational series onto a common denominator first).
"""

IMPL = "python"


def conv_trunc(a, b, order):
    """Truncated convolution: c[n] = sum_i a[i]*b[n-i] for n = 0..order."""
    la = len(a)
    lb = len(b)
    out = []
    for n in range(order + 1):
        lo = n - lb + 1
        if lo < 0:
            lo = 0
        hi = n if n < la - 1 else la - 1
        acc = 0
        for i in range(lo, hi + 1):
            acc += a[i] * b[n - i]
        out.append(acc)
    return out


def inv_scaled(p, order):
    """Scaled reciprocal of an integer series with p[0] != 0.

    Returns ints c[0..order] such that the true reciprocal of sum p[n] x^n
    has coefficients c[n] / p[0]**(n+1).  Derived from the recurrence
    sum_{k=0..n} p[k] * b[n-k] = 0 with b[n] = c[n] / p[0]**(n+1).
    """
    p0 = p[0]
    if p0 == 0:
        raise ZeroDivisionError("series has zero constant term")
    lp = len(p)
    c = [1]
    if p0 == 1:
        for n in range(1, order + 1):
            acc = 0
            top = n if n < lp - 1 else lp - 1
            for k in range(1, top + 1):
                acc += p[k] * c[n - k]
            c.append(-acc)
    elif p0 == -1:
        # p0**(k-1) alternates sign
        for n in range(1, order + 1):
            acc = 0
            top = n if n < lp - 1 else lp - 1
            for k in range(1, top + 1):
                t = p[k] * c[n - k]
                acc += t if k % 2 == 1 else -t
            c.append(-acc)
    else:
        pows = [1]  # p0**(k-1) for k = 1.. as needed
        for n in range(1, order + 1):
            acc = 0
            top = n if n < lp - 1 else lp - 1
            while len(pows) < top:
                pows.append(pows[-1] * p0)
            for k in range(1, top + 1):
                acc += p[k] * c[n - k] * pows[k - 1]
            c.append(-acc)
    return c


def geom_inv_mul(a, r, order):
    """Multiply coefficients a by 1/(1 - x^r): out[n] = a[n] + out[n-r]."""
    if r <= 0:
        raise ValueError("stride must be positive")
    la = len(a)
    out = []
    for n in range(order + 1):
        acc = a[n] if n < la else 0
        if n >= r:
            acc += out[n - r]
        out.append(acc)
    return out
