# cython: boundscheck=False, wraparound=False
"""Compiled series kernels: truncated convolution and scaled reciprocal.

Coefficients are Python ints (arbitrary precision); the speedup over the
pure twin comes from removing interpreter dispatch in the inner loops.
Semantics must match qchains._kernels_py exactly.
"""

IMPL = "cython"


def conv_trunc(list a, list b, Py_ssize_t order):
    """Truncated convolution: c[n] = sum_i a[i]*b[n-i] for n = 0..order."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t n, i, lo, hi
    cdef list out = []
    cdef object acc
    for n in range(order + 1):
        lo = n - lb + 1
        if lo < 0:
            lo = 0
        hi = n if n < la - 1 else la - 1
        acc = 0
        for i in range(lo, hi + 1):
            acc = acc + a[i] * b[n - i]
        out.append(acc)
    return out


def inv_scaled(list p, Py_ssize_t order):
    """Scaled reciprocal of an integer series with p[0] != 0.

    Returns ints c[0..order] such that the true reciprocal of sum p[n] x^n
    has coefficients c[n] / p[0]**(n+1).
    """
    cdef object p0 = p[0]
    if p0 == 0:
        raise ZeroDivisionError("series has zero constant term")
    cdef Py_ssize_t lp = len(p)
    cdef Py_ssize_t n, k, top
    cdef list c = [1]
    cdef list pows
    cdef object acc, t
    if p0 == 1:
        for n in range(1, order + 1):
            acc = 0
            top = n if n < lp - 1 else lp - 1
            for k in range(1, top + 1):
                acc = acc + p[k] * c[n - k]
            c.append(-acc)
    elif p0 == -1:
        for n in range(1, order + 1):
            acc = 0
            top = n if n < lp - 1 else lp - 1
            for k in range(1, top + 1):
                t = p[k] * c[n - k]
                acc = acc + t if k % 2 == 1 else acc - t
            c.append(-acc)
    else:
        pows = [1]
        for n in range(1, order + 1):
            acc = 0
            top = n if n < lp - 1 else lp - 1
            while len(pows) < top:
                pows.append(pows[len(pows) - 1] * p0)
            for k in range(1, top + 1):
                acc = acc + p[k] * c[n - k] * pows[k - 1]
            c.append(-acc)
    return c


def geom_inv_mul(list a, Py_ssize_t r, Py_ssize_t order):
    """Multiply coefficients a by 1/(1 - x^r): out[n] = a[n] + out[n-r]."""
    if r <= 0:
        raise ValueError("stride must be positive")
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t n
    cdef list out = []
    cdef object acc
    for n in range(order + 1):
        acc = a[n] if n < la else 0
        if n >= r:
            acc = acc + out[n - r]
        out.append(acc)
    return out
