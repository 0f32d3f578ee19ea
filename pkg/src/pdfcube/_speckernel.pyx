# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: special functions, histogram counts and the
per-bin L1 probability error. Mirrors the API of ``_kernels_py``."""

from libc.math cimport erf as c_erf, exp, fabs, floor, lgamma, log

import numpy as np

cdef double EPS = 1e-16
cdef double FPMIN = 1e-300
cdef int ITMAX = 500


cdef double _gser(double a, double x):
    cdef double ap = a
    cdef double delta = 1.0 / a
    cdef double total = delta
    cdef int i
    for i in range(ITMAX):
        ap += 1.0
        delta *= x / ap
        total += delta
        if fabs(delta) < fabs(total) * EPS:
            break
    return total * exp(-x + a * log(x) - lgamma(a))


cdef double _gcf(double a, double x):
    cdef double b = x + 1.0 - a
    cdef double c = 1.0 / FPMIN
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef int i
    for i in range(1, ITMAX + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return exp(-x + a * log(x) - lgamma(a)) * h


cdef double _gammp(double a, double x) except? -1.0:
    if a <= 0.0:
        raise ValueError("shape parameter must be positive")
    if x < 0.0:
        raise ValueError("argument must be nonnegative")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gser(a, x)
    return 1.0 - _gcf(a, x)


cdef double _betacf(double a, double b, double x):
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef int m, m2
    if fabs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, ITMAX + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return h


cdef double _betai(double a, double b, double x) except? -1.0:
    cdef double bt
    if a <= 0.0 or b <= 0.0:
        raise ValueError("beta parameters must be positive")
    if x < 0.0 or x > 1.0:
        raise ValueError("argument must be in [0, 1]")
    if x == 0.0 or x == 1.0:
        bt = 0.0
    else:
        bt = exp(lgamma(a + b) - lgamma(a) - lgamma(b)
                 + a * log(x) + b * log(1.0 - x))
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def erf(x):
    cdef double[::1] xv, out
    cdef Py_ssize_t i, n
    xs = np.asarray(x, dtype=np.float64)
    if xs.ndim == 0:
        return c_erf(<double> xs)
    flat = np.ascontiguousarray(xs.ravel())
    res = np.empty(flat.shape[0], dtype=np.float64)
    xv = flat
    out = res
    n = flat.shape[0]
    for i in range(n):
        out[i] = c_erf(xv[i])
    return res.reshape(xs.shape)


def gammainc_lower(a, x):
    """Regularized lower incomplete gamma function P(a, x)."""
    cdef double av = a
    cdef double[::1] xv, out
    cdef Py_ssize_t i, n
    xs = np.asarray(x, dtype=np.float64)
    if xs.ndim == 0:
        return _gammp(av, <double> xs)
    flat = np.ascontiguousarray(xs.ravel())
    res = np.empty(flat.shape[0], dtype=np.float64)
    xv = flat
    out = res
    n = flat.shape[0]
    for i in range(n):
        out[i] = _gammp(av, xv[i])
    return res.reshape(xs.shape)


def betainc_reg(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    cdef double av = a
    cdef double bv = b
    cdef double[::1] xv, out
    cdef Py_ssize_t i, n
    xs = np.asarray(x, dtype=np.float64)
    if xs.ndim == 0:
        return _betai(av, bv, <double> xs)
    flat = np.ascontiguousarray(xs.ravel())
    res = np.empty(flat.shape[0], dtype=np.float64)
    xv = flat
    out = res
    n = flat.shape[0]
    for i in range(n):
        out[i] = _betai(av, bv, xv[i])
    return res.reshape(xs.shape)


def histogram_counts(values, double lo, double hi, int nbins):
    """Counts for ``nbins`` even bins over [lo, hi]; last bin right-closed."""
    cdef double[::1] v
    cdef long long[::1] out
    cdef double span = hi - lo
    cdef Py_ssize_t i, n
    cdef long long k
    vals = np.ascontiguousarray(values, dtype=np.float64)
    res = np.zeros(nbins, dtype=np.int64)
    v = vals
    out = res
    n = vals.shape[0]
    for i in range(n):
        k = <long long> floor((v[i] - lo) / span * nbins)
        if k < 0:
            k = 0
        elif k >= nbins:
            k = nbins - 1
        out[k] += 1
    return res


def l1_prob_error(freqs, double total, probs):
    """Sum over bins of |freq/total - prob|."""
    cdef double[::1] f, p
    cdef double acc = 0.0
    cdef Py_ssize_t i, n
    fa = np.ascontiguousarray(freqs, dtype=np.float64)
    pa = np.ascontiguousarray(probs, dtype=np.float64)
    f = fa
    p = pa
    n = fa.shape[0]
    for i in range(n):
        acc += fabs(f[i] / total - p[i])
    return acc
