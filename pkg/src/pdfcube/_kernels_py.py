"""Pure-Python numeric kernels.

Fallback twin of the compiled ``_speckernel`` extension; both modules
expose the same functions so ``kernels`` can pick either at import.
The incomplete gamma/beta routines use the classic series + modified
Lentz continued-fraction evaluation in double precision.
"""

import math

import numpy as np

_EPS = 1e-16
_FPMIN = 1e-300
_ITMAX = 500


def _gser(a, x):
    ap = a
    total = delta = 1.0 / a
    for _ in range(_ITMAX):
        ap += 1.0
        delta *= x / ap
        total += delta
        if abs(delta) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gcf(a, x):
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _ITMAX + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def _gammp(a, x):
    if a <= 0.0:
        raise ValueError("shape parameter must be positive")
    if x < 0.0:
        raise ValueError("argument must be nonnegative")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gser(a, x)
    return 1.0 - _gcf(a, x)


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _ITMAX + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def _betai(a, b, x):
    if a <= 0.0 or b <= 0.0:
        raise ValueError("beta parameters must be positive")
    if x < 0.0 or x > 1.0:
        raise ValueError("argument must be in [0, 1]")
    if x == 0.0 or x == 1.0:
        bt = 0.0
    else:
        bt = math.exp(
            math.lgamma(a + b)
            - math.lgamma(a)
            - math.lgamma(b)
            + a * math.log(x)
            + b * math.log(1.0 - x)
        )
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def _vectorize(fn, x, *args):
    xs = np.asarray(x, dtype=np.float64)
    if xs.ndim == 0:
        return fn(float(xs), *args)
    flat = [fn(float(t), *args) for t in xs.ravel()]
    return np.array(flat, dtype=np.float64).reshape(xs.shape)


def erf(x):
    return _vectorize(math.erf, x)


def gammainc_lower(a, x):
    """Regularized lower incomplete gamma function P(a, x)."""
    return _vectorize(lambda t: _gammp(a, t), x)


def betainc_reg(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    return _vectorize(lambda t: _betai(a, b, t), x)


def histogram_counts(values, lo, hi, nbins):
    """Counts for ``nbins`` even bins over [lo, hi]; last bin right-closed."""
    v = np.asarray(values, dtype=np.float64)
    idx = np.floor((v - lo) / (hi - lo) * nbins).astype(np.int64)
    np.clip(idx, 0, nbins - 1, out=idx)
    return np.bincount(idx, minlength=nbins).astype(np.int64)


def l1_prob_error(freqs, total, probs):
    """Sum over bins of |freq/total - prob|."""
    f = np.asarray(freqs, dtype=np.float64)
    p = np.asarray(probs, dtype=np.float64)
    return float(np.abs(f / total - p).sum())
