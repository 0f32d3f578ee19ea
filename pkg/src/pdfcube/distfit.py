"""Candidate distribution families: estimation, CDFs and best-fit search.

Estimation uses closed forms or method-of-moments per family (Weibull
uses a safeguarded Newton MLE for the shape). A family whose support
the sample violates is *inapplicable*: ``estimate`` returns None and the
family is skipped rather than raising.

The best fit for a sample is the applicable family with the smallest
histogram error; ties break by the canonical kind order below.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import kernels
from .stats import (
    DegenerateSampleError,
    empirical_vs_model_error,
    histogram,
    mean,
    sample_std,
)

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)


class DistributionKind(Enum):
    # Declaration order is the canonical tie-break order.
    NORMAL = "normal"
    LOGNORMAL = "lognormal"
    EXPONENTIAL = "exponential"
    UNIFORM = "uniform"
    CAUCHY = "cauchy"
    GAMMA = "gamma"
    GEOMETRIC = "geometric"
    LOGISTIC = "logistic"
    STUDENT_T = "student_t"
    WEIBULL = "weibull"
    # Degenerate marker for constant samples; never a fit candidate.
    POINT_MASS = "point_mass"

    @property
    def order(self):
        return list(DistributionKind).index(self)


FOUR_TYPES = (
    DistributionKind.NORMAL,
    DistributionKind.EXPONENTIAL,
    DistributionKind.UNIFORM,
    DistributionKind.LOGNORMAL,
)

TEN_TYPES = tuple(k for k in DistributionKind if k is not DistributionKind.POINT_MASS)

KIND_SETS = {"4": FOUR_TYPES, "10": TEN_TYPES}


@dataclass(frozen=True)
class DistributionParams:
    kind: DistributionKind
    p1: float
    p2: float = 0.0
    p3: float | None = None  # degrees of freedom (Student's t only)


@dataclass(frozen=True)
class FittedPdf:
    params: DistributionParams
    error: float
    fallback: bool = False


def _canonical(kinds):
    return sorted(set(kinds), key=lambda k: k.order)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------

def _weibull_shape_mle(v, logs, tol=1e-10, max_iter=100):
    """Safeguarded Newton on the Weibull profile-likelihood shape equation."""
    mean_log = logs.mean()
    # Moment-based starting point from the coefficient of variation.
    cv = v.std(ddof=1) / v.mean()
    k = max(1e-3, cv ** -1.086)
    lo, hi = 1e-3, 1e3
    for _ in range(max_iter):
        # Normalized powers keep v**k finite for large shapes; the
        # s1/s0 and s2/s0 ratios are scale invariant.
        vk = np.exp(k * logs - k * logs.max())
        s0 = vk.sum()
        s1 = (vk * logs).sum()
        s2 = (vk * logs * logs).sum()
        f = s1 / s0 - 1.0 / k - mean_log
        if f > 0:
            hi = min(hi, k)
        else:
            lo = max(lo, k)
        fp = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (k * k)
        step = f / fp
        nk = k - step
        if not lo < nk < hi:
            nk = 0.5 * (lo + hi)  # bisection safeguard
        if abs(nk - k) < tol * max(1.0, k):
            return nk
        k = nk
    return None


def estimate(kind, values):
    """Parameters of ``kind`` fitted to the sample, or None if inapplicable."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("estimate requires at least two values")
    mu = mean(v)
    s = sample_std(v)

    if kind is DistributionKind.NORMAL:
        if s <= 0:
            return None
        return DistributionParams(kind, mu, s)

    if kind is DistributionKind.LOGNORMAL:
        if v.min() <= 0:
            return None
        logs = np.log(v)
        ls = sample_std(logs)
        if ls <= 0:
            return None
        return DistributionParams(kind, mean(logs), ls)

    if kind is DistributionKind.EXPONENTIAL:
        if v.min() < 0 or mu <= 0:
            return None
        return DistributionParams(kind, 1.0 / mu)

    if kind is DistributionKind.UNIFORM:
        lo, hi = float(v.min()), float(v.max())
        if hi <= lo:
            return None
        return DistributionParams(kind, lo, hi)

    if kind is DistributionKind.CAUCHY:
        q25, q50, q75 = np.quantile(v, [0.25, 0.5, 0.75])
        scale = (q75 - q25) / 2.0
        if scale <= 0:
            return None
        return DistributionParams(kind, float(q50), float(scale))

    if kind is DistributionKind.GAMMA:
        if v.min() <= 0 or s <= 0:
            return None
        shape = (mu / s) ** 2
        rate = mu / (s * s)
        return DistributionParams(kind, shape, rate)

    if kind is DistributionKind.GEOMETRIC:
        if v.min() < 0 or not np.all(np.abs(v - np.round(v)) <= 1e-6):
            return None
        p = 1.0 / (1.0 + mu)
        if not 0 < p <= 1:
            return None
        return DistributionParams(kind, p)

    if kind is DistributionKind.LOGISTIC:
        if s <= 0:
            return None
        return DistributionParams(kind, mu, s * _SQRT3 / math.pi)

    if kind is DistributionKind.STUDENT_T:
        if s <= 0:
            return None
        m2 = np.sum((v - mu) ** 2)
        m4 = np.sum((v - mu) ** 4)
        kurt = v.size * m4 / (m2 * m2)
        if kurt <= 3.0:
            return None
        df = (4.0 * kurt - 6.0) / (kurt - 3.0)
        df = min(max(df, 2.1), 200.0)
        scale = s * math.sqrt((df - 2.0) / df)
        return DistributionParams(kind, mu, scale, p3=df)

    if kind is DistributionKind.WEIBULL:
        if v.min() <= 0:
            return None
        logs = np.log(v)
        shape = _weibull_shape_mle(v, logs)
        if shape is None:
            cv = s / mu
            shape = max(1e-3, cv ** -1.086)  # moment fallback
        # Scale in log space: exp(log mean(v**k) / k), overflow safe.
        m = shape * logs
        mx = m.max()
        scale = float(math.exp((mx + math.log(np.mean(np.exp(m - mx)))) / shape))
        if shape <= 0 or scale <= 0:
            return None
        return DistributionParams(kind, shape, scale)

    raise ValueError(f"cannot estimate parameters for {kind}")


# ---------------------------------------------------------------------------
# CDF / PDF
# ---------------------------------------------------------------------------

def cdf(params, x):
    """CDF at x (scalar or array), in [0, 1] and nondecreasing."""
    kind = params.kind
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0

    if kind is DistributionKind.NORMAL:
        out = 0.5 * (1.0 + kernels.erf((x - params.p1) / (params.p2 * _SQRT2)))
    elif kind is DistributionKind.LOGNORMAL:
        out = np.where(
            x > 0,
            0.5 * (1.0 + kernels.erf(
                (np.log(np.maximum(x, 1e-300)) - params.p1) / (params.p2 * _SQRT2)
            )),
            0.0,
        )
    elif kind is DistributionKind.EXPONENTIAL:
        out = np.where(x >= 0, 1.0 - np.exp(-params.p1 * np.maximum(x, 0.0)), 0.0)
    elif kind is DistributionKind.UNIFORM:
        out = np.clip((x - params.p1) / (params.p2 - params.p1), 0.0, 1.0)
    elif kind is DistributionKind.CAUCHY:
        out = 0.5 + np.arctan((x - params.p1) / params.p2) / math.pi
    elif kind is DistributionKind.GAMMA:
        out = np.where(
            x > 0,
            kernels.gammainc_lower(params.p1, params.p2 * np.maximum(x, 0.0)),
            0.0,
        )
    elif kind is DistributionKind.GEOMETRIC:
        k = np.maximum(np.floor(x), 0.0)  # negative k would overflow the power
        out = np.where(x >= 0, 1.0 - (1.0 - params.p1) ** (k + 1.0), 0.0)
    elif kind is DistributionKind.LOGISTIC:
        with np.errstate(over="ignore"):  # exp overflow -> cdf 0
            out = 1.0 / (1.0 + np.exp(-(x - params.p1) / params.p2))
    elif kind is DistributionKind.STUDENT_T:
        df = params.p3
        t = (x - params.p1) / params.p2
        xb = df / (df + t * t)
        tail = 0.5 * kernels.betainc_reg(df / 2.0, 0.5, xb)
        out = np.where(t >= 0, 1.0 - tail, tail)
    elif kind is DistributionKind.WEIBULL:
        out = np.where(
            x > 0,
            1.0 - np.exp(-((np.maximum(x, 0.0) / params.p2) ** params.p1)),
            0.0,
        )
    elif kind is DistributionKind.POINT_MASS:
        out = np.where(x >= params.p1, 1.0, 0.0)
    else:
        raise ValueError(f"no CDF for {kind}")

    out = np.asarray(out, dtype=np.float64)
    return float(out) if scalar else out


def pdf(params, x):
    """Density (or mass for the geometric family) at x."""
    kind = params.kind
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0

    if kind is DistributionKind.NORMAL:
        z = (x - params.p1) / params.p2
        out = np.exp(-0.5 * z * z) / (params.p2 * math.sqrt(2 * math.pi))
    elif kind is DistributionKind.LOGNORMAL:
        xs = np.maximum(x, 1e-300)
        z = (np.log(xs) - params.p1) / params.p2
        out = np.where(
            x > 0,
            np.exp(-0.5 * z * z) / (xs * params.p2 * math.sqrt(2 * math.pi)),
            0.0,
        )
    elif kind is DistributionKind.EXPONENTIAL:
        out = np.where(x >= 0, params.p1 * np.exp(-params.p1 * np.maximum(x, 0.0)), 0.0)
    elif kind is DistributionKind.UNIFORM:
        inside = (x >= params.p1) & (x <= params.p2)
        out = np.where(inside, 1.0 / (params.p2 - params.p1), 0.0)
    elif kind is DistributionKind.CAUCHY:
        z = (x - params.p1) / params.p2
        out = 1.0 / (math.pi * params.p2 * (1.0 + z * z))
    elif kind is DistributionKind.GAMMA:
        a, rate = params.p1, params.p2
        xs = np.maximum(x, 1e-300)
        logp = a * math.log(rate) + (a - 1) * np.log(xs) - rate * xs - math.lgamma(a)
        out = np.where(x > 0, np.exp(logp), 0.0)
    elif kind is DistributionKind.GEOMETRIC:
        k = np.round(x)
        p = params.p1
        out = np.where((x >= 0) & (np.abs(x - k) < 1e-9), p * (1 - p) ** k, 0.0)
    elif kind is DistributionKind.LOGISTIC:
        z = np.exp(-(x - params.p1) / params.p2)
        out = z / (params.p2 * (1.0 + z) ** 2)
    elif kind is DistributionKind.STUDENT_T:
        df, scale = params.p3, params.p2
        t = (x - params.p1) / scale
        logc = (
            math.lgamma((df + 1) / 2.0)
            - math.lgamma(df / 2.0)
            - 0.5 * math.log(df * math.pi)
            - math.log(scale)
        )
        out = np.exp(logc - ((df + 1) / 2.0) * np.log1p(t * t / df))
    elif kind is DistributionKind.WEIBULL:
        k, lam = params.p1, params.p2
        xs = np.maximum(x, 1e-300)
        out = np.where(
            x > 0,
            (k / lam) * (xs / lam) ** (k - 1) * np.exp(-((xs / lam) ** k)),
            0.0,
        )
    else:
        raise ValueError(f"no PDF for {kind}")

    out = np.asarray(out, dtype=np.float64)
    return float(out) if scalar else out


def interval_probs(params, hist):
    """Model probability of each histogram bin: CDF(upper) - CDF(lower)."""
    cdfs = cdf(params, hist.edges())
    return np.clip(np.diff(cdfs), 0.0, None)


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _point_mass_fit(value):
    return FittedPdf(DistributionParams(DistributionKind.POINT_MASS, value), 0.0)


def fit_with_params(params, hist):
    return empirical_vs_model_error(hist, interval_probs(params, hist))


def fit_best(values, kinds, bin_count=100):
    """Minimum-error fit among applicable ``kinds``.

    A constant sample yields a point-mass fit with error 0. If no kind
    is applicable, falls back to Uniform over [min, max].
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("fit_best requires at least two values")
    if not kinds:
        raise ValueError("kinds must be nonempty")
    try:
        hist = histogram(v, bin_count)
    except DegenerateSampleError:
        return _point_mass_fit(float(v[0]))

    best = None
    for kind in _canonical(kinds):
        params = estimate(kind, v)
        if params is None:
            continue
        err = fit_with_params(params, hist)
        if best is None or err < best.error:
            best = FittedPdf(params, err)
    if best is None:
        params = DistributionParams(DistributionKind.UNIFORM, float(v.min()), float(v.max()))
        best = FittedPdf(params, fit_with_params(params, hist), fallback=True)
    return best


def fit_with_kind(values, kind, bin_count=100, active_kinds=FOUR_TYPES):
    """Single-family fit; falls back to fit_best (flagged) if inapplicable."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("fit_with_kind requires at least two values")
    try:
        hist = histogram(v, bin_count)
    except DegenerateSampleError:
        return _point_mass_fit(float(v[0]))
    params = estimate(kind, v)
    if params is None:
        return replace(fit_best(v, active_kinds, bin_count), fallback=True)
    return FittedPdf(params, fit_with_params(params, hist))
