"""Per-point and per-slice statistics and the histogram error metric.

The error metric compares, bin by bin, the empirical fraction of
observations with the model probability of the same interval and sums
the absolute differences. Bins split [min, max] evenly; the maximum
value lands in the last bin.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels


class DegenerateSampleError(ValueError):
    """All observations are equal; the histogram range collapses."""


@dataclass(frozen=True)
class PointStats:
    mean: float
    std: float


@dataclass(frozen=True)
class Histogram:
    min: float
    max: float
    bin_count: int
    freqs: np.ndarray
    total: int

    def edges(self):
        """bin_count + 1 bin edges from min to max."""
        span = self.max - self.min
        return self.min + span * np.arange(self.bin_count + 1) / self.bin_count


def mean(values):
    v = np.asarray(values, dtype=np.float64)
    if v.size < 1:
        raise ValueError("mean requires at least one value")
    return float(v.mean())


def sample_std(values):
    """Standard deviation with the n-1 denominator."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ValueError("sample_std requires at least two values")
    return float(v.std(ddof=1))


def central_moment(values, order):
    """Unnormalized central moment: sum of (v - mean)**order."""
    if order < 2:
        raise ValueError("order must be >= 2")
    v = np.asarray(values, dtype=np.float64)
    if v.size < 1:
        raise ValueError("central_moment requires at least one value")
    return float(np.sum((v - v.mean()) ** order))


def histogram(values, bin_count):
    v = np.asarray(values, dtype=np.float64)
    if v.size < 1:
        raise ValueError("histogram requires at least one value")
    if bin_count < 1:
        raise ValueError("bin_count must be positive")
    lo = float(v.min())
    hi = float(v.max())
    if hi <= lo:
        raise DegenerateSampleError("all values equal; histogram range is empty")
    freqs = kernels.histogram_counts(v, lo, hi, bin_count)
    return Histogram(lo, hi, bin_count, freqs, int(v.size))


def empirical_vs_model_error(hist, interval_probs):
    """Sum over bins of |empirical fraction - model interval probability|."""
    probs = np.asarray(interval_probs, dtype=np.float64)
    if probs.shape != (hist.bin_count,):
        raise ValueError(
            f"expected {hist.bin_count} interval probabilities, got {probs.shape}"
        )
    return kernels.l1_prob_error(hist.freqs, float(hist.total), probs)


def slice_averages(stats):
    """(average mean, average std) over a collection of PointStats."""
    items = list(stats)
    if not items:
        raise ValueError("slice_averages requires at least one point")
    avg_mean = sum(s.mean for s in items) / len(items)
    avg_std = sum(s.std for s in items) / len(items)
    return avg_mean, avg_std


def average_error(errors):
    errs = np.asarray(list(errors), dtype=np.float64)
    if errs.size < 1:
        raise ValueError("average_error requires at least one error")
    return float(errs.mean())
