import math

import numpy as np
import pytest

from pdfcube.stats import (
    DegenerateSampleError,
    Histogram,
    PointStats,
    average_error,
    central_moment,
    empirical_vs_model_error,
    histogram,
    mean,
    sample_std,
    slice_averages,
)


def test_mean_trivial():
    assert mean([1, 2, 3]) == 2
    assert mean([5]) == 5


def test_mean_matches_fsum_oracle():
    rng = np.random.default_rng(0)
    v = rng.normal(size=1000) * 1e6
    oracle = math.fsum(v) / len(v)  # compensated summation
    assert mean(v) == pytest.approx(oracle, rel=1e-12)


def test_sample_std_trivial():
    assert sample_std([1, 2, 3]) == pytest.approx(1.0)
    assert sample_std([4, 4, 4, 4]) == 0.0
    assert sample_std([1, 2, 3, 4, 5]) == pytest.approx(math.sqrt(2.5))


def test_sample_std_requires_two():
    with pytest.raises(ValueError):
        sample_std([1.0])


def test_central_moment_order2_identity():
    rng = np.random.default_rng(1)
    v = rng.normal(size=100)
    assert central_moment(v, 2) == pytest.approx(
        (len(v) - 1) * np.var(v, ddof=1), rel=1e-12
    )


def test_central_moment_symmetry():
    assert central_moment([-1, 0, 1], 3) == pytest.approx(0.0, abs=1e-15)


def test_central_moment_matches_loop_oracle():
    rng = np.random.default_rng(2)
    v = rng.normal(size=500)
    mu = math.fsum(v) / len(v)
    oracle = math.fsum((x - mu) ** 4 for x in v)
    assert central_moment(v, 4) == pytest.approx(oracle, rel=1e-12)


def test_central_moment_rejects_low_order():
    with pytest.raises(ValueError):
        central_moment([1, 2], 1)


def test_histogram_trivial():
    h = histogram([0, 1, 2, 3], 2)
    assert list(h.freqs) == [2, 2]
    assert h.total == 4


def test_histogram_max_in_last_bin():
    # 0.999 lands in [0.5, 1) and the max closes the last bin.
    h = histogram([0.0, 0.999, 1.0], 2)
    assert list(h.freqs) == [1, 2]


def test_histogram_uniform_binomial_bound():
    rng = np.random.default_rng(3)
    h = histogram(rng.uniform(size=10000), 10)
    sigma = math.sqrt(10000 * 0.1 * 0.9)
    assert all(abs(f - 1000) < 5 * sigma for f in h.freqs)


def test_histogram_degenerate():
    with pytest.raises(DegenerateSampleError):
        histogram([3.0, 3.0, 3.0], 10)


def test_error_zero_for_exact_model():
    h = histogram([0, 1, 2, 3], 2)
    assert empirical_vs_model_error(h, [0.5, 0.5]) == 0.0


def test_error_maximal_disagreement():
    h = Histogram(0.0, 1.0, 2, np.array([1, 0]), 1)
    assert empirical_vs_model_error(h, [0.0, 1.0]) == 2.0


def test_error_matches_loop_oracle():
    rng = np.random.default_rng(4)
    freqs = rng.integers(0, 50, size=100)
    total = int(freqs.sum()) or 1
    probs = rng.uniform(size=100)
    probs /= probs.sum()
    h = Histogram(0.0, 1.0, 100, freqs, total)
    oracle = math.fsum(abs(f / total - p) for f, p in zip(freqs, probs))
    assert empirical_vs_model_error(h, probs) == pytest.approx(oracle, rel=1e-12)


def test_error_length_mismatch():
    h = histogram([0, 1], 2)
    with pytest.raises(ValueError):
        empirical_vs_model_error(h, [1.0])


def test_slice_averages():
    assert slice_averages([PointStats(3.0, 0.5)] * 4) == (3.0, 0.5)
    assert slice_averages([PointStats(0, 1), PointStats(2, 3)]) == (1.0, 2.0)


def test_slice_averages_matches_flat_oracle():
    rng = np.random.default_rng(5)
    mus = rng.normal(size=300)
    sds = rng.uniform(size=300)
    stats = [PointStats(m, s) for m, s in zip(mus, sds)]
    am, asd = slice_averages(stats)
    assert am == pytest.approx(math.fsum(mus) / 300, rel=1e-12)
    assert asd == pytest.approx(math.fsum(sds) / 300, rel=1e-12)


def test_average_error():
    assert average_error([0, 0, 0]) == 0.0
    assert average_error([0.1, 0.3]) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        average_error([])


def test_mean_std_permutation_invariant():
    rng = np.random.default_rng(6)
    v = rng.normal(size=50)
    p = rng.permutation(v)
    assert mean(v) == pytest.approx(mean(p), rel=1e-12)
    assert sample_std(v) == pytest.approx(sample_std(p), rel=1e-12)
