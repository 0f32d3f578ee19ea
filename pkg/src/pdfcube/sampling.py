"""Fast slice-feature estimation by sampling.

Samples points from a slice, loads only their observation vectors,
predicts each point's distribution kind with the tree model and
aggregates average mean/std plus per-kind percentages. No per-point
histogram error is computed on this path.

Two samplers: uniform random (default) and k-means representatives on
z-score standardized (mean, std), where each cluster contributes the
member nearest its centroid.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cube import WindowSpec
from .dtree import DecisionTreeModel
from .distfit import FOUR_TYPES, DistributionKind
from .grouping import group_window, stat_key
from .cubeio import PointRecord, load_window
from .stats import PointStats, sample_std


@dataclass(frozen=True)
class SamplingConfig:
    rate: float
    sampler: str = "random"  # "random" | "kmeans"
    seed: int = 0
    group_before_predict: bool = False

    def __post_init__(self):
        if not 0.0 < self.rate <= 1.0:
            raise ValueError("rate must be in (0, 1]")
        if self.sampler not in ("random", "kmeans"):
            raise ValueError(f"unknown sampler {self.sampler!r}")


@dataclass(frozen=True)
class SliceFeatures:
    avg_mean: float
    avg_std: float
    type_percentages: dict
    sampled_count: int
    timings: dict = field(default_factory=dict, compare=False)


def random_sample(point_ids, rate, seed):
    """ceil(rate * N) ids drawn uniformly without replacement."""
    ids = np.asarray(point_ids, dtype=np.int64)
    if ids.size == 0:
        raise ValueError("cannot sample an empty slice")
    if not 0.0 < rate <= 1.0:
        raise ValueError("rate must be in (0, 1]")
    k = math.ceil(rate * ids.size)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(ids, size=k, replace=False)
    return sorted(int(i) for i in chosen)


def _standardize(features):
    mu = features.mean(axis=0)
    sd = features.std(axis=0)
    sd[sd == 0] = 1.0
    return (features - mu) / sd


def kmeans_sample(stats, rate, seed, max_iter=50, tol=1e-6):
    """k-means on standardized (mean, std); returns the member nearest
    each centroid (distinct ids, ties to the smallest id)."""
    items = list(stats)
    if not items:
        raise ValueError("cannot sample an empty slice")
    if not 0.0 < rate <= 1.0:
        raise ValueError("rate must be in (0, 1]")
    pids = np.array([pid for pid, _, _ in items], dtype=np.int64)
    X = _standardize(np.array([(m, s) for _, m, s in items], dtype=np.float64))
    n = len(items)
    k = min(math.ceil(rate * n), n)

    rng = np.random.default_rng(seed)
    # Farthest-point initialization from a seeded start.
    centers = [int(rng.integers(n))]
    dist = np.linalg.norm(X - X[centers[0]], axis=1)
    while len(centers) < k:
        nxt = int(dist.argmax())
        centers.append(nxt)
        dist = np.minimum(dist, np.linalg.norm(X - X[nxt], axis=1))
    centroids = X[centers].copy()

    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        new_centroids = centroids.copy()
        for c in range(k):
            members = assign == c
            if members.any():
                new_centroids[c] = X[members].mean(axis=0)
        shift = np.abs(new_centroids - centroids).max()
        centroids = new_centroids
        if shift < tol:
            break

    # One distinct representative per centroid, nearest first, ties by id.
    chosen = set()
    reps = []
    for c in range(k):
        d = np.linalg.norm(X - centroids[c], axis=1)
        order = np.lexsort((pids, d))
        for idx in order:
            pid = int(pids[idx])
            if pid not in chosen:
                chosen.add(pid)
                reps.append(pid)
                break
    return sorted(reps)


def _slice_point_ids(geom, slice_index):
    base = slice_index * geom.points_per_slice
    return np.arange(base, base + geom.points_per_slice, dtype=np.int64)


def _all_slice_stats(handle, slice_index):
    window = WindowSpec(slice_index, 0, handle.geometry.lines_per_slice)
    records = load_window(handle, window)
    return [(rec.id, rec.stats.mean, rec.stats.std) for rec in records]


def slice_features(handle, slice_index, config, model, kinds=FOUR_TYPES):
    """Sampled slice features: average mean/std over the sampled points
    and the per-kind percentage of predicted distribution types."""
    if not isinstance(model, DecisionTreeModel):
        raise ValueError("slice_features requires a trained decision tree model")
    geom = handle.geometry
    ids = _slice_point_ids(geom, slice_index)

    t0 = time.monotonic()
    if config.sampler == "kmeans":
        sampled = kmeans_sample(
            _all_slice_stats(handle, slice_index), config.rate, config.seed
        )
    else:
        sampled = random_sample(ids, config.rate, config.seed)
    sample_seconds = time.monotonic() - t0

    t0 = time.monotonic()
    records = []
    for pid in sampled:
        values = handle.read_point(pid)
        records.append(
            PointRecord(
                pid,
                PointStats(float(values.mean()), sample_std(values)),
                values,
            )
        )
    load_seconds = time.monotonic() - t0

    t0 = time.monotonic()
    if config.group_before_predict:
        groups = group_window(records, key_fn=stat_key)
    else:
        groups = None

    counts = {kind: 0 for kind in kinds}
    if groups is not None:
        # Each member counts via its representative's prediction.
        for group in groups:
            kind = model.predict(
                group.representative.stats.mean, group.representative.stats.std
            )
            counts[kind] = counts.get(kind, 0) + len(group.member_ids)
    else:
        for rec in records:
            kind = model.predict(rec.stats.mean, rec.stats.std)
            counts[kind] = counts.get(kind, 0) + 1

    total = len(records)
    percentages = {kind: counts.get(kind, 0) / total for kind in counts}
    avg_mean = sum(r.stats.mean for r in records) / total
    avg_std = sum(r.stats.std for r in records) / total
    predict_seconds = time.monotonic() - t0

    return SliceFeatures(
        avg_mean=avg_mean,
        avg_std=avg_std,
        type_percentages=percentages,
        sampled_count=total,
        timings={
            "sample_seconds": sample_seconds,
            "load_seconds": load_seconds,
            "predict_seconds": predict_seconds,
        },
    )


def percentage_distance(a, b):
    """Euclidean distance between two type-percentage maps."""
    if set(a) != set(b):
        raise ValueError("percentage maps cover different kind universes")
    order = sorted(a, key=lambda k: k.order)
    return math.sqrt(sum((a[k] - b[k]) ** 2 for k in order))
