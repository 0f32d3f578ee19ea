"""Synthetic ensemble generator with known per-point ground truth.

The cube's slice axis is split into contiguous layer bands; every point
in a band draws i.i.d. values from the band's distribution family, with
the location parameter shifted by ``spatial_gradient * (x + y)`` so
(mean, std) varies inside a band while the family stays constant. A
configurable fraction of points per slice copies the observation vector
of its left neighbor, which gives the grouping optimizations something
to deduplicate.

Each run uses an independent seeded stream and fills the volume in a
fixed point order, so generation is reproducible no matter how runs are
scheduled.
"""

import os
from dataclasses import dataclass

import numpy as np

from .cube import CubeGeometry
from .cubeio import DatasetHandle, load_window, write_run
from .cube import WindowSpec
from .distfit import DistributionKind

_GENERATABLE = (
    DistributionKind.NORMAL,
    DistributionKind.LOGNORMAL,
    DistributionKind.EXPONENTIAL,
    DistributionKind.UNIFORM,
)

# Default per-kind (base_location, base_scale); chosen so the four
# families occupy well-separated (mean, std) clusters.
DEFAULT_LAYER_PARAMS = {
    DistributionKind.NORMAL: (0.0, 1.0),
    DistributionKind.LOGNORMAL: (1.0, 1.0),
    DistributionKind.EXPONENTIAL: (1.0, 1.0),
    DistributionKind.UNIFORM: (3.0, 1.0),
}


@dataclass(frozen=True)
class LayerSpec:
    layer_index: int
    kind: DistributionKind
    base_location: float
    base_scale: float

    def __post_init__(self):
        if self.kind not in _GENERATABLE:
            raise ValueError(f"cannot generate layer of kind {self.kind}")
        if self.base_scale <= 0:
            raise ValueError("base_scale must be positive")


@dataclass(frozen=True)
class GenConfig:
    geometry: CubeGeometry
    layers: tuple
    run_count: int
    seed: int
    duplicate_fraction: float = 0.3
    spatial_gradient: float = 0.0

    def __post_init__(self):
        if not self.layers:
            raise ValueError("at least one layer is required")
        if self.run_count < 2:
            raise ValueError("run_count must be >= 2 (std needs n >= 2)")
        if not 0.0 <= self.duplicate_fraction <= 1.0:
            raise ValueError("duplicate_fraction must be in [0, 1]")


def cycling_layers(layer_count):
    """Layer specs cycling Normal, Log-normal, Exponential, Uniform."""
    layers = []
    for i in range(layer_count):
        kind = _GENERATABLE[i % 4]
        loc, scale = DEFAULT_LAYER_PARAMS[kind]
        layers.append(LayerSpec(i, kind, loc, scale))
    return tuple(layers)


@dataclass(frozen=True)
class GroundTruth:
    geometry: CubeGeometry
    kinds: np.ndarray  # kind order index per point
    p1: np.ndarray
    p2: np.ndarray

    def kind_of(self, pid):
        return list(DistributionKind)[self.kinds[pid]]

    def params_of(self, pid):
        return float(self.p1[pid]), float(self.p2[pid])

    def save(self, path):
        all_kinds = list(DistributionKind)
        with open(path, "w") as f:
            for pid in range(self.geometry.total_points):
                f.write(
                    f"{pid},{all_kinds[self.kinds[pid]].value},"
                    f"{float(self.p1[pid])!r},{float(self.p2[pid])!r}\n"
                )

    @classmethod
    def load(cls, path, geometry):
        n = geometry.total_points
        kinds = np.zeros(n, dtype=np.int64)
        p1 = np.zeros(n)
        p2 = np.zeros(n)
        with open(path) as f:
            for line in f:
                pid_s, kind_s, p1_s, p2_s = line.strip().split(",")
                pid = int(pid_s)
                kinds[pid] = DistributionKind(kind_s).order
                p1[pid] = float(p1_s)
                p2[pid] = float(p2_s)
        return cls(geometry, kinds, p1, p2)


def _layer_bands(geom, layers):
    """(first_slice, last_slice_exclusive, layer) bands of equal depth;
    the last band absorbs the remainder."""
    depth = geom.slice_count // len(layers)
    if depth == 0:
        raise ValueError("more layers than slices")
    bands = []
    for i, layer in enumerate(layers):
        z0 = i * depth
        z1 = geom.slice_count if i == len(layers) - 1 else (i + 1) * depth
        bands.append((z0, z1, layer))
    return bands


def _true_params(layer, loc):
    kind = layer.kind
    if kind is DistributionKind.NORMAL:
        return loc, np.full_like(loc, layer.base_scale)
    if kind is DistributionKind.LOGNORMAL:
        return np.log(loc), np.full_like(loc, layer.base_scale)
    if kind is DistributionKind.EXPONENTIAL:
        return 1.0 / loc, np.zeros_like(loc)
    if kind is DistributionKind.UNIFORM:
        return loc - layer.base_scale, loc + layer.base_scale
    raise ValueError(kind)


def _draw_band(rng, layer, loc, size):
    kind = layer.kind
    if kind is DistributionKind.NORMAL:
        return rng.normal(loc, layer.base_scale, size)
    if kind is DistributionKind.LOGNORMAL:
        return rng.lognormal(np.log(loc), layer.base_scale, size)
    if kind is DistributionKind.EXPONENTIAL:
        return rng.exponential(loc, size)
    if kind is DistributionKind.UNIFORM:
        return rng.uniform(loc - layer.base_scale, loc + layer.base_scale, size)
    raise ValueError(kind)


def _duplicate_ids(config):
    """Sorted point ids (per slice) that copy their left neighbor."""
    geom = config.geometry
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0xD0]))
    dup = []
    per_slice = int(config.duplicate_fraction * geom.points_per_slice)
    if per_slice == 0:
        return np.array([], dtype=np.int64)
    eligible_xy = np.array(
        [
            y * geom.points_per_line + x
            for y in range(geom.lines_per_slice)
            for x in range(1, geom.points_per_line)
        ],
        dtype=np.int64,
    )
    per_slice = min(per_slice, eligible_xy.size)
    for z in range(geom.slice_count):
        chosen = rng.choice(eligible_xy, size=per_slice, replace=False)
        dup.extend(z * geom.points_per_slice + chosen)
    return np.array(sorted(dup), dtype=np.int64)


def generate(config, out_dir):
    """Write run files plus a ground-truth sidecar; returns
    (DatasetHandle, GroundTruth)."""
    geom = config.geometry
    os.makedirs(out_dir, exist_ok=True)
    bands = _layer_bands(geom, config.layers)

    xs = np.arange(geom.points_per_line)
    ys = np.arange(geom.lines_per_slice)
    xy_sum = ys[:, None] + xs[None, :]  # (lines, points)

    # Per-point true parameters, before duplication.
    kinds = np.zeros(geom.total_points, dtype=np.int64)
    p1 = np.zeros(geom.total_points)
    p2 = np.zeros(geom.total_points)
    for z0, z1, layer in bands:
        loc = layer.base_location + config.spatial_gradient * xy_sum
        if layer.kind in (DistributionKind.LOGNORMAL, DistributionKind.EXPONENTIAL):
            if np.min(loc) <= 0:
                raise ValueError(
                    f"layer {layer.layer_index}: location must stay positive"
                )
        t1, t2 = _true_params(layer, loc)
        for z in range(z0, z1):
            sl = slice(z * geom.points_per_slice, (z + 1) * geom.points_per_slice)
            kinds[sl] = layer.kind.order
            p1[sl] = t1.ravel()
            p2[sl] = t2.ravel()

    dup_ids = _duplicate_ids(config)
    # Duplicated points actually carry their neighbor's distribution.
    for pid in dup_ids:
        kinds[pid] = kinds[pid - 1]
        p1[pid] = p1[pid - 1]
        p2[pid] = p2[pid - 1]

    paths = []
    for r in range(config.run_count):
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, 1, r]))
        vol = np.empty(geom.total_points, dtype=np.float64)
        for z0, z1, layer in bands:
            loc = layer.base_location + config.spatial_gradient * xy_sum
            for z in range(z0, z1):
                sl = slice(z * geom.points_per_slice, (z + 1) * geom.points_per_slice)
                vol[sl] = _draw_band(rng, layer, loc, loc.shape).ravel()
        # Ascending order keeps chained copies consistent.
        for pid in dup_ids:
            vol[pid] = vol[pid - 1]
        path = os.path.join(out_dir, f"run_{r:04d}.spcb")
        write_run(path, geom, vol)
        paths.append(path)

    gt = GroundTruth(geom, kinds, p1, p2)
    gt.save(os.path.join(out_dir, "ground_truth.csv"))
    return DatasetHandle(paths, geom), gt


def ground_truth_labels(handle, gt, slice_index):
    """(mean, std, kind) per point of a slice; stats come from the actual
    generated values."""
    geom = handle.geometry
    if not 0 <= slice_index < geom.slice_count:
        raise ValueError(f"unknown slice {slice_index}")
    window = WindowSpec(slice_index, 0, geom.lines_per_slice)
    records = load_window(handle, window)
    return [
        (rec.stats.mean, rec.stats.std, gt.kind_of(rec.id)) for rec in records
    ]


def write_labels(path, labels):
    with open(path, "w") as f:
        for m, s, kind in labels:
            f.write(f"{m!r},{s!r},{kind.value}\n")


def read_labels(path):
    labels = []
    with open(path) as f:
        for line in f:
            m_s, s_s, kind_s = line.strip().split(",")
            labels.append((float(m_s), float(s_s), DistributionKind(kind_s)))
    return labels
