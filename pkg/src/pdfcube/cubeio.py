"""Binary ensemble storage: one file per simulation run.

File layout: 4-byte magic ``SPCB``, then four little-endian uint32
fields (format version, slice_count, lines_per_slice, points_per_line)
for a 20-byte header, followed by the dense float32 payload in
slice-major order. A point's offset is ``20 + 4 * point_id``, so both
single points and whole windows are read with one seek.
"""

import os
import struct
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cube import BoundsError, CubeGeometry, point_coords
from .stats import PointStats

MAGIC = b"SPCB"
VERSION = 1
HEADER_SIZE = 20
_HEADER = struct.Struct("<4sIIII")


class FormatError(ValueError):
    """The file is not a valid run file."""


@dataclass(frozen=True)
class PointRecord:
    id: int
    stats: PointStats
    values: np.ndarray


def write_run(path, geometry, values):
    """Write one run volume; re-reading yields bit-identical values."""
    v = np.asarray(values, dtype=np.float32).ravel()
    if v.size != geometry.total_points:
        raise ValueError(
            f"expected {geometry.total_points} values, got {v.size}"
        )
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        geometry.slice_count,
        geometry.lines_per_slice,
        geometry.points_per_line,
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(v.astype("<f4").tobytes())


def read_header(path):
    with open(path, "rb") as f:
        raw = f.read(HEADER_SIZE)
    if len(raw) < HEADER_SIZE:
        raise FormatError(f"{path}: truncated header")
    magic, version, nz, ny, nx = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    return CubeGeometry(points_per_line=nx, lines_per_slice=ny, slice_count=nz)


class DatasetHandle:
    """An ordered set of run files sharing one geometry.

    Reads use ``os.pread`` on per-handle file descriptors, so concurrent
    readers need no shared cursor.
    """

    def __init__(self, run_paths, geometry):
        if not run_paths:
            raise ValueError("dataset needs at least one run file")
        self.run_paths = list(run_paths)
        self.geometry = geometry
        self._fds = None
        self._lock = threading.Lock()

    @property
    def run_count(self):
        return len(self.run_paths)

    @classmethod
    def open(cls, source):
        """Open a dataset directory (lexicographic run order) or list file."""
        source = os.fspath(source)
        if os.path.isdir(source):
            paths = sorted(
                os.path.join(source, name)
                for name in os.listdir(source)
                if name.endswith(".spcb")
            )
        else:
            with open(source) as f:
                paths = [line.strip() for line in f if line.strip()]
        if not paths:
            raise FormatError(f"{source}: no run files found")
        geom = read_header(paths[0])
        for p in paths[1:]:
            other = read_header(p)
            if other != geom:
                raise FormatError(f"{p}: geometry {other} differs from {geom}")
        return cls(paths, geom)

    def _descriptors(self):
        if self._fds is None:
            with self._lock:
                if self._fds is None:
                    self._fds = [os.open(p, os.O_RDONLY) for p in self.run_paths]
        return self._fds

    def close(self):
        with self._lock:
            if self._fds is not None:
                for fd in self._fds:
                    os.close(fd)
                self._fds = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _read_span(self, run_index, first_point, count):
        fd = self._descriptors()[run_index]
        offset = HEADER_SIZE + 4 * first_point
        raw = os.pread(fd, 4 * count, offset)
        if len(raw) != 4 * count:
            raise FormatError(
                f"{self.run_paths[run_index]}: short read at point {first_point}"
            )
        return np.frombuffer(raw, dtype="<f4").astype(np.float64)

    def read_point(self, pid):
        """Observation vector of one point, ordered by run_paths order."""
        if not 0 <= pid < self.geometry.total_points:
            raise BoundsError(f"point id {pid} out of range")
        out = np.empty(self.run_count, dtype=np.float64)
        for r in range(self.run_count):
            out[r] = self._read_span(r, pid, 1)[0]
        return out


def read_point(handle, pid):
    return handle.read_point(pid)


def load_window(handle, window, thread_count=1, parallelism_cap=None, trace=None):
    """One PointRecord per point in the window, ordered by point id.

    Each run's window block is one contiguous read; reads run in a
    thread pool bounded by ``parallelism_cap``. The merged result is a
    deterministic function of (files, window) regardless of the degree
    of parallelism. ``trace`` (if given) is called with the number of
    in-flight reads whenever it changes.
    """
    geom = handle.geometry
    if handle.run_count < 2:
        raise ValueError("window loading needs at least two runs (std requires n >= 2)")
    if not 0 <= window.slice_index < geom.slice_count:
        raise BoundsError(f"slice {window.slice_index} out of range")
    if window.first_line + window.line_count > geom.lines_per_slice:
        raise BoundsError(f"window {window} exceeds slice lines")

    first_point = (
        window.slice_index * geom.lines_per_slice + window.first_line
    ) * geom.points_per_line
    count = window.line_count * geom.points_per_line

    in_flight = 0
    flight_lock = threading.Lock()

    def read_run(r):
        nonlocal in_flight
        if trace is not None:
            with flight_lock:
                in_flight += 1
                trace(in_flight)
        try:
            try:
                return handle._read_span(r, first_point, count)
            except FormatError as exc:
                raise FormatError(f"{exc} (window starting at point {first_point})")
        finally:
            if trace is not None:
                with flight_lock:
                    in_flight -= 1
                    trace(in_flight)

    workers = max(1, thread_count)
    if parallelism_cap is not None:
        workers = min(workers, parallelism_cap)
    if workers == 1:
        columns = [read_run(r) for r in range(handle.run_count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(read_run, range(handle.run_count)))

    block = np.stack(columns, axis=1)  # (points, runs)
    means = block.mean(axis=1)
    stds = block.std(axis=1, ddof=1)
    records = []
    for i in range(count):
        records.append(
            PointRecord(
                id=first_point + i,
                stats=PointStats(float(means[i]), float(stds[i])),
                values=block[i],
            )
        )
    return records


def point_xy(handle, pid):
    x, y, _ = point_coords(pid, handle.geometry)
    return x, y
