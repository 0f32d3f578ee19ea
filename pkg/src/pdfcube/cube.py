"""Cube geometry, linear point addressing and window enumeration.

A cube is addressed as (x, y, z) = (point within line, line within
slice, slice). The linear index is slice-major, then line, then point,
which matches the on-disk layout so a point's file offset is a single
multiplication away.
"""

from dataclasses import dataclass


class BoundsError(ValueError):
    """A coordinate or index is outside the cube geometry."""


@dataclass(frozen=True)
class CubeGeometry:
    points_per_line: int
    lines_per_slice: int
    slice_count: int

    def __post_init__(self):
        for name in ("points_per_line", "lines_per_slice", "slice_count"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @property
    def points_per_slice(self):
        return self.points_per_line * self.lines_per_slice

    @property
    def total_points(self):
        return self.points_per_slice * self.slice_count


@dataclass(frozen=True)
class WindowSpec:
    slice_index: int
    first_line: int
    line_count: int

    def __post_init__(self):
        if self.line_count < 1:
            raise ValueError("line_count must be positive")


def point_id(x, y, z, geom):
    """Linear index of (x, y, z); inverse of :func:`point_coords`."""
    if not 0 <= x < geom.points_per_line:
        raise BoundsError(f"x={x} outside [0, {geom.points_per_line})")
    if not 0 <= y < geom.lines_per_slice:
        raise BoundsError(f"y={y} outside [0, {geom.lines_per_slice})")
    if not 0 <= z < geom.slice_count:
        raise BoundsError(f"z={z} outside [0, {geom.slice_count})")
    return (z * geom.lines_per_slice + y) * geom.points_per_line + x


def point_coords(pid, geom):
    """(x, y, z) for a linear index."""
    if not 0 <= pid < geom.total_points:
        raise BoundsError(f"point id {pid} outside [0, {geom.total_points})")
    x = pid % geom.points_per_line
    rest = pid // geom.points_per_line
    y = rest % geom.lines_per_slice
    z = rest // geom.lines_per_slice
    return x, y, z


def windows_for_slice(geom, slice_index, lines_per_window):
    """Disjoint windows covering all lines of a slice, in ascending order.

    The last window is truncated when the line count does not divide
    evenly.
    """
    if not 0 <= slice_index < geom.slice_count:
        raise BoundsError(f"slice {slice_index} outside [0, {geom.slice_count})")
    if lines_per_window < 1:
        raise ValueError("lines_per_window must be positive")
    windows = []
    first = 0
    while first < geom.lines_per_slice:
        count = min(lines_per_window, geom.lines_per_slice - first)
        windows.append(WindowSpec(slice_index, first, count))
        first += count
    return windows
