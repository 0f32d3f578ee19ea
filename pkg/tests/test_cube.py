import numpy as np
import pytest

from pdfcube.cube import (
    BoundsError,
    CubeGeometry,
    point_coords,
    point_id,
    windows_for_slice,
)

BIG = CubeGeometry(points_per_line=251, lines_per_slice=501, slice_count=501)


def test_origin_is_zero():
    assert point_id(0, 0, 0, BIG) == 0


def test_x_adjacent():
    assert point_id(1, 0, 0, BIG) == 1


def test_round_trip_exhaustive_4x4x4():
    geom = CubeGeometry(4, 4, 4)
    seen = set()
    for z in range(4):
        for y in range(4):
            for x in range(4):
                pid = point_id(x, y, z, geom)
                assert point_coords(pid, geom) == (x, y, z)
                seen.add(pid)
    # Bijection onto [0, 64).
    assert seen == set(range(64))


def test_round_trip_random_in_big_geometry():
    rng = np.random.default_rng(0)
    for _ in range(200):
        x = int(rng.integers(BIG.points_per_line))
        y = int(rng.integers(BIG.lines_per_slice))
        z = int(rng.integers(BIG.slice_count))
        assert point_coords(point_id(x, y, z, BIG), BIG) == (x, y, z)


@pytest.mark.parametrize(
    "bad,axis",
    [((251, 0, 0), "x"), ((0, 501, 0), "y"), ((0, 0, 501), "z"), ((-1, 0, 0), "x")],
)
def test_out_of_bounds_names_axis(bad, axis):
    with pytest.raises(BoundsError, match=axis):
        point_id(*bad, BIG)


def test_windows_501_lines_of_25():
    wins = windows_for_slice(BIG, 0, 25)
    assert len(wins) == 21
    assert all(w.line_count == 25 for w in wins[:20])
    assert wins[20].line_count == 1


def test_windows_two_of_three():
    geom = CubeGeometry(501, 6, 1)
    wins = windows_for_slice(geom, 0, 3)
    assert [(w.first_line, w.line_count) for w in wins] == [(0, 3), (3, 3)]


def test_window_truncation():
    geom = CubeGeometry(3, 5, 1)
    wins = windows_for_slice(geom, 0, 7)
    assert [(w.first_line, w.line_count) for w in wins] == [(0, 5)]


def test_windows_cover_and_disjoint():
    rng = np.random.default_rng(1)
    for _ in range(50):
        lines = int(rng.integers(1, 100))
        per = int(rng.integers(1, 30))
        geom = CubeGeometry(2, lines, 1)
        wins = windows_for_slice(geom, 0, per)
        covered = []
        for w in wins:
            covered.extend(range(w.first_line, w.first_line + w.line_count))
        assert covered == list(range(lines))  # cover, disjoint, ascending


def test_geometry_validation():
    with pytest.raises(ValueError):
        CubeGeometry(0, 1, 1)
    with pytest.raises(ValueError):
        windows_for_slice(BIG, 501, 25)
    with pytest.raises(ValueError):
        windows_for_slice(BIG, 0, 0)
