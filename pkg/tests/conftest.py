import pytest

from pdfcube.cube import CubeGeometry
from pdfcube import datagen

# One line per end-to-end acceptance check, echoed after the test run.
acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_ds(tmp_path_factory):
    """4 layers x 50 runs, 8x8 slices; duplicates present."""
    cfg = datagen.GenConfig(
        geometry=CubeGeometry(8, 8, 4),
        layers=datagen.cycling_layers(4),
        run_count=50,
        seed=7,
        duplicate_fraction=0.3,
        spatial_gradient=0.01,
    )
    out = tmp_path_factory.mktemp("small_ds")
    handle, gt = datagen.generate(cfg, out)
    return handle, gt, cfg


@pytest.fixture(scope="session")
def recovery_ds(tmp_path_factory):
    """1000 runs, 208 points per family layer; no duplicates."""
    cfg = datagen.GenConfig(
        geometry=CubeGeometry(16, 13, 4),
        layers=datagen.cycling_layers(4),
        run_count=1000,
        seed=11,
        duplicate_fraction=0.0,
        spatial_gradient=0.002,
    )
    out = tmp_path_factory.mktemp("recovery_ds")
    handle, gt = datagen.generate(cfg, out)
    return handle, gt, cfg


@pytest.fixture(scope="session")
def dup_ds(tmp_path_factory):
    """Single slice, half the points duplicated."""
    cfg = datagen.GenConfig(
        geometry=CubeGeometry(32, 32, 1),
        layers=datagen.cycling_layers(1),
        run_count=60,
        seed=23,
        duplicate_fraction=0.5,
        spatial_gradient=0.01,
    )
    out = tmp_path_factory.mktemp("dup_ds")
    handle, gt = datagen.generate(cfg, out)
    return handle, gt, cfg


@pytest.fixture(scope="session")
def big_slice_ds(tmp_path_factory):
    """Four 10^4-point slices, one per family; used by the sampling checks."""
    cfg = datagen.GenConfig(
        geometry=CubeGeometry(100, 100, 4),
        layers=datagen.cycling_layers(4),
        run_count=50,
        seed=31,
        duplicate_fraction=0.1,
        spatial_gradient=0.001,
    )
    out = tmp_path_factory.mktemp("big_slice_ds")
    handle, gt = datagen.generate(cfg, out)
    return handle, gt, cfg


@pytest.fixture(scope="session")
def recovery_labels(recovery_ds):
    handle, gt, cfg = recovery_ds
    labels = []
    for z in range(cfg.geometry.slice_count):
        labels.extend(datagen.ground_truth_labels(handle, gt, z))
    return labels
