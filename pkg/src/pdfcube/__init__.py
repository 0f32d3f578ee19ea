"""pdfcube: parallel per-point PDF fitting over volumetric ensembles."""

from .cube import CubeGeometry, WindowSpec, point_coords, point_id, windows_for_slice
from .cubeio import DatasetHandle, PointRecord, load_window, read_header, write_run
from .distfit import (
    FOUR_TYPES,
    TEN_TYPES,
    DistributionKind,
    DistributionParams,
    FittedPdf,
    cdf,
    estimate,
    fit_best,
    fit_with_kind,
    interval_probs,
    pdf,
)
from .kernels import IMPL_NAME, USING_COMPILED
from .pipeline import Method, RunSummary, run_slice, tune_window
from .stats import Histogram, PointStats

__version__ = "0.1.0"

__all__ = [
    "CubeGeometry",
    "WindowSpec",
    "point_id",
    "point_coords",
    "windows_for_slice",
    "DatasetHandle",
    "PointRecord",
    "write_run",
    "read_header",
    "load_window",
    "DistributionKind",
    "DistributionParams",
    "FittedPdf",
    "FOUR_TYPES",
    "TEN_TYPES",
    "estimate",
    "cdf",
    "pdf",
    "interval_probs",
    "fit_best",
    "fit_with_kind",
    "Method",
    "RunSummary",
    "run_slice",
    "tune_window",
    "PointStats",
    "Histogram",
    "USING_COMPILED",
    "IMPL_NAME",
]
