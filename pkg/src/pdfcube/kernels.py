"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``PDFCUBE_PURE=1`` to force the pure-Python kernels (used by the
benchmark and by tests that exercise both lanes).
"""

import os

if os.environ.get("PDFCUBE_PURE") == "1":
    from . import _kernels_py as _impl

    USING_COMPILED = False
else:
    try:
        from . import _speckernel as _impl  # type: ignore[attr-defined]

        USING_COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl

        USING_COMPILED = False

IMPL_NAME = "compiled" if USING_COMPILED else "pure-python"

erf = _impl.erf
gammainc_lower = _impl.gammainc_lower
betainc_reg = _impl.betainc_reg
histogram_counts = _impl.histogram_counts
l1_prob_error = _impl.l1_prob_error
