"""Kernel backend selection.

Imports the compiled Cython kernels when the extension was built, otherwise
falls back to the pure-Python twin. Set PROFILEMATCH_PURE_PYTHON=1 to force
the fallback (used by the benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("PROFILEMATCH_PURE_PYTHON"):
    from profilematch._kernels import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from profilematch._kernels import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from profilematch._kernels import _pykernels as _impl

        BACKEND = "python"

dl_distance = _impl.dl_distance
jaro_winkler = _impl.jaro_winkler
lcs_total = _impl.lcs_total
best_regression_split = _impl.best_regression_split
best_gini_split = _impl.best_gini_split

__all__ = [
    "BACKEND",
    "dl_distance",
    "jaro_winkler",
    "lcs_total",
    "best_regression_split",
    "best_gini_split",
]
