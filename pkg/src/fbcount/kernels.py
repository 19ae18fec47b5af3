"""Select the compiled kernels when available, else the numpy fallback.

Set ``FBCOUNT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("FBCOUNT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

grid_seeds = _impl.grid_seeds
arc_pairs = _impl.arc_pairs
