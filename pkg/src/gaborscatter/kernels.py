"""Kernel backend selection.

The windowed fold/spread loops dominate transform runtime.  A compiled
Cython extension is used when present; otherwise a vectorized numpy
fallback with identical semantics takes over.  Set GABORSCATTER_PURE=1 to
force the fallback (useful for benchmarking and for debugging the
extension).
"""

import os

from . import _kernels_np

if os.environ.get("GABORSCATTER_PURE", "") == "1":
    _impl = _kernels_np
    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        _impl = _kernels_np
        COMPILED = False

fold = _impl.fold
spread = _impl.spread


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'numpy'."""
    return "compiled" if COMPILED else "numpy"
