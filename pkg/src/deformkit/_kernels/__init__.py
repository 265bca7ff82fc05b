"""Kernel backend selection.

The compiled extension is preferred when present; ``DEFORMKIT_PURE_PY=1``
forces the NumPy implementation.  ``BACKEND`` records which one is active.
"""

import os

if os.environ.get("DEFORMKIT_PURE_PY"):
    from . import _ref as _impl

    BACKEND = "python"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _ref as _impl

        BACKEND = "python"

grid_sup_abs = _impl.grid_sup_abs
aberth_batch = _impl.aberth_batch

__all__ = ["BACKEND", "grid_sup_abs", "aberth_batch"]
