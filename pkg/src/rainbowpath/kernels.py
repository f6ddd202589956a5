"""Backend dispatch: compiled kernels when built, numpy fallback otherwise.

Set RAINBOWPATH_BACKEND=numpy (or =cython) to force a backend; forcing
cython raises if the extension is missing.
"""

from __future__ import annotations

import os

from . import _slowcore

_forced = os.environ.get("RAINBOWPATH_BACKEND", "").lower()

if _forced == "numpy":
    _impl = _slowcore
    BACKEND = "numpy"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        _impl = _slowcore
        BACKEND = "numpy"

densities_batch = _impl.densities_batch
min_density_batch = _impl.min_density_batch
best_transfer = _impl.best_transfer


def get_backend() -> str:
    return BACKEND
