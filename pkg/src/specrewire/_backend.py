"""Pick the compiled kernels when available, else the numpy fallback.

Set ``SPECREWIRE_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("SPECREWIRE_BACKEND", "").lower() == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

symmetric_eigen = _impl.symmetric_eigen
pair_uniforms = _impl.pair_uniforms


def available_backends() -> dict:
    """Map backend name to kernel module for every importable implementation."""
    out = {"python": _pykernels}
    try:
        from . import _kernels

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
