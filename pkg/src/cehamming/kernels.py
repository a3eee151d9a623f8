"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over.  Set ``CEHAMMING_PURE_PYTHON=1`` to force the
fallback.
"""

from __future__ import annotations

import os

from cehamming import _fallback

if os.environ.get("CEHAMMING_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from cehamming import _kernels as _impl
    except ImportError:
        _impl = _fallback
        BACKEND = "python"
    else:
        BACKEND = "cython"

simulate_shots = _impl.simulate_shots
zero_syndrome_patterns = _impl.zero_syndrome_patterns


def get_backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _fallback
    if name == "cython":
        from cehamming import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
