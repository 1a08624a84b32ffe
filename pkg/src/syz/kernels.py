"""Backend selection for the hot kernels.

The compiled extension ``syz._kernels`` is used when it imports; otherwise
the numpy implementations in :mod:`syz._fallback` are used. Setting
``SYZ_BACKEND=python`` forces the fallback.
"""

from __future__ import annotations

import os

from syz import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("SYZ_BACKEND", "").lower() != "python":
    try:
        from syz import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"

aberth_batch = _impl.aberth_batch
torus_logabs_rows = _impl.torus_logabs_rows


def get_backend(name: str):
    """Return the kernel module named ``"python"`` or ``"compiled"``."""
    if name == "python":
        return _fallback
    if name == "compiled":
        from syz import _kernels  # type: ignore[attr-defined]

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
