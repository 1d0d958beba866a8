"""Backend selection for the collision inner loops.

The compiled extension is used when it imports; set ``PIGEONROOTS_PURE=1``
to force the pure-Python loops (the benchmark and tests use both).
"""
from __future__ import annotations

import os

from . import _kernels_py as pure

if os.environ.get("PIGEONROOTS_PURE") == "1":
    compiled = None
else:
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "compiled" if compiled is not None else "python"

first_collision = _impl.first_collision
window_sweep = _impl.window_sweep


def get_backend(name: str | None = None):
    """Return the module for ``name`` ('compiled', 'python') or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return pure
    if name == "compiled":
        if compiled is None:
            raise ImportError("compiled kernels are not built")
        return compiled
    raise ValueError(f"unknown backend {name!r}")
