"""Optional numba acceleration.

Set ``GRIDKK_DISABLE_JIT=1`` to force the pure-numpy kernels even when numba
is importable.
"""

from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None
JIT_DISABLED = os.environ.get("GRIDKK_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAVE_NUMBA and not JIT_DISABLED


def njit(func):
    """Compile ``func`` in nopython mode when numba is available."""
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def default_backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise ValueError("numba backend requested but numba is not installed")
    return backend
