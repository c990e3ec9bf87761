"""Numba switch for the hot kernels.

Set ``DISKCOVER_NO_NUMBA=1`` to run every kernel through its pure-numpy
path. The flag is read once at import time.
"""
import os

_DISABLED = os.environ.get("DISKCOVER_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by DISKCOVER_NO_NUMBA")
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def jit(fn):
    """Compile ``fn`` with ``numba.njit(cache=True)`` when numba is enabled."""
    if NUMBA_ENABLED:
        return _njit(cache=True)(fn)
    return fn
