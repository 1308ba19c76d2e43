"""Numba switch.

Set ``HAWKESCOX_PURE_NUMPY=1`` to force the numpy/scipy code paths even when
numba is importable. The flag is read once, at import time.
"""
import functools
import os

_FLAG = os.environ.get("HAWKESCOX_PURE_NUMPY", "").strip().lower()
FORCE_NUMPY = _FLAG in ("1", "true", "yes", "on")

try:
    import numba as nb
    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    nb = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not FORCE_NUMPY


def njit(func=None, **kwargs):
    """``numba.njit`` with our defaults, or the identity when numba is absent."""
    opts = dict(cache=True, nogil=True)
    opts.update(kwargs)
    if func is None:
        return functools.partial(njit, **kwargs)
    if not HAS_NUMBA:  # pragma: no cover
        return func
    return nb.njit(**opts)(func)


def backend():
    return "numba" if USE_NUMBA else "numpy"
