"""Numba switch for the hot kernels.

Set ``PSL2GEN_DISABLE_NUMBA=1`` to run every kernel through its pure
Python/numpy fallback (useful for debugging and for the benchmark).
"""

import os

_FLAG = os.environ.get("PSL2GEN_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    import numba as _nb
except ImportError:  # pragma: no cover
    _nb = None

USE_NUMBA = _nb is not None and not DISABLED
CACHE = True


def njit(fn):
    """Compile ``fn`` with numba when enabled, else return it untouched."""
    if USE_NUMBA:
        return _nb.njit(cache=CACHE)(fn)
    return fn


def backend():
    return "numba" if USE_NUMBA else "python"
