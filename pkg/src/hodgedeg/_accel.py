"""Numba switch.

Set ``HODGEDEG_DISABLE_NUMBA=1`` to force the pure-numpy code paths, e.g. when
numba is unavailable or when comparing both implementations.
"""

import os

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is an optional speedup
    _njit = None

_FLAG = os.environ.get("HODGEDEG_DISABLE_NUMBA", "0").strip().lower()

USE_NUMBA = _njit is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if _njit is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    return _njit(*args, **kwargs)
