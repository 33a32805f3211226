"""Optional numba acceleration.

Kernels are written once as plain Python/numpy-compatible loops and compiled
with ``numba.njit`` when numba is importable and ``BERGETHETA_NUMBA`` is not
set to ``0``. Every compiled kernel has a vectorized numpy counterpart that
is used otherwise.
"""

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("BERGETHETA_NUMBA", "1") != "0"


def njit(*args, **kwargs):
    """``numba.njit`` if available, else a no-op decorator.

    The decision is taken at import time of the module defining the kernel;
    callers pick between compiled and numpy paths with :func:`numba_enabled`.
    """
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap
