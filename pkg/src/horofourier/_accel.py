"""Optional numba acceleration with a pure-numpy fallback.

Set HOROFOURIER_DISABLE_JIT=1 to force the numpy code paths.  HOROFOURIER_THREADS
caps the number of threads used by the compiled kernels (default 1).
"""

import os

__all__ = ["HAS_NUMBA", "USE_JIT", "njit", "prange", "thread_count"]


def _env_flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


HAS_NUMBA = False
USE_JIT = False

if not _env_flag("HOROFOURIER_DISABLE_JIT"):
    try:
        import numba
        from numba import njit, prange

        HAS_NUMBA = True
        USE_JIT = True
    except ImportError:
        pass

if not HAS_NUMBA:
    numba = None

    def njit(*args, **kwargs):
        # decorator stub so kernel definitions import cleanly without numba
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap

    prange = range


def thread_count():
    raw = os.environ.get("HOROFOURIER_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


if HAS_NUMBA:
    try:
        numba.set_num_threads(min(thread_count(), numba.config.NUMBA_NUM_THREADS))
    except (ValueError, RuntimeError):
        pass
