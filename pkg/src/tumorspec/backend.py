"""Numerical backend selection.

The hot radial integration kernels are plain Python functions written in a
loop-heavy style so that numba can compile them. By default they are run
through ``numba.njit``; setting the environment variable

    TUMORSPEC_BACKEND=numpy

selects the uncompiled pure numpy/Python path instead (useful for debugging,
coverage, and as a fallback where numba is unavailable). The choice is made
once at import time. ``bench/bench_backends.py`` compares the two paths.
"""

import os

BACKEND = os.environ.get("TUMORSPEC_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ValueError(f"TUMORSPEC_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")

if BACKEND == "numba":
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover
        BACKEND = "numpy"

USE_NUMBA = BACKEND == "numba"


def jit_kernel(func):
    """Compile ``func`` with numba when the numba backend is active."""
    if USE_NUMBA:
        return _njit(cache=True)(func)
    return func
