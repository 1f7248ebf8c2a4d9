"""Kernel backend selection.

Hot loops are compiled with numba when it is importable. Setting the
environment variable ``BOSONBOUND_BACKEND=numpy`` (read once, at import)
routes every kernel through its vectorized numpy counterpart instead.
"""

import os

BACKEND_ENV = "BOSONBOUND_BACKEND"

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False


def _requested_backend():
    value = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if value not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {value!r}")
    return value


USE_NUMBA = HAS_NUMBA and _requested_backend() == "numba"
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when numba is installed, identity otherwise.

    Compilation is unconditional on the env flag so benchmarks can time the
    compiled kernel next to the numpy path in one process.
    """
    if HAS_NUMBA:
        return numba.njit(cache=True)(func)
    return func
