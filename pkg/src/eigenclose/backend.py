"""Kernel backend selection.

The hot interval kernels exist twice: numba-compiled loops and pure-numpy
vectorized twins.  `MOMENT_VERIFY_BACKEND=numpy` forces the fallback;
`numba` demands the compiled path; unset prefers numba when importable.
Both backends produce containment-correct enclosures.
"""

import os

_CHOICE = os.environ.get("MOMENT_VERIFY_BACKEND", "").strip().lower()

if _CHOICE not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"MOMENT_VERIFY_BACKEND must be 'numba' or 'numpy', got {_CHOICE!r}")

if _CHOICE == "numpy":
    from . import _kernels_numpy as _K
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _K
        BACKEND = "numba"
    except ImportError:
        if _CHOICE == "numba":
            raise
        from . import _kernels_numpy as _K
        BACKEND = "numpy"

k_add = _K.k_add
k_sub = _K.k_sub
k_cscale = _K.k_cscale
k_mm = _K.k_mm
k_mm_point_left = _K.k_mm_point_left
k_mm_point_right = _K.k_mm_point_right
k_wsum = _K.k_wsum
k_mag_sup = _K.k_mag_sup
k_ldl_pivot_signs = _K.k_ldl_pivot_signs


def thread_cap():
    """Worker-thread count for per-node solves (MOMENT_VERIFY_THREADS)."""
    raw = os.environ.get("MOMENT_VERIFY_THREADS", "").strip()
    if not raw:
        return 1
    cap = int(raw)
    if cap < 1:
        raise ValueError("MOMENT_VERIFY_THREADS must be >= 1")
    return cap


try:
    from threadpoolctl import threadpool_limits as _tp_limits
except ImportError:
    _tp_limits = None

import contextlib

BLAS_MAX = os.cpu_count() or 1


@contextlib.contextmanager
def blas_threads(n):
    """Pin the BLAS pool inside the block (no-op without threadpoolctl).

    Single-threaded BLAS avoids worker spin-wait stealing cycles from the
    vectorized interval passes between LAPACK calls; the large
    factorizations switch back to the full pool.
    """
    if _tp_limits is None:
        yield
        return
    with _tp_limits(limits=n, user_api="blas"):
        yield
