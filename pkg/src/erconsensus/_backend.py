"""Kernel backend selection.

The hot numeric loops have two interchangeable implementations: numba-jitted
loops (``_kernels_numba``) and vectorized numpy (``_kernels_numpy``). Setting
ERCONSENSUS_BACKEND=numba or =numpy at process start forces one; by default
numba is used when importable, with numpy as the fallback. Both backends
produce the same values to eigensolver precision, and each is individually
byte-reproducible for a fixed seed.
"""

from __future__ import annotations

import os

ENV_BACKEND = "ERCONSENSUS_BACKEND"


def _resolve():
    choice = os.environ.get(ENV_BACKEND, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise RuntimeError(
            f"{ENV_BACKEND} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        from . import _kernels_numpy
        return _kernels_numpy, "numpy"
    if choice == "numba":
        from . import _kernels_numba
        return _kernels_numba, "numba"
    try:
        from . import _kernels_numba
        return _kernels_numba, "numba"
    except ImportError:
        from . import _kernels_numpy
        return _kernels_numpy, "numpy"


_KERNELS, _NAME = _resolve()


def kernels():
    """The active kernel module."""
    return _KERNELS


def backend_name() -> str:
    return _NAME


def set_threads(count: int) -> None:
    """Cap kernel parallelism. A no-op on the numpy backend, whose results
    (like numba's) do not depend on the thread count."""
    if count < 1:
        raise ValueError("thread count must be at least 1")
    if _NAME == "numba":
        import numba

        numba.set_num_threads(min(count, numba.config.NUMBA_NUM_THREADS))
