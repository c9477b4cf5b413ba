"""Runtime switches read from the environment.

``CUBECOVER_DISABLE_NUMBA=1`` forces the pure-numpy kernels.
``CUBECOVER_THREADS=<k>`` caps numba's thread pool.
"""

from __future__ import annotations

import os


def _truthy(value: str | None) -> bool:
    return value is not None and value.strip().lower() in {"1", "true", "yes", "on"}


def numba_requested() -> bool:
    return not _truthy(os.environ.get("CUBECOVER_DISABLE_NUMBA"))


def thread_cap() -> int | None:
    raw = os.environ.get("CUBECOVER_THREADS")
    if not raw:
        return None
    try:
        k = int(raw)
    except ValueError:
        return None
    return k if k > 0 else None
