"""Kernel backend selection.

Hot loops are written once as numpy-compatible Python functions in
``_kernels``; the numba backend compiles them with ``@njit(nogil=True,
cache=True)`` and the python backend runs them as-is. Select with
``SAL_BACKEND=numba|python`` (default numba when importable).

FNV hashing is the one exception: numpy scalar uint64 arithmetic warns on
overflow where numba wraps silently, so the python backend uses a masked
big-int twin (``_kernels.fnv1a_batch_py``) tested for bit equality.
"""

from __future__ import annotations

import os

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is an install dependency
    njit = None
    HAS_NUMBA = False

_KERNEL_NAMES = [
    "table_upsert",
    "table_lookup",
    "table_rehash",
    "eh_insert",
    "eh_query",
    "counts_upsert",
    "hll_update",
]


class KernelSet:
    """Bound kernel functions for one backend ('numba' or 'python')."""

    def __init__(self, backend: str):
        from . import _kernels as K

        if backend == "numba":
            if not HAS_NUMBA:
                raise RuntimeError("SAL_BACKEND=numba but numba is not importable")
            wrap = njit(nogil=True, cache=True)
            self.fnv1a_batch = wrap(K.fnv1a_batch)
        elif backend == "python":
            wrap = lambda f: f
            self.fnv1a_batch = K.fnv1a_batch_py
        else:
            raise ValueError(f"unknown backend {backend!r}; use 'numba' or 'python'")
        self.backend = backend
        for name in _KERNEL_NAMES:
            setattr(self, name, wrap(getattr(K, name)))


_cache: dict[str, KernelSet] = {}


def default_backend() -> str:
    env = os.environ.get("SAL_BACKEND", "").strip().lower()
    if env:
        return env
    return "numba" if HAS_NUMBA else "python"


def get_kernels(backend: str | None = None) -> KernelSet:
    b = backend or default_backend()
    if b not in _cache:
        _cache[b] = KernelSet(b)
    return _cache[b]
