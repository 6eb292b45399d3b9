"""FNV-1a 64-bit hashing of key strings, scalar and batched."""

from __future__ import annotations

import numpy as np

from .backend import get_kernels

_OFFSET = 0xCBF29CE484222325
_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def ip_hash(text: str | bytes) -> int:
    """Unsigned FNV-1a 64 of the raw string bytes (routing: ip_hash(s) % N)."""
    data = text.encode() if isinstance(text, str) else text
    h = _OFFSET
    for b in data:
        h = ((h ^ b) * _PRIME) & _MASK
    return h


def fnv1a64_signed(text: str | bytes) -> int:
    """Same hash reinterpreted as int64, the form kernels store in tables."""
    h = ip_hash(text)
    return h - (1 << 64) if h >= 1 << 63 else h


def hash_bytes_column(col: np.ndarray, kernels=None) -> np.ndarray:
    """Hash a fixed-width bytes column (dtype Sx) to signed int64.

    Values must not contain NUL bytes; the fixed-width padding NULs act as
    terminators.
    """
    k = kernels or get_kernels()
    if col.dtype.kind != "S":
        col = col.astype("S")
    width = col.dtype.itemsize
    buf = np.frombuffer(col.tobytes(), dtype=np.uint8).reshape(len(col), width)
    out = np.empty(len(col), np.int64)
    k.fnv1a_batch(buf, out)
    return out


def to_unsigned(h: np.ndarray | int):
    """View signed 64-bit hashes as unsigned for modular routing."""
    if isinstance(h, np.ndarray):
        return h.view(np.uint64)
    return h & _MASK
