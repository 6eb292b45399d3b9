"""Windowed distinct-count sketch: a ring of log-log register arrays.

Each basic window owns registers updated from a mixed 64-bit token hash;
closed windows merge with the live one by elementwise max at query time,
so the estimate covers the last N..N+b items (same eviction rule as the
top-k ring). Standard error is about 1.04/sqrt(2^p).
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..errors import NotReady
from .backend import get_kernels
from .hashing import fnv1a64_signed


def _mix64(h: int) -> int:
    """splitmix64 finalizer on a signed 64-bit value (python ints)."""
    z = (h + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    z = z ^ (z >> 31)
    return z - (1 << 64) if z >= 1 << 63 else z


def _alpha(m: int) -> float:
    if m == 16:
        return 0.673
    if m == 32:
        return 0.697
    if m == 64:
        return 0.709
    return 0.7213 / (1.0 + 1.079 / m)


class DistinctSketch:
    def __init__(self, window: int, basic: int | None = None, precision: int = 14, kernels=None):
        if not 4 <= precision <= 18:
            raise ValueError("precision must be in [4, 18]")
        self.k = kernels or get_kernels()
        self.window = int(window)
        self.basic = int(basic) if basic is not None else max(1, window // 10)
        if not 1 <= self.basic <= self.window:
            raise ValueError("need 1 <= basic <= window")
        self.p = precision
        self.m = 1 << precision
        self._active = np.zeros(self.m, np.uint8)
        self._active_n = 0
        self._ring: deque[np.ndarray] = deque()
        self._buf = np.empty(1, np.int64)

    def insert(self, token) -> None:
        self._buf[0] = _mix64(fnv1a64_signed(str(token)))
        self.k.hll_update(self._active, self._buf, self.p)
        self._active_n += 1
        if self._active_n == self.basic:
            self._ring.append(self._active.copy())
            self._active[:] = 0
            self._active_n = 0
            rmax = -(-self.window // self.basic)
            while len(self._ring) > rmax:
                self._ring.popleft()
        while self._ring and len(self._ring) * self.basic + self._active_n > self.window + self.basic:
            self._ring.popleft()

    def insert_batch(self, tokens) -> None:
        for t in tokens:
            self.insert(t)

    @property
    def n_covered(self) -> int:
        return len(self._ring) * self.basic + self._active_n

    def merged_registers(self) -> np.ndarray:
        regs = self._active
        for r in self._ring:
            regs = np.maximum(regs, r)
        return regs

    def query_distinct(self) -> float:
        if self.n_covered == 0:
            raise NotReady("no items in window")
        regs = self.merged_registers().astype(np.float64)
        m = self.m
        est = _alpha(m) * m * m / np.sum(np.exp2(-regs))
        if est <= 2.5 * m:
            zeros = int(np.count_nonzero(regs == 0))
            if zeros:
                est = m * np.log(m / zeros)
        return float(est)
