"""Windowed median/quantile sketch: per-basic-window compressed summaries.

A closed basic window is summarized by ~1/(2*eps) equi-rank samples, each
weighted so the window's total weight is b. Queries merge closed summaries
with the raw live buffer. The returned median's rank among the covered
items deviates by at most eps*N + b from the true median rank.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from ..errors import NotReady


class QuantileSketch:
    def __init__(self, eps: float = 0.01, window: int = 1000, basic: int | None = None):
        if not 0 < eps < 1:
            raise ValueError("eps must be in (0,1)")
        self.eps = float(eps)
        self.window = int(window)
        self.basic = int(basic) if basic is not None else max(1, window // 10)
        if not 1 <= self.basic <= self.window:
            raise ValueError("need 1 <= basic <= window")
        self._live = np.empty(self.basic, np.float64)
        self._live_n = 0
        self._ring: deque[tuple[np.ndarray, float]] = deque()  # (values, weight per value)

    def insert(self, value: float) -> None:
        self._live[self._live_n] = value
        self._live_n += 1
        if self._live_n == self.basic:
            self._ring.append(self._summarize())
            self._live_n = 0
            rmax = -(-self.window // self.basic)
            while len(self._ring) > rmax:
                self._ring.popleft()
        while self._ring and len(self._ring) * self.basic + self._live_n > self.window + self.basic:
            self._ring.popleft()

    def insert_batch(self, values) -> None:
        for v in np.asarray(values, np.float64):
            self.insert(v)

    def _summarize(self) -> tuple[np.ndarray, float]:
        b = self.basic
        npts = min(b, math.ceil(1.0 / (2.0 * self.eps)) + 2)
        s = np.sort(self._live[:b])
        if npts == 1:
            return s[b // 2 : b // 2 + 1].copy(), float(b)
        ranks = np.round(np.linspace(0, b - 1, npts)).astype(np.int64)
        return s[ranks].copy(), b / npts

    @property
    def n_covered(self) -> int:
        return len(self._ring) * self.basic + self._live_n

    def query_quantile(self, q: float) -> float:
        total = self.n_covered
        if total == 0:
            raise NotReady("no items in window")
        vals = [self._live[: self._live_n]]
        wts = [np.ones(self._live_n)]
        for v, w in self._ring:
            vals.append(v)
            wts.append(np.full(len(v), w))
        v = np.concatenate(vals)
        w = np.concatenate(wts)
        order = np.argsort(v, kind="stable")
        cum = np.cumsum(w[order])
        target = q * cum[-1]
        i = int(np.searchsorted(cum, target, side="left"))
        return float(v[order[min(i, len(v) - 1)]])

    def query_median(self) -> float:
        return self.query_quantile(0.5)
