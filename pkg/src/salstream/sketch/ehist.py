"""Single-key exponential-histogram sketches over the last N items."""

from __future__ import annotations

import numpy as np

from ..errors import NotReady
from .ehpool import EHPool

__all__ = ["ExpHistogram", "SumVarSketch"]


class ExpHistogram:
    """Count and value-sum estimates over a count-based sliding window.

    insert(v) adds an item carrying value v (default 1.0, i.e. plain
    counting). query_count() is exact. query_sum()'s only inexactness is
    prorating the oldest, partially expired bucket, so it is exact until
    items start expiring; for i.i.d. nonnegative values the relative error
    stays within a few eps, but one outlier straddling the window boundary
    can push a single query past that.
    """

    def __init__(self, eps: float = 0.01, window: int = 1000, kernels=None):
        self.pool = EHPool(window, eps, npay=1, kernels=kernels)
        self.pool.ensure_slots(1)
        self.eps = eps
        self.window = window

    def insert(self, value: float = 1.0):
        self.pool.insert_one(0, (float(value),))

    def insert_batch(self, values: np.ndarray):
        vals = np.asarray(values, np.float64).reshape(-1, 1)
        self.pool.insert_batch(np.zeros(len(vals), np.int64), vals)

    @property
    def n_inserted(self) -> int:
        return int(self.pool.nitems[0])

    def query_count(self) -> int:
        """Exact count of items in the window; 0 for an empty sketch."""
        return int(self.pool.query_one(0)[0])

    def query_sum(self) -> float:
        """Estimated sum of item values in the window; 0.0 when empty."""
        return float(self.pool.query_one(0)[1])

    def validate_invariants(self):
        self.pool.validate_invariants(0)


class SumVarSketch:
    """Mean/variance/sum of the last N item values via paired histograms
    (sum of x and sum of x^2 share one bucket structure plus an exact
    count).

    The variance subtracts two approximations, so its absolute error
    scales with the magnitude of x^2, not with the variance itself; when
    the window's variance is small next to its squared values the
    *relative* error can spike well past the sum's. Estimates below zero
    are clamped."""

    def __init__(self, eps: float = 0.01, window: int = 1000, kernels=None):
        self.pool = EHPool(window, eps, npay=2, kernels=kernels)
        self.pool.ensure_slots(1)
        self.eps = eps
        self.window = window

    def insert(self, value: float):
        v = float(value)
        self.pool.insert_one(0, (v, v * v))

    def insert_batch(self, values: np.ndarray):
        v = np.asarray(values, np.float64)
        vals = np.empty((len(v), 2), np.float64)
        vals[:, 0] = v
        vals[:, 1] = v * v
        self.pool.insert_batch(np.zeros(len(v), np.int64), vals)

    def _query(self):
        q = self.pool.query_one(0)
        if q[0] == 0:
            raise NotReady("no items in window")
        return q

    def query_count(self) -> int:
        return int(self._query()[0])

    def query_sum(self) -> float:
        return float(self._query()[1])

    def query_ave(self) -> float:
        q = self._query()
        return float(q[1] / q[0])

    def query_var(self) -> float:
        q = self._query()
        m = q[1] / q[0]
        return float(max(0.0, q[2] / q[0] - m * m))

    def validate_invariants(self):
        self.pool.validate_invariants(0)
