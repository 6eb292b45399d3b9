"""Heavy-hitter fractions over a sliding window of basic windows.

Counts are exact within each basic window (hash table per window, compacted
into parallel arrays when the window closes). A query merges the closed ring
with the live table; coverage stays within (N, N+b] items once warm: the
oldest basic window is evicted whenever closed+live item count would exceed
N+b.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..errors import NotReady
from .backend import get_kernels
from .hashing import fnv1a64_signed


class BasicWindowTopK:
    def __init__(self, window: int, basic: int, k: int, kernels=None):
        if basic < 1 or window < basic or k < 1:
            raise ValueError("need 1 <= basic <= window and k >= 1")
        self.k_kernels = kernels or get_kernels()
        self.window = int(window)
        self.basic = int(basic)
        self.k = int(k)
        size = 4
        while size < 4 * self.basic:
            size *= 2
        self._tk = np.zeros(size, np.int64)
        self._tv = np.zeros(size, np.int64)
        self._active_n = 0
        self._ring: deque[tuple[np.ndarray, np.ndarray]] = deque()
        self._tokens: dict[int, str] = {}
        self._hash_buf = np.empty(1, np.int64)
        self._cache: list[tuple[str, float]] | None = None

    def _hash_token(self, token: str) -> int:
        h = fnv1a64_signed(token)
        self._tokens.setdefault(h, token)
        return h

    def insert(self, token) -> None:
        self._hash_buf[0] = self._hash_token(str(token))
        self.k_kernels.counts_upsert(self._tk, self._tv, self._hash_buf)
        self._active_n += 1
        self._cache = None
        if self._active_n == self.basic:
            self._close_window()
        # mid-window coverage cap: closed + live items never exceed N + b
        while self._ring and len(self._ring) * self.basic + self._active_n > self.window + self.basic:
            self._ring.popleft()

    def insert_batch(self, tokens) -> None:
        for t in tokens:
            self.insert(t)

    def _close_window(self):
        used = self._tk != 0
        self._ring.append((self._tk[used].copy(), self._tv[used].copy()))
        self._tk[:] = 0
        self._active_n = 0
        # at most ceil(N/b) closed windows are retained
        rmax = -(-self.window // self.basic)
        while len(self._ring) > rmax:
            self._ring.popleft()

    @property
    def n_covered(self) -> int:
        return len(self._ring) * self.basic + self._active_n

    def query_topk(self) -> list[tuple[str, float]]:
        """The k most frequent tokens as (token, fraction-of-covered-items),
        ordered by descending fraction then token string. Empty sketch gives
        an empty list."""
        if self._cache is not None:
            return self._cache
        total = self.n_covered
        if total == 0:
            return []
        counts: dict[int, int] = {}
        for tk, tv in self._ring:
            for h, c in zip(tk.tolist(), tv.tolist()):
                counts[h] = counts.get(h, 0) + c
        live = self._tk != 0
        for h, c in zip(self._tk[live].tolist(), self._tv[live].tolist()):
            counts[h] = counts.get(h, 0) + c
        best = sorted(
            ((c, self._tokens[h]) for h, c in counts.items()),
            key=lambda p: (-p[0], p[1]),
        )[: self.k]
        self._cache = [(tok, c / total) for c, tok in best]
        return self._cache

    def value(self, i: int) -> float:
        """Fraction of the i-th most frequent item; 0.0 when fewer than i+1
        distinct items are present. Signals not-ready before any insert."""
        if not 0 <= i < self.k:
            raise ValueError(f"value({i}) out of range for k={self.k}")
        if self.n_covered == 0:
            raise NotReady("no items in window")
        top = self.query_topk()
        return top[i][1] if i < len(top) else 0.0
