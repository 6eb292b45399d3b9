"""Pooled exponential histograms over count-based sliding windows.

One pool serves every histogram-backed feature of one keyed stream: slot ids
come from a SlotTable (or are handed in directly), and each slot owns a
bucket region in flat arenas sized by a 4-grade allocator (regions of 8, 32,
128, then the worst-case bucket count for the window). The payload is a
caller-defined vector per item, so a (sum x, sum x^2) pair per tracked field
shares one bucket structure.

Estimates: the window item count is exact (arrival indices are consecutive),
and payload sums are exact except for the single bucket straddling the
window edge, which contributes proportionally to its in-window overlap. For
nonnegative payloads the sum's relative error is at most 1/kk = 2*eps.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import get_kernels

NCLS = 32  # size classes; 2^31 items per bucket is beyond any tested window


def buckets_per_class(eps: float) -> int:
    if not 0 < eps < 1:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    return math.ceil(1.0 / (2.0 * eps))


def bucket_capacity(window: int, kk: int) -> int:
    """Worst-case live bucket count for one slot, with slack."""
    maxclass = 2
    while kk * ((1 << (maxclass + 1)) - 1) < 2 * window:
        maxclass += 1
    return int(min((kk + 2) * (maxclass + 3), window + 2))


class EHPool:
    def __init__(self, window: int, eps: float = 0.01, npay: int = 1, kernels=None):
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        self.k = kernels or get_kernels()
        self.window = int(window)
        self.eps = float(eps)
        self.kk = buckets_per_class(eps)
        self.npay = int(npay)
        capn = bucket_capacity(self.window, self.kk)
        self.gcaps = np.array(
            [min(8, capn), min(32, capn), min(128, capn), capn], np.int64
        )
        # flat bucket arenas; one region per grade allocation
        self.bcls = np.zeros(0, np.int8)
        self.bidx = np.zeros(0, np.int64)
        self.pay = np.zeros((0, npay), np.float64)
        self._arena_len = 0
        self._regions = [0, 0, 0, 0]
        self.free = np.zeros((4, 0), np.int64)
        self.fcnt = np.zeros(4, np.int64)
        # per-slot metadata
        self.nslots = 0
        cap0 = 64
        self.base = np.zeros(cap0, np.int64)
        self.cap = np.zeros(cap0, np.int32)
        self.grade = np.full(cap0, -1, np.int8)
        self.head = np.zeros(cap0, np.int32)
        self.nb = np.zeros(cap0, np.int32)
        self.nitems = np.zeros(cap0, np.int64)
        self.cnt = np.zeros((cap0, NCLS), np.int16)
        self.tot = np.zeros((cap0, npay), np.float64)
        self._need = np.zeros(1, np.int64)
        self._one_slot = np.zeros(1, np.int64)
        self._one_val = np.zeros((1, npay), np.float64)
        self._grow_grade(0, 64)

    # --- slot management ---

    def ensure_slots(self, n: int):
        """Make room for slot ids < n (metadata only; regions are lazy)."""
        if n <= len(self.base):
            self.nslots = max(self.nslots, n)
            return
        newcap = len(self.base)
        while newcap < n:
            newcap *= 2
        for name in ("base", "cap", "grade", "head", "nb", "nitems"):
            old = getattr(self, name)
            new = np.full(newcap, -1, old.dtype) if name == "grade" else np.zeros(newcap, old.dtype)
            new[: len(old)] = old
            setattr(self, name, new)
        cnt = np.zeros((newcap, NCLS), np.int16)
        cnt[: len(self.cnt)] = self.cnt
        self.cnt = cnt
        tot = np.zeros((newcap, self.npay), np.float64)
        tot[: len(self.tot)] = self.tot
        self.tot = tot
        self.nslots = max(self.nslots, n)

    def _grow_grade(self, g: int, k: int | None = None):
        capg = int(self.gcaps[g])
        if k is None:
            k = max(64, self._regions[g])
        start = self._arena_len
        add = k * capg
        self.bcls = np.concatenate([self.bcls, np.zeros(add, np.int8)])
        self.bidx = np.concatenate([self.bidx, np.zeros(add, np.int64)])
        self.pay = np.concatenate([self.pay, np.zeros((add, self.npay), np.float64)])
        self._arena_len += add
        self._regions[g] += k
        free = np.zeros((4, max(self._regions)), np.int64)
        free[:, : self.free.shape[1]] = self.free
        bases = start + capg * np.arange(k, dtype=np.int64)
        n = int(self.fcnt[g])
        free[g, n : n + k] = bases[::-1]
        self.free = free
        self.fcnt[g] = n + k

    # --- inserts and queries ---

    def insert_batch(self, slots: np.ndarray, vals: np.ndarray):
        """vals: (B, npay) float64; slots: (B,) int64 with ids < nslots."""
        done = 0
        while True:
            done = self.k.eh_insert(
                self.bcls, self.bidx, self.pay,
                self.base, self.cap, self.grade, self.head, self.nb, self.nitems,
                self.cnt, self.tot, self.free, self.fcnt, self.gcaps,
                slots, vals, done, self.window, self.kk, self._need,
            )
            if done >= len(slots):
                return
            g = int(self._need[0])
            if g == -9:
                raise AssertionError("bucket region overflow at top grade")
            self._grow_grade(g)

    def insert_one(self, slot: int, vals) -> None:
        self._one_slot[0] = slot
        self._one_val[0, :] = vals
        self.insert_batch(self._one_slot, self._one_val)

    def query_batch(self, slots: np.ndarray) -> np.ndarray:
        """Returns (B, 1+npay): exact window count then payload estimates.
        Count 0 means the slot has seen no items (not ready)."""
        out = np.empty((len(slots), 1 + self.npay), np.float64)
        self.k.eh_query(
            self.bcls, self.bidx, self.pay, self.base, self.head, self.nb,
            self.nitems, self.tot, slots, self.window, out,
        )
        return out

    def query_one(self, slot: int) -> np.ndarray:
        self._one_slot[0] = slot
        return self.query_batch(self._one_slot)[0]

    # --- introspection for tests ---

    def slot_buckets(self, slot: int) -> list[tuple[int, int, np.ndarray]]:
        """(size, newest_arrival_index, payload) oldest->newest."""
        bs, h, m = int(self.base[slot]), int(self.head[slot]), int(self.nb[slot])
        out = []
        for j in range(h, h + m):
            out.append(
                (1 << int(self.bcls[bs + j]), int(self.bidx[bs + j]), self.pay[bs + j].copy())
            )
        return out

    def validate_invariants(self, slot: int):
        bk = self.slot_buckets(slot)
        n = int(self.nitems[slot])
        if not bk:
            # the newest bucket carries index n >= window start, so buckets
            # only vanish when nothing was ever inserted
            assert n == 0
            return
        sizes = [s for s, _, _ in bk]
        idxs = [i for _, i, _ in bk]
        # oldest->newest: sizes non-increasing, arrival indices increasing
        assert all(a >= b for a, b in zip(sizes, sizes[1:])), sizes
        assert all(a < b for a, b in zip(idxs, idxs[1:])), idxs
        # newest bucket holds the latest item; expiry is tight
        assert idxs[-1] == n
        assert idxs[0] >= n - self.window + 1
        # consecutive coverage: bucket covering [idx-size+1, idx] abuts the next
        for (s1, i1, _), (s2, i2, _) in zip(bk, bk[1:]):
            assert i2 - s2 == i1, (i1, s2, i2)
        # per-class counts within [kk, kk+1] except the newest and oldest sizes
        from collections import Counter

        by_class = Counter(s for s in sizes)
        interior = [s for s in set(sizes) if s != sizes[0] and s != sizes[-1]]
        for s in interior:
            assert self.kk <= by_class[s] <= self.kk + 1, (s, by_class[s])
        # bookkeeping mirrors
        assert sum(by_class.values()) == int(self.nb[slot])
        for c in range(NCLS):
            expect = by_class.get(1 << c, 0)
            assert int(self.cnt[slot, c]) == expect
        assert np.allclose(self.tot[slot], np.sum([p for _, _, p in bk], axis=0))
