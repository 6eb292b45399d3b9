"""Dense slot ids for hashed keys, backed by the open-addressing kernels."""

from __future__ import annotations

import numpy as np

from .backend import get_kernels


class SlotTable:
    """Maps signed int64 key hashes to dense slot ids assigned in arrival
    order. Grows by rehashing into a table twice the size when the fill
    budget (2/3 load) runs out."""

    def __init__(self, init_size: int = 1 << 12, kernels=None):
        self.k = kernels or get_kernels()
        size = 1
        while size < init_size:
            size <<= 1
        self.tkeys = np.zeros(size, np.int64)
        self.tslots = np.zeros(size, np.int64)
        self.budget = np.array([size * 2 // 3], np.int64)
        self.next_slot = np.array([0], np.int64)

    @property
    def n_slots(self) -> int:
        return int(self.next_slot[0])

    def upsert(self, hashes: np.ndarray) -> np.ndarray:
        out = np.empty(len(hashes), np.int64)
        done = 0
        while True:
            done = self.k.table_upsert(
                self.tkeys, self.tslots, self.budget, self.next_slot, hashes, out, done
            )
            if done >= len(hashes):
                return out
            self._grow()

    def lookup(self, hashes: np.ndarray) -> np.ndarray:
        out = np.empty(len(hashes), np.int64)
        self.k.table_lookup(self.tkeys, self.tslots, hashes, out)
        return out

    def _grow(self):
        old_keys, old_slots = self.tkeys, self.tslots
        size = len(old_keys) * 2
        self.tkeys = np.zeros(size, np.int64)
        self.tslots = np.zeros(size, np.int64)
        self.k.table_rehash(old_keys, old_slots, self.tkeys, self.tslots)
        self.budget[0] = size * 2 // 3 - self.next_slot[0]
