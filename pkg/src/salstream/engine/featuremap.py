"""Concurrent per-key feature storage.

FeatureMap holds the current value of every (key, featureName) pair and is
the only structure shared between worker threads; writes and reads are
serialized through key-striped locks. MapFeature is the bounded
most-recent-value map maintained by COLLAPSE BY.
"""

from __future__ import annotations

import threading
from collections import OrderedDict

# Returned by FeatureMap.get for slots never written. Identity-compared.
NOT_READY = object()

_NSTRIPES = 64


class FeatureMap:
    """Map of (key, featureName) -> value with lock striping by key hash.

    A read after updateInsert for the same pair observes that write or a
    later one; updates to distinct keys never interfere.
    """

    __slots__ = ("_maps", "_locks")

    def __init__(self):
        self._maps = [dict() for _ in range(_NSTRIPES)]
        self._locks = [threading.Lock() for _ in range(_NSTRIPES)]

    def _i(self, key: str) -> int:
        return hash(key) & (_NSTRIPES - 1)

    def update_insert(self, key: str, name: str, value) -> None:
        i = self._i(key)
        with self._locks[i]:
            self._maps[i][(key, name)] = value

    def get(self, key: str, name: str):
        i = self._i(key)
        with self._locks[i]:
            return self._maps[i].get((key, name), NOT_READY)

    def __len__(self) -> int:
        return sum(len(m) for m in self._maps)

    def items(self):
        """Snapshot of all (key, name, value) triples, unordered."""
        out = []
        for i in range(_NSTRIPES):
            with self._locks[i]:
                out.extend((k, n, v) for (k, n), v in self._maps[i].items())
        return out

    def dump_lines(self) -> list[str]:
        """Canonical sorted dump: one "feature\\tkey\\tvalue" line per slot.

        Floats use repr so dumps from identical computations compare equal
        byte-for-byte.
        """
        rows = []
        for key, name, v in self.items():
            rows.append((name, key, _render(v)))
        rows.sort()
        return ["\t".join(r) for r in rows]


def _render(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):  # topk snapshots: list of (token, fraction)
        return repr([(t, float(f)) for t, f in v])
    return repr(v)


class MapFeature:
    """Bounded map from dropped-key subtuple to the most recent residual
    values seen for it. Oldest-updated entries evict first once the map
    reaches capacity."""

    __slots__ = ("cap", "_d")

    def __init__(self, cap: int = 10_000):
        self.cap = cap
        self._d: OrderedDict = OrderedDict()

    def put(self, dropped_key: str, residuals: tuple) -> None:
        d = self._d
        if dropped_key in d:
            d.move_to_end(dropped_key)
        d[dropped_key] = residuals
        if len(d) > self.cap:
            d.popitem(last=False)

    def values(self):
        return self._d.values()

    def as_dict(self) -> dict:
        return dict(self._d)

    def __len__(self) -> int:
        return len(self._d)
