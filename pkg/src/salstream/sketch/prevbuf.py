"""Ring buffer of the most recent values of one field for one key."""

from __future__ import annotations

from ..errors import NotReady


class PrevBuffer:
    """Holds the last depth+1 stored values; prev(i) looks i items back from
    the most recent store (prev(0) is the current value)."""

    def __init__(self, depth: int):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.depth = depth
        self._buf: list[float] = [0.0] * (depth + 1)
        self._n = 0

    def store(self, value: float) -> None:
        self._buf[self._n % len(self._buf)] = value
        self._n += 1

    def prev(self, i: int) -> float:
        if not 0 <= i <= self.depth:
            raise ValueError(f"prev({i}) exceeds buffer depth {self.depth}")
        if self._n < i + 1:
            raise NotReady(f"prev({i}) needs {i + 1} stored values, have {self._n}")
        return self._buf[(self._n - 1 - i) % len(self._buf)]

    @property
    def n_stored(self) -> int:
        return self._n
