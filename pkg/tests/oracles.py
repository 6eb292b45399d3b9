"""Brute-force reference implementations the sketch and engine tests compare
against. Everything here recomputes from raw history; nothing is shared with
the package under test."""

from __future__ import annotations

import numpy as np


def window_slice(xs: np.ndarray, i: int, window: int) -> np.ndarray:
    """Items inside the window after the (i+1)-th insert (0-based i)."""
    lo = max(0, i + 1 - window)
    return xs[lo : i + 1]


def true_count(xs, i, window) -> int:
    return len(window_slice(np.asarray(xs), i, window))


def true_sum(xs, i, window) -> float:
    return float(np.sum(window_slice(np.asarray(xs, dtype=np.float64), i, window)))


def true_ave(xs, i, window) -> float:
    return float(np.mean(window_slice(np.asarray(xs, dtype=np.float64), i, window)))


def true_var(xs, i, window) -> float:
    w = window_slice(np.asarray(xs, dtype=np.float64), i, window)
    return float(np.mean(w * w) - np.mean(w) ** 2)


def true_median(xs, i, window) -> float:
    w = np.sort(window_slice(np.asarray(xs, dtype=np.float64), i, window))
    # lower median: the item at rank ceil(n/2) (1-based)
    return float(w[(len(w) - 1) // 2])


def rank_bounds(xs, i, window, value) -> tuple[int, int]:
    """1-based rank range value occupies in the sorted window."""
    w = np.sort(window_slice(np.asarray(xs, dtype=np.float64), i, window))
    lo = int(np.searchsorted(w, value, side="left")) + 1
    hi = int(np.searchsorted(w, value, side="right"))
    return lo, max(lo, hi)


def true_topk(xs, i, window) -> dict:
    """Exact frequency fraction per item over the last `window` items."""
    w = window_slice(np.asarray(xs), i, window)
    vals, counts = np.unique(w, return_counts=True)
    n = len(w)
    return {str(v): c / n for v, c in zip(vals, counts)}


def true_distinct(xs, i, window) -> int:
    return len(np.unique(window_slice(np.asarray(xs), i, window)))


def collapse_reference(events, kept_idx, dropped_idx, cap=10_000):
    """Reference for COLLAPSE: events are (key_tuple, residual) pairs in
    arrival order; returns {kept_key: {dropped_key: residual}} with LRU
    eviction at `cap` per kept key."""
    out: dict = {}
    for key, residual in events:
        l = tuple(key[j] for j in kept_idx)
        m = tuple(key[j] for j in dropped_idx)
        sub = out.setdefault(l, {})
        if m in sub:
            del sub[m]
        elif len(sub) >= cap:
            oldest = next(iter(sub))
            del sub[oldest]
        sub[m] = residual
    return out


def split_reference(times: np.ndarray, malicious: np.ndarray):
    """Scan oracle for the scenario split: smallest boundary time t such that
    the two sides' malicious counts differ by at most one, scanning candidate
    boundaries in time order. Returns (boundary_time, n_first) or None."""
    order = np.argsort(times, kind="stable")
    t = times[order]
    m = malicious[order].astype(bool)
    total = int(m.sum())
    if total == 0:
        return None
    best = None
    n = len(t)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and t[j + 1] == t[i]:
            j += 1
        first = int(m[: j + 1].sum())
        diff = abs(first - (total - first))
        if best is None or diff < best[0]:
            best = (diff, float(t[i]), j + 1)
        i = j + 1
    if best[0] > 1:
        return None
    return best[1], best[2]
