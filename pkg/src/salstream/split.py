"""Temporal scenario split: cut a labeled stream at the time point where
the malicious examples balance between the two parts.

The boundary scans candidate cut times (whole tie-groups move together,
and the boundary tuple lands in the first part); the earliest cut whose
malicious counts differ by at most one wins. Streams with fewer than two
malicious tuples cannot give both parts signal, so they are an error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .csvio import CsvSource, InputFormatError, write_csv
from .tuples import Block


class SplitError(Exception):
    pass


@dataclass
class SplitReport:
    boundary_time: float
    n_first: int
    n_second: int
    malicious_first: int
    malicious_second: int

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def find_boundary(times: np.ndarray, malicious: np.ndarray) -> tuple[float, int]:
    """Returns (boundary_time, n_first) for time-sorted input."""
    total = int(malicious.sum())
    if total < 2:
        raise SplitError(
            f"need at least 2 malicious tuples to balance a split, found {total}"
        )
    n = len(times)
    best = None
    i = 0
    while i < n:
        j = i
        while j + 1 < n and times[j + 1] == times[i]:
            j += 1
        first = int(malicious[: j + 1].sum())
        diff = abs(first - (total - first))
        if best is None or diff < best[0]:
            best = (diff, float(times[i]), j + 1)
        i = j + 1
    if best[0] > 1:
        raise SplitError(
            "no cut point balances the malicious counts within one "
            "(a tie group spans every candidate boundary)"
        )
    return best[1], best[2]


def split_csv(path_in: str, out_first: str, out_second: str) -> SplitReport:
    src = CsvSource(path_in, batch=8192)
    if not src.labeled:
        raise InputFormatError(f"{path_in}: scenario split needs a labeled file")
    blocks = list(src.blocks())
    if not blocks:
        raise SplitError(f"{path_in}: no tuples")
    cols = {
        k: np.concatenate([b.cols[k] for b in blocks]) for k in blocks[0].cols
    }
    whole = Block(cols, True)
    order = np.argsort(cols["TimeSeconds"], kind="stable")
    whole = whole.take(order)
    times = whole.cols["TimeSeconds"]
    malicious = whole.cols["Label"] == "malicious"
    t_b, n_first = find_boundary(times, malicious)
    first, second = whole.take(slice(0, n_first)), whole.take(slice(n_first, whole.n))
    write_csv(out_first, [first])
    write_csv(out_second, [second])
    return SplitReport(
        boundary_time=t_b,
        n_first=first.n,
        n_second=second.n,
        malicious_first=int(malicious[:n_first].sum()),
        malicious_second=int(malicious[n_first:].sum()),
    )
