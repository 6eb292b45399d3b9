"""Throughput comparison of the compiled (numba) and pure-python kernel
backends on the hot paths: string-column hashing, pooled histogram
inserts, and the full columnar engine over the standard 28-feature
program.

Run from the repository root:

    python3 benchmarks/backend_compare.py [--tuples N] [--seed S]

The python backend runs the very same kernel source uncompiled, so the
ratio column is the @njit payoff alone.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from salstream.bench import bench_program
from salstream.engine import ColumnarEngine
from salstream.sketch.backend import get_kernels
from salstream.sketch.ehpool import EHPool
from salstream.sketch.hashing import hash_bytes_column
from salstream.synth import SyntheticSource

BACKENDS = ("numba", "python")


def time_call(fn, *, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_hashing(n: int, seed: int) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    col = np.asarray([f"10.{i % 250}.{i % 199}.{i % 101}" for i in rng.integers(0, 1 << 20, n)], dtype="S")
    out = {}
    for b in BACKENDS:
        k = get_kernels(b)
        hash_bytes_column(col, kernels=k)  # warm compile
        out[b] = n / time_call(lambda: hash_bytes_column(col, kernels=k))
    return out


def bench_pool_insert(n: int, seed: int) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    slots = rng.integers(0, 1024, n).astype(np.int64)
    vals = np.empty((n, 2))
    vals[:, 0] = rng.exponential(1.0, n)
    vals[:, 1] = vals[:, 0] * vals[:, 0]
    out = {}
    for b in BACKENDS:
        def run():
            pool = EHPool(10_000, 0.01, npay=2, kernels=get_kernels(b))
            pool.ensure_slots(1024)
            pool.insert_batch(slots, vals)

        run()  # warm compile
        out[b] = n / time_call(run)
    return out


def bench_columnar(n: int, seed: int) -> dict[str, float]:
    typed = bench_program()
    out = {}
    for b in BACKENDS:
        blocks = list(SyntheticSource("uniform", seed=seed).blocks(n, 1000))

        def run():
            eng = ColumnarEngine(typed, kernels=get_kernels(b))
            for blk in blocks:
                eng.process_block(blk)

        run()  # warm compile
        out[b] = n / time_call(run)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tuples", type=int, default=100_000, help="items per scenario")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    scenarios = [
        ("fnv1a hash column", bench_hashing),
        ("pooled histogram insert (2 lanes)", bench_pool_insert),
        ("columnar engine, 28 features", bench_columnar),
    ]
    print(f"{'scenario':<36} {'numba/s':>12} {'python/s':>12} {'speedup':>8}")
    for name, fn in scenarios:
        r = fn(args.tuples, args.seed)
        print(
            f"{name:<36} {r['numba']:>12,.0f} {r['python']:>12,.0f} "
            f"{r['numba'] / r['python']:>7.1f}x"
        )


if __name__ == "__main__":
    main()
