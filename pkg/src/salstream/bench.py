"""Weak-scaling benchmark: fixed tuples-per-node, synthetic generators,
in-process nodes.

Reports three efficiencies per run:
  e_wall  = wall(1) / wall(n) — honest elapsed-time scaling, which on a
            single-core host degrades like 1/n because the logical nodes
            time-share the core;
  e_crit  = busy(1) / max-node-busy(n) — critical-path proxy from per-
            thread CPU seconds (GIL waits from co-scheduled nodes don't
            count). Caveat: on one core this still folds in cache effects;
            a hot key concentrates inserts on one arena slot and can make
            the busiest node's per-tuple cost cheaper, not dearer;
  e_load  = mean received / max received — tuple-volume balance across
            nodes. With one real core per node and equal per-tuple cost,
            weak-scaling runtime is set by the most-loaded node, so this
            is the distribution-skew effect isolated from host artifacts.
"""

from __future__ import annotations

import time

from .cluster import run_cluster
from .lang import parse_program, validate
from .pipelines import gen_pipeline
from .synth import SyntheticSource


def bench_program(window: int = 10_000):
    src = gen_pipeline(window=window)
    return validate(parse_program(src, "bench.sal"), "bench.sal")


def run_one(
    typed,
    *,
    n_nodes: int,
    tuples_per_node: int,
    gen_mode: str,
    seed: int,
    batch: int = 1000,
    n_keys: int | None = None,
    eps: float = 0.01,
) -> dict:
    sources = [
        SyntheticSource(gen_mode, seed=seed + 1000 * i, n_keys=n_keys).blocks(
            tuples_per_node, batch
        )
        for i in range(n_nodes)
    ]
    res = run_cluster(typed, sources, n_nodes=n_nodes, eps=eps, batch=batch)
    received = [m.received_tuples for m in res.nodes]
    busy = [m.busy_seconds for m in res.nodes]
    total_in = n_nodes * tuples_per_node
    return {
        "nodes": n_nodes,
        "generator": gen_mode,
        "tuples_per_node": tuples_per_node,
        "tuples_ingested": total_in,
        "deliveries": res.total_deliveries,
        "received_per_node": received,
        "busy_seconds_per_node": [round(b, 4) for b in busy],
        "max_busy_seconds": round(max(busy), 4),
        "wall_seconds": round(res.wall_seconds, 4),
        "throughput_tuples_per_second": round(total_in / res.wall_seconds, 1),
        "engine": res.engine_kind,
    }


def run_sweep(
    n_list: list[int],
    *,
    tuples_per_node: int,
    gen_mode: str,
    seed: int,
    batch: int = 1000,
    n_keys: int | None = None,
    window: int = 10_000,
) -> list[dict]:
    typed = bench_program(window)
    # discarded warmup so kernel dispatch costs don't land on the baseline
    run_one(
        typed, n_nodes=1, tuples_per_node=2000, gen_mode=gen_mode, seed=seed, batch=batch
    )
    out = []
    base_wall = base_busy = None
    for n in n_list:
        r = run_one(
            typed,
            n_nodes=n,
            tuples_per_node=tuples_per_node,
            gen_mode=gen_mode,
            seed=seed,
            batch=batch,
            n_keys=n_keys,
        )
        if base_wall is None:
            base_wall, base_busy = r["wall_seconds"], r["max_busy_seconds"]
        r["e_wall"] = round(base_wall / r["wall_seconds"], 4)
        r["e_crit"] = round(base_busy / r["max_busy_seconds"], 4)
        recv = r["received_per_node"]
        r["e_load"] = round(sum(recv) / len(recv) / max(recv), 4)
        out.append(r)
    return out
