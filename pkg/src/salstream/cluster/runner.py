"""Drive N logical nodes: route blocks by hashed partition keys, execute
per-node engines, and merge the resulting feature-map dumps.

Each node runs one worker thread (its engine is single-threaded state)
plus, when it has its own source, one ingest/router thread. Ingesters
send every block slice to the node(s) owning its partition-key hashes —
the same tuple goes to two nodes when its SourceIp and DestIp hash
differently — then broadcast TERMINATE; workers stop after a TERMINATE
from every ingesting node.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

import numpy as np

from ..engine import ColumnarEngine, Engine, columnar_eligible, compile_program
from ..lang.validate import TypedProgram
from ..sketch.hashing import hash_bytes_column, to_unsigned
from .topology import local_topology
from .transport import InProcTransport, TcpTransport


@dataclass
class NodeMetrics:
    node_id: int
    received_tuples: int = 0
    deliveries_sent: int = 0
    ingested_tuples: int = 0
    busy_seconds: float = 0.0
    ingest_seconds: float = 0.0
    malformed: int = 0

    def as_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass
class ClusterResult:
    merged_dump: list[str]
    node_dumps: list[list[str]]
    nodes: list[NodeMetrics]
    wall_seconds: float
    engine_kind: str
    extra: dict = field(default_factory=dict)

    @property
    def total_deliveries(self) -> int:
        return sum(m.deliveries_sent for m in self.nodes)

    @property
    def total_received(self) -> int:
        return sum(m.received_tuples for m in self.nodes)


def make_engine(
    typed: TypedProgram, *, node_id=0, n_nodes=1, eps=0.01, engine="auto", emit=False
):
    graph = compile_program(typed)
    if engine == "general" or emit:
        return Engine(graph, node_id=node_id, n_nodes=n_nodes, eps=eps, emit=emit)
    if columnar_eligible(typed):
        return ColumnarEngine(graph, node_id=node_id, n_nodes=n_nodes, eps=eps)
    if engine == "columnar":
        raise ValueError("program shape not supported by the columnar engine")
    return Engine(graph, node_id=node_id, n_nodes=n_nodes, eps=eps)


def _ingest(ep, blocks, fields, n_nodes, m: NodeMetrics):
    t0 = time.thread_time()
    for block in blocks:
        m.ingested_tuples += block.n
        if n_nodes == 1:
            m.deliveries_sent += block.n
            ep.send_block(0, block)
            continue
        owners = [
            to_unsigned(hash_bytes_column(np.asarray(block.cols[f], dtype="S"))) % n_nodes
            for f in fields
        ]
        for dest in range(n_nodes):
            mask = owners[0] == dest
            for o in owners[1:]:
                mask |= o == dest
            cnt = int(mask.sum())
            if cnt == 0:
                continue
            sub = block if cnt == block.n else block.take(mask)
            m.deliveries_sent += cnt
            ep.send_block(dest, sub)
    for dest in range(n_nodes):
        ep.send_terminate(dest)
    m.ingest_seconds = time.thread_time() - t0


def _worker(ep, engine, expected_terms, m: NodeMetrics):
    terms = 0
    busy = 0.0
    while terms < expected_terms:
        kind, payload = ep.recv()
        if kind == "t":
            terms += 1
            continue
        # thread CPU time, not wall: in-call wall on an oversubscribed host
        # mostly measures GIL waits, which would mask per-node work skew
        t0 = time.thread_time()
        engine.process_block(payload)
        busy += time.thread_time() - t0
        m.received_tuples += payload.n
    m.busy_seconds = busy


def run_cluster(
    typed: TypedProgram,
    sources: list,
    *,
    n_nodes: int,
    transport: str = "inproc",
    engine: str = "auto",
    eps: float = 0.01,
    batch: int = 1000,
    capacity: int = 10_000,
    base_port: int = 38_000,
    labeled: bool = False,
    topology=None,
) -> ClusterResult:
    """Run the program across n_nodes. sources[i] is node i's block
    iterable, or None for nodes that only receive."""
    assert len(sources) == n_nodes
    engines = [
        make_engine(typed, node_id=i, n_nodes=n_nodes, eps=eps, engine=engine)
        for i in range(n_nodes)
    ]
    fields = list(typed.partition_fields)
    ingest_nodes = [i for i, s in enumerate(sources) if s is not None]
    if not ingest_nodes:
        raise ValueError("at least one node needs a source")

    if transport == "inproc":
        fabric = InProcTransport(n_nodes, capacity=capacity, batch=batch)
        endpoints = [fabric.endpoint(i) for i in range(n_nodes)]
    elif transport == "tcp":
        topo = topology or local_topology(n_nodes, base_port)
        endpoints = [
            TcpTransport(
                topo,
                i,
                labeled=labeled,
                expected_inbound=len([j for j in ingest_nodes if j != i]),
                batch=batch,
                capacity=capacity,
            )
            for i in range(n_nodes)
        ]
    else:
        raise ValueError(f"unknown transport: {transport}")

    metrics = [NodeMetrics(i) for i in range(n_nodes)]
    expected_terms = len(ingest_nodes)
    workers = [
        threading.Thread(
            target=_worker, args=(endpoints[i], engines[i], expected_terms, metrics[i])
        )
        for i in range(n_nodes)
    ]
    ingesters = [
        threading.Thread(
            target=_ingest, args=(endpoints[i], sources[i], fields, n_nodes, metrics[i])
        )
        for i in ingest_nodes
    ]

    t0 = time.perf_counter()
    for t in workers:
        t.start()
    for t in ingesters:
        t.start()
    for t in ingesters:
        t.join()
    for t in workers:
        t.join()
    wall = time.perf_counter() - t0

    for i, ep in enumerate(endpoints):
        metrics[i].malformed = getattr(ep, "malformed", 0)
        ep.close()

    node_dumps = [e.dump_lines() for e in engines]
    merged = sorted(line for d in node_dumps for line in d)
    kind = type(engines[0]).__name__
    return ClusterResult(merged, node_dumps, metrics, wall, kind)
