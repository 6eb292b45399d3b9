"""Tuple-at-a-time executor for the full statement set.

Each input tuple walks the operator list in program order; an ``env`` dict
maps stream names to the (key, row) pair flowing on that edge for the
current tuple, or None where an upstream filter/transform dropped it.

Per-key state lives outside the env: pooled exponential histograms for
ave/sum/var, one sketch object per (feature, key) for topk/median/distinct,
history buffers for prev(), and MapFeatures for COLLAPSE BY. Feature values
are published eagerly to the FeatureMap at each statement, so downstream
reads within the same tuple's pass observe them.

One engine instance is driven by a single worker thread; cross-node
parallelism comes from running one engine per cluster node.
"""

from __future__ import annotations

import numpy as np

from ..errors import NotReady
from ..lang.validate import TypedProgram
from ..sketch import (
    BasicWindowTopK,
    DistinctSketch,
    EHPool,
    PrevBuffer,
    QuantileSketch,
    get_kernels,
)
from ..sketch.hashing import ip_hash
from ..tuples import KEY_SEP
from .expr import EvalContext, evaluate
from .featuremap import NOT_READY, FeatureMap, MapFeature
from .graph import (
    CollapseNode,
    CollapsedGenNode,
    DataflowGraph,
    DemuxNode,
    FeatureGenNode,
    FilterNode,
    TransformNode,
    compile_program,
)


class EngineMetrics:
    __slots__ = (
        "tuples_in",
        "dropped_not_ready",
        "dropped_arith",
        "filtered_out",
        "collapse_skips",
        "rows_emitted",
    )

    def __init__(self):
        self.tuples_in = 0
        self.dropped_not_ready = 0
        self.dropped_arith = 0
        self.filtered_out = 0
        self.collapse_skips = 0
        self.rows_emitted = 0

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__slots__}


def _key_of(row, fields) -> str:
    if len(fields) == 1:
        return str(row[fields[0]])
    return KEY_SEP.join(str(row[f]) for f in fields)


class Engine:
    """General executor over a compiled DataflowGraph."""

    def __init__(
        self,
        graph: DataflowGraph | TypedProgram,
        *,
        node_id: int = 0,
        n_nodes: int = 1,
        eps: float = 0.01,
        distinct_precision: int = 12,
        mapfeature_cap: int = 10_000,
        emit: bool = False,
        kernels=None,
    ):
        if isinstance(graph, TypedProgram):
            graph = compile_program(graph)
        self.graph = graph
        self.node_id = node_id
        self.n_nodes = n_nodes
        self.eps = eps
        self.distinct_precision = distinct_precision
        self.mapfeature_cap = mapfeature_cap
        self.emit = emit
        self.kernels = kernels or get_kernels()

        self.fm = FeatureMap()
        self.metrics = EngineMetrics()

        # shared ave/sum/var state, one pool per keyed stream
        self.pools: dict[str, EHPool] = {}
        self.slotmaps: dict[str, dict[str, int]] = {}
        self._valbuf: dict[str, np.ndarray] = {}
        typed = graph.typed
        for stream, fields in graph.pool_fields.items():
            windows = {
                f.window
                for f in typed.features.values()
                if f.stream == stream and f.kind == "scalar" and f.op in ("ave", "sum", "var")
            }
            assert len(windows) == 1, "one window per stream's pooled features"
            self.pools[stream] = EHPool(
                windows.pop(), eps=eps, npay=2 * len(fields), kernels=self.kernels
            )
            self.slotmaps[stream] = {}
            self._valbuf[stream] = np.empty(2 * len(fields), np.float64)

        # per-(feature, key) sketches
        self.topk_sketches: dict[tuple[str, str], BasicWindowTopK] = {}
        self.quant_sketches: dict[tuple[str, str], QuantileSketch] = {}
        self.dist_sketches: dict[tuple[str, str], DistinctSketch] = {}
        # (stream, field) -> key -> PrevBuffer
        self.prevbufs: dict[tuple[str, str], dict[str, PrevBuffer]] = {}
        # (collapsed stream, kept key) -> MapFeature
        self.collapse_maps: dict[tuple[str, str], MapFeature] = {}

        self._feature_names = frozenset(typed.features)
        self._conn = typed.connection.name
        self._emit_feats = [(f, f.keys) for f in graph.emitted_features()]
        self._env: dict = {}
        self._runners = [self._make_runner(n) for n in graph.nodes]

    # --- node runners -------------------------------------------------

    def _make_runner(self, node):
        if isinstance(node, DemuxNode):
            return self._run_demux(node)
        if isinstance(node, FeatureGenNode):
            feat = node.feature
            if feat.kind == "scalar" and feat.op in ("ave", "sum", "var"):
                return self._run_eh_feature(node)
            if feat.kind == "topk":
                return self._run_topk(node)
            if feat.op == "median":
                return self._run_median(node)
            if feat.op == "countdistinct":
                return self._run_distinct(node)
            raise AssertionError(f"unhandled operator {feat.op}")
        if isinstance(node, FilterNode):
            return self._run_filter(node)
        if isinstance(node, TransformNode):
            return self._run_transform(node)
        if isinstance(node, CollapseNode):
            return self._run_collapse(node)
        if isinstance(node, CollapsedGenNode):
            return self._run_collapsed_gen(node)
        raise AssertionError(f"unhandled node {type(node).__name__}")

    def _run_demux(self, node: DemuxNode):
        src, out, keys, owner = node.src, node.out, node.keys, node.owner_field
        nn, me = self.n_nodes, self.node_id

        def run(env):
            entry = env.get(src)
            if entry is None:
                env[out] = None
                return
            row = entry[1]
            if owner is not None and nn > 1 and ip_hash(str(row[owner])) % nn != me:
                env[out] = None
                return
            env[out] = (_key_of(row, keys), row)

        return run

    def _run_eh_feature(self, node: FeatureGenNode):
        feat = node.feature
        stream = node.src
        pool = self.pools[stream]
        slots = self.slotmaps[stream]
        fields = self.graph.pool_fields[stream]
        vbuf = self._valbuf[stream]
        fidx = fields.index(feat.field_name)
        base = 1 + 2 * fidx
        op, name = feat.op, feat.name
        trigger = node.pool_trigger
        qtag = ("q", stream)
        fm = self.fm

        def run(env):
            entry = env.get(stream)
            if entry is None:
                return
            key, row = entry
            slot = slots.get(key)
            if slot is None:
                slot = slots[key] = len(slots)
                pool.ensure_slots(len(slots))
            if trigger:
                for j, f in enumerate(fields):
                    x = float(row[f])
                    vbuf[2 * j] = x
                    vbuf[2 * j + 1] = x * x
                pool.insert_one(slot, vbuf)
                env[qtag] = pool.query_one(slot)
            q = env[qtag]
            c = q[0]
            if op == "sum":
                v = q[base]
            elif op == "ave":
                v = q[base] / c
            else:  # var
                m = q[base] / c
                v = max(0.0, q[base + 1] / c - m * m)
            fm.update_insert(key, name, float(v))

        return run

    def _run_topk(self, node: FeatureGenNode):
        feat = node.feature
        stream, name, field = node.src, feat.name, feat.field_name
        wn, b, k = feat.topk_args
        sketches = self.topk_sketches
        fm = self.fm

        def run(env):
            entry = env.get(stream)
            if entry is None:
                return
            key, row = entry
            sk = sketches.get((name, key))
            if sk is None:
                sk = sketches[(name, key)] = BasicWindowTopK(wn, b, k)
            sk.insert(str(row[field]))
            fm.update_insert(key, name, sk.query_topk())

        return run

    def _run_median(self, node: FeatureGenNode):
        feat = node.feature
        stream, name, field, window = node.src, feat.name, feat.field_name, feat.window
        eps = self.eps
        sketches = self.quant_sketches
        fm = self.fm

        def run(env):
            entry = env.get(stream)
            if entry is None:
                return
            key, row = entry
            sk = sketches.get((name, key))
            if sk is None:
                sk = sketches[(name, key)] = QuantileSketch(eps=eps, window=window)
            sk.insert(float(row[field]))
            fm.update_insert(key, name, sk.query_median())

        return run

    def _run_distinct(self, node: FeatureGenNode):
        feat = node.feature
        stream, name, field, window = node.src, feat.name, feat.field_name, feat.window
        prec = self.distinct_precision
        sketches = self.dist_sketches
        fm = self.fm

        def run(env):
            entry = env.get(stream)
            if entry is None:
                return
            key, row = entry
            sk = sketches.get((name, key))
            if sk is None:
                sk = sketches[(name, key)] = DistinctSketch(window, precision=prec)
            sk.insert(str(row[field]))
            fm.update_insert(key, name, sk.query_distinct())

        return run

    def _run_filter(self, node: FilterNode):
        src, out, expr = node.src, node.out, node.expr
        fm = self.fm
        names = self._feature_names
        m = self.metrics

        def run(env):
            entry = env.get(src)
            if entry is None:
                env[out] = None
                return
            key, row = entry
            try:
                keep = evaluate(expr, EvalContext(row, fm, key, names))
            except NotReady:
                m.dropped_not_ready += 1
                env[out] = None
                return
            except ZeroDivisionError:
                m.dropped_arith += 1
                env[out] = None
                return
            if keep:
                env[out] = entry
            else:
                m.filtered_out += 1
                env[out] = None

        return run

    def _run_transform(self, node: TransformNode):
        src, out, keys, items = node.src, node.out, node.keys, node.items
        prev_fields = tuple(node.prev_fields.items())
        bufs = {f: self.prevbufs.setdefault((src, f), {}) for f, _ in prev_fields}
        fm = self.fm
        names = self._feature_names
        m = self.metrics

        def run(env):
            entry = env.get(src)
            if entry is None:
                env[out] = None
                return
            key, row = entry
            # history advances first: prev(0) is the current tuple's value,
            # prev(i) the value i tuples back for this key
            for field, depth in prev_fields:
                d = bufs[field]
                buf = d.get(key)
                if buf is None:
                    buf = d[key] = PrevBuffer(depth)
                buf.store(float(row[field]))

            def prev_lookup(field, i):
                return bufs[field][key].prev(i)

            outrow = {k: row[k] for k in keys}
            ok = True
            for item in items:
                try:
                    outrow[item.label] = evaluate(
                        item.expr, EvalContext(row, fm, key, names, prev_lookup)
                    )
                except NotReady:
                    m.dropped_not_ready += 1
                    ok = False
                    break
                except ZeroDivisionError:
                    m.dropped_arith += 1
                    ok = False
                    break
            env[out] = (key, outrow) if ok else None

        return run

    def _run_collapse(self, node: CollapseNode):
        src, out, kept, dropped, residuals = (
            node.src,
            node.out,
            node.kept,
            node.dropped,
            node.residuals,
        )
        maps = self.collapse_maps
        cap = self.mapfeature_cap
        fm = self.fm
        m = self.metrics

        def run(env):
            entry = env.get(src)
            if entry is None:
                env[out] = None
                return
            key, row = entry
            resid = []
            for fname in residuals:
                v = fm.get(key, fname)
                if v is NOT_READY:
                    m.collapse_skips += 1
                    env[out] = None
                    return
                resid.append(v)
            kept_key = _key_of(row, kept)
            mf = maps.get((out, kept_key))
            if mf is None:
                mf = maps[(out, kept_key)] = MapFeature(cap)
            mf.put(_key_of(row, dropped), tuple(resid))
            env[out] = (kept_key, {k: row[k] for k in kept})

        return run

    def _run_collapsed_gen(self, node: CollapsedGenNode):
        src, feat, ridx = node.src, node.feature, node.residual_index
        op, name = feat.op, feat.name
        maps = self.collapse_maps
        fm = self.fm

        def run(env):
            entry = env.get(src)
            if entry is None:
                return
            kept_key, _ = entry
            mf = maps[(src, kept_key)]
            vals = [r[ridx] for r in mf.values()]
            if op == "sum":
                v = float(sum(vals))
            elif op == "ave":
                v = float(sum(vals)) / len(vals)
            elif op == "var":
                n = len(vals)
                mean = sum(vals) / n
                v = max(0.0, sum(x * x for x in vals) / n - mean * mean)
            else:  # median: lower median of the current map values
                s = sorted(vals)
                v = float(s[(len(s) - 1) // 2])
            fm.update_insert(kept_key, name, float(v))

        return run

    # --- driving ------------------------------------------------------

    def process_row(self, row: dict) -> list[str] | None:
        """Run one tuple through the graph. Returns the feature cells for
        this row (not-ready as empty strings) when emission is on."""
        self.metrics.tuples_in += 1
        env = self._env
        env.clear()
        env[self._conn] = ("", row)
        for run in self._runners:
            run(env)
        if not self.emit:
            return None
        fm = self.fm
        cells = []
        for feat, keyfields in self._emit_feats:
            v = fm.get(_key_of(row, keyfields), feat.name)
            cells.append("" if v is NOT_READY else repr(float(v)))
        self.metrics.rows_emitted += 1
        return cells

    def process_block(self, block) -> None:
        for i in range(block.n):
            self.process_row(block.row(i))

    def dump_lines(self) -> list[str]:
        return self.fm.dump_lines()
