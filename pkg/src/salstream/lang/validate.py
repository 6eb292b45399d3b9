"""Semantic validation: name resolution, key tracking, operator signatures.

Produces a ``TypedProgram`` the engine compiles from, or raises
``SalSemanticError`` with positioned diagnostics (statement order).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ast
from ..errors import Diagnostic, SalSemanticError
from ..tuples import schema_for_connection

# Supported generate operators and the sketches behind them.
EH_OPS = frozenset({"ave", "sum", "var"})
GENERATE_OPS = frozenset({"ave", "sum", "var", "median", "countdistinct", "topk"})
# Recognized by the surface language but not implemented by this engine.
UNSUPPORTED_OPS = frozenset({"max", "min", "autocorrelation"})
HASH_FUNCTIONS = frozenset({"IpHashFunction"})

NUMERIC = (float, int)


@dataclass
class StreamInfo:
    name: str
    kind: str  # connection | keyed | filtered | transformed | collapsed
    keys: tuple[str, ...]  # empty for connections
    schema: dict[str, type]
    source: str | None
    stmt: ast.Node | None


@dataclass
class FeatureInfo:
    name: str
    stream: str  # the keyed stream the feature is computed over
    keys: tuple[str, ...]
    op: str
    field_name: str
    window: int
    kind: str  # scalar | topk | collapsed
    topk_args: tuple[int, int, int] | None = None  # (N, b, k)
    order: int = 0


@dataclass
class TypedProgram:
    source_file: str
    window_default: int | None
    connection: ast.Connection
    partition_fields: tuple[str, ...]
    hash_functions: dict[str, str]  # partition field -> hash fn name
    streams: dict[str, StreamInfo]
    features: dict[str, FeatureInfo]  # definition order
    pipeline: tuple[ast.PipelineStmt, ...]
    consts: dict[str, int] = field(default_factory=dict)

    def feature_names(self) -> list[str]:
        return list(self.features)


class _Validator:
    def __init__(self, program: ast.Program, file: str):
        self.p = program
        self.file = file
        self.diags: list[Diagnostic] = []
        self.names: dict[str, ast.Node] = {}
        self.streams: dict[str, StreamInfo] = {}
        self.features: dict[str, FeatureInfo] = {}
        self.collapses: dict[str, ast.CollapseBy] = {}

    def err(self, node: ast.Node, msg: str):
        self.diags.append(Diagnostic(self.file, node.pos.line, node.pos.col, "error", msg))

    def fail_if_errors(self):
        if self.diags:
            raise SalSemanticError(self.diags)

    def define(self, name: str, node: ast.Node) -> bool:
        if name in self.names:
            prev = self.names[name]
            self.err(node, f"duplicate definition of {name!r} (first defined at line {prev.pos.line})")
            return False
        self.names[name] = node
        return True

    # --- sections ---

    def run(self) -> TypedProgram:
        p = self.p
        consts: dict[str, int] = {}
        for c in p.consts:
            if self.define(c.name, c):
                consts[c.name] = c.value

        if not p.connections:
            self.err(p, "program defines no stream connection")
            self.fail_if_errors()
        conn = p.connections[0]
        for extra in p.connections[1:]:
            self.err(extra, "only one stream connection is supported")
        if conn.kind != "VastStream":
            self.err(conn, f"unknown connection type {conn.kind!r}; expected VastStream")
        if self.define(conn.name, conn):
            self.streams[conn.name] = StreamInfo(
                conn.name, "connection", (), schema_for_connection(), None, conn
            )

        partition_fields: tuple[str, ...] = ()
        if not p.partitions:
            self.err(conn, f"stream {conn.name!r} has no PARTITION statement")
        for part in p.partitions:
            info = self.streams.get(part.stream)
            if info is None or info.kind != "connection":
                self.err(part, f"PARTITION names unknown connection {part.stream!r}")
                continue
            if partition_fields:
                self.err(part, f"duplicate PARTITION for stream {part.stream!r}")
                continue
            seen = set()
            for f in part.fields:
                if f not in info.schema:
                    self.err(part, f"partition field {f!r} is not a tuple field")
                elif info.schema[f] is not str:
                    self.err(part, f"partition field {f!r} must be a string field")
                if f in seen:
                    self.err(part, f"partition field {f!r} listed twice")
                seen.add(f)
            partition_fields = part.fields

        hash_functions: dict[str, str] = {}
        for h in p.hashes:
            if h.field_name not in partition_fields:
                self.err(h, f"HASH field {h.field_name!r} is not named in any PARTITION")
                continue
            if h.function not in HASH_FUNCTIONS:
                self.err(h, f"unknown hash function {h.function!r}")
                continue
            if h.field_name in hash_functions:
                self.err(h, f"duplicate HASH for field {h.field_name!r}")
                continue
            hash_functions[h.field_name] = h.function
        for f in partition_fields:
            hash_functions.setdefault(f, "IpHashFunction")

        # Non-pipeline statements must precede the pipeline.
        if p.pipeline:
            first = min((s.pos.line, s.pos.col) for s in p.pipeline)
            for sec in (p.consts, p.connections, p.partitions, p.hashes):
                for s in sec:
                    if (s.pos.line, s.pos.col) > first:
                        self.err(s, "declarations must appear before the first pipeline statement")

        window_default = consts.get("WindowSize")
        self.window_default = window_default
        self.partition_fields = partition_fields
        self.order = 0

        for stmt in p.pipeline:
            self.pipeline_stmt(stmt)

        self.fail_if_errors()
        return TypedProgram(
            source_file=self.file,
            window_default=window_default,
            connection=conn,
            partition_fields=partition_fields,
            hash_functions=hash_functions,
            streams=self.streams,
            features=self.features,
            pipeline=p.pipeline,
            consts=consts,
        )

    # --- pipeline statements ---

    def source_stream(self, stmt, keyed_required: bool = True) -> StreamInfo | None:
        info = self.streams.get(stmt.source)
        if info is None:
            self.err(stmt, f"unknown stream {stmt.source!r}")
            return None
        if keyed_required and not info.keys:
            self.err(
                stmt,
                f"stream {stmt.source!r} is not keyed; apply STREAM ... BY before this operation",
            )
            return None
        return info

    def pipeline_stmt(self, stmt: ast.PipelineStmt):
        if isinstance(stmt, ast.StreamBy):
            self.stream_by(stmt)
        elif isinstance(stmt, ast.ForEachGenerate):
            self.generate(stmt)
        elif isinstance(stmt, ast.Filter):
            self.filter(stmt)
        elif isinstance(stmt, ast.Transform):
            self.transform(stmt)
        elif isinstance(stmt, ast.CollapseBy):
            self.collapse(stmt)

    def stream_by(self, stmt: ast.StreamBy):
        if not self.define(stmt.name, stmt):
            return
        info = self.streams.get(stmt.source)
        if info is None:
            self.err(stmt, f"unknown stream {stmt.source!r}")
            return
        seen = set()
        for k in stmt.keys:
            if k not in info.schema:
                self.err(stmt, f"key field {k!r} is not a field of stream {stmt.source!r}")
            if k in seen:
                self.err(stmt, f"key field {k!r} listed twice")
            seen.add(k)
        if info.kind == "connection":
            for k in stmt.keys:
                if k in info.schema and k not in self.partition_fields:
                    self.err(
                        stmt,
                        f"key field {k!r} is not a PARTITION field of {stmt.source!r}; "
                        f"tuples could not be routed to its owner",
                    )
        self.streams[stmt.name] = StreamInfo(
            stmt.name, "keyed", stmt.keys, dict(info.schema), stmt.source, stmt
        )

    def need_window(self, stmt) -> int:
        if self.window_default is None:
            self.err(stmt, "operator needs a window size but no WindowSize constant is defined")
            return 0
        return self.window_default

    def generate(self, stmt: ast.ForEachGenerate):
        if not self.define(stmt.name, stmt):
            return
        info = self.source_stream(stmt)
        if info is None:
            return
        op = stmt.op
        if op in UNSUPPORTED_OPS:
            self.err(stmt, f"operator {op!r} is recognized but not supported by this engine")
            return
        if op not in GENERATE_OPS:
            self.err(stmt, f"unknown operator {op!r}")
            return
        if info.kind == "collapsed":
            self.collapsed_consumer(stmt, info)
            return
        if op == "topk":
            self.topk(stmt, info)
            return
        if len(stmt.args) != 1 or stmt.args[0].ident is None:
            self.err(stmt, f"{op}() takes exactly one field argument")
            return
        fname = stmt.args[0].ident
        ftype = info.schema.get(fname)
        if ftype is None:
            self.err(stmt, f"field {fname!r} is not a field of stream {stmt.source!r}")
            return
        if op != "countdistinct" and ftype not in NUMERIC:
            self.err(stmt, f"{op}() needs a numeric field; {fname!r} has type {ftype.__name__}")
            return
        window = self.need_window(stmt)
        self.features[stmt.name] = FeatureInfo(
            stmt.name, stmt.source, info.keys, op, fname, window, "scalar", order=self.order
        )
        self.order += 1

    def topk(self, stmt: ast.ForEachGenerate, info: StreamInfo):
        args = stmt.args
        if len(args) != 4 or args[0].ident is None or any(a.value is None for a in args[1:]):
            self.err(stmt, "topk() takes (field, windowSize, basicWindowSize, k)")
            return
        fname = args[0].ident
        if fname not in info.schema:
            self.err(stmt, f"field {fname!r} is not a field of stream {stmt.source!r}")
            return
        n, b, k = args[1].value, args[2].value, args[3].value
        if n <= 0 or b <= 0 or k <= 0:
            self.err(stmt, "topk() sizes must be positive")
            return
        if b > n:
            self.err(stmt, f"topk() basic window ({b}) cannot exceed the window ({n})")
            return
        self.features[stmt.name] = FeatureInfo(
            stmt.name, stmt.source, info.keys, "topk", fname, n, "topk", (n, b, k), self.order
        )
        self.order += 1

    def collapsed_consumer(self, stmt: ast.ForEachGenerate, info: StreamInfo):
        op = stmt.op
        if op not in ("ave", "sum", "var", "median"):
            self.err(stmt, f"operator {op!r} is not supported on collapsed streams")
            return
        if len(stmt.args) != 1 or stmt.args[0].ident is None:
            self.err(stmt, f"{op}() takes exactly one feature argument on a collapsed stream")
            return
        fname = stmt.args[0].ident
        col = self.collapses[info.name]
        if fname not in col.features:
            self.err(
                stmt,
                f"{fname!r} is not collapsed by {info.name!r}; FOR lists {', '.join(col.features)}",
            )
            return
        self.features[stmt.name] = FeatureInfo(
            stmt.name, stmt.source, info.keys, op, fname, 0, "collapsed", order=self.order
        )
        self.order += 1

    def filter(self, stmt: ast.Filter):
        if not self.define(stmt.name, stmt):
            return
        info = self.source_stream(stmt)
        if info is None:
            return
        self.check_expr(stmt.predicate, info, allow_prev=False)
        self.streams[stmt.name] = StreamInfo(
            stmt.name, "filtered", info.keys, dict(info.schema), stmt.source, stmt
        )

    def transform(self, stmt: ast.Transform):
        if not self.define(stmt.name, stmt):
            return
        info = self.source_stream(stmt)
        if info is None:
            return
        schema: dict[str, type] = {k: str for k in info.keys}
        for it in stmt.items:
            self.check_expr(it.expr, info, allow_prev=True)
            if it.label in schema:
                self.err(stmt, f"duplicate output label {it.label!r}")
            schema[it.label] = float
        self.streams[stmt.name] = StreamInfo(
            stmt.name, "transformed", info.keys, schema, stmt.source, stmt
        )

    def collapse(self, stmt: ast.CollapseBy):
        if not self.define(stmt.name, stmt):
            return
        info = self.source_stream(stmt)
        if info is None:
            return
        for k in stmt.kept:
            if k not in info.keys:
                self.err(stmt, f"kept key {k!r} is not a key of stream {stmt.source!r}")
                return
        dropped = tuple(k for k in info.keys if k not in stmt.kept)
        if not dropped:
            self.err(stmt, "COLLAPSE must drop at least one key field")
            return
        feats = []
        for f in stmt.features:
            fi = self.features.get(f)
            if fi is None:
                self.err(stmt, f"unknown feature {f!r} in FOR list")
            elif fi.stream != stmt.source:
                self.err(stmt, f"feature {f!r} is computed over {fi.stream!r}, not {stmt.source!r}")
            elif fi.kind != "scalar":
                self.err(stmt, f"feature {f!r} is not a scalar feature")
            else:
                feats.append(f)
        schema = {k: str for k in stmt.kept}
        self.streams[stmt.name] = StreamInfo(
            stmt.name, "collapsed", stmt.kept, schema, stmt.source, stmt
        )
        self.collapses[stmt.name] = stmt

    # --- expressions ---

    def check_expr(self, e: ast.Expr, info: StreamInfo, allow_prev: bool):
        if isinstance(e, ast.Num):
            return
        if isinstance(e, ast.Name):
            if e.ident in info.schema:
                if info.schema[e.ident] not in NUMERIC:
                    self.err(e, f"field {e.ident!r} is not numeric")
                return
            fi = self.features.get(e.ident)
            if fi is not None:
                if allow_prev:
                    self.err(e, "feature references are not supported in TRANSFORM expressions")
                    return
                if fi.kind == "topk":
                    self.err(e, f"topk feature {e.ident!r} must be read with .value(i)")
                    return
                self._check_readable(fi, info, e)
                return
            self.err(e, f"unknown name {e.ident!r}")
            return
        if isinstance(e, ast.Call):
            if e.method == "prev":
                if not allow_prev:
                    self.err(e, "prev() is only allowed in TRANSFORM expressions")
                    return
                if e.name not in info.schema:
                    self.err(e, f"unknown field {e.name!r}")
                    return
                if info.schema[e.name] not in NUMERIC:
                    self.err(e, f"field {e.name!r} is not numeric")
                    return
                if e.index < 1:
                    self.err(e, "prev() index must be >= 1; use the field directly for the current value")
                return
            # value(i)
            fi = self.features.get(e.name)
            if fi is None:
                self.err(e, f"unknown feature {e.name!r}")
                return
            if fi.kind != "topk":
                self.err(e, f"value() is only defined for topk features; {e.name!r} is {fi.kind}")
                return
            if allow_prev:
                self.err(e, "feature references are not supported in TRANSFORM expressions")
                return
            k = fi.topk_args[2]
            if not (0 <= e.index < k):
                self.err(e, f"value({e.index}) is out of range for topk with k={k}")
                return
            self._check_readable(fi, info, e)
            return
        if isinstance(e, ast.BinOp):
            self.check_expr(e.left, info, allow_prev)
            self.check_expr(e.right, info, allow_prev)
            return

    def _check_readable(self, fi: FeatureInfo, info: StreamInfo, node: ast.Node):
        if fi.stream != info.name and fi.stream != self._base_chain(info):
            self.err(
                node,
                f"feature {fi.name!r} is keyed by stream {fi.stream!r} "
                f"and cannot be read from {info.name!r}",
            )

    def _base_chain(self, info: StreamInfo) -> str | None:
        """Follow filter parents so features on an upstream keyed stream are readable."""
        cur = info
        while cur.kind == "filtered" and cur.source:
            cur = self.streams[cur.source]
        return cur.name


def validate(program: ast.Program, file: str = "<string>") -> TypedProgram:
    return _Validator(program, file).run()
