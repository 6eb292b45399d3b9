"""Compile a validated program into an ordered operator graph.

One node per pipeline statement, in program order; executing the nodes in
sequence for each tuple gives the sequential semantics where a FILTER reads
features exactly as updated by the statements above it.

Scalar ave/sum/var features over the same keyed stream share one pooled
exponential-histogram structure (payload lanes per distinct field); the
first such feature node in program order carries the insert trigger so each
tuple enters the pool exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import Diagnostic
from ..lang import ast
from ..lang.validate import FeatureInfo, TypedProgram

# Operators answered from pooled exponential histograms (count+sum lanes).
EH_POOL_OPS = frozenset({"ave", "sum", "var"})


@dataclass
class DemuxNode:
    """STREAM BY: demultiplex a stream into per-key substreams."""

    out: str
    src: str
    keys: tuple[str, ...]
    # Set when src is the connection: the field whose hash decides which
    # cluster node owns this grouping's state. Derived demuxes inherit
    # ownership from their source stream.
    owner_field: str | None


@dataclass
class FeatureGenNode:
    """FOREACH GENERATE: update a per-key sketch and publish the feature."""

    feature: FeatureInfo
    src: str
    pool_trigger: bool = False


@dataclass
class FilterNode:
    out: str
    src: str
    expr: ast.Expr


@dataclass
class TransformNode:
    out: str
    src: str
    keys: tuple[str, ...]
    items: tuple[ast.TransformItem, ...]
    # fields whose history the prev() accessors need, with max depth each
    prev_fields: dict[str, int] = field(default_factory=dict)


@dataclass
class CollapseNode:
    out: str
    src: str
    kept: tuple[str, ...]
    dropped: tuple[str, ...]
    residuals: tuple[str, ...]  # FOR feature names, in statement order


@dataclass
class CollapsedGenNode:
    """FOREACH GENERATE over a collapsed stream: statistic across the
    current MapFeature values."""

    feature: FeatureInfo
    src: str
    residual_index: int


Node = (
    DemuxNode | FeatureGenNode | FilterNode | TransformNode | CollapseNode | CollapsedGenNode
)


@dataclass
class DataflowGraph:
    typed: TypedProgram
    nodes: list
    # keyed stream -> ordered distinct fields served by its shared pool
    pool_fields: dict[str, tuple[str, ...]]
    warnings: list[Diagnostic]

    def emitted_features(self) -> list[FeatureInfo]:
        """Features that appear as columns in feature-row output: everything
        scalar-valued. topk features are list-valued predicates and are
        published to the feature map but not emitted as CSV columns."""
        return [f for f in self.typed.features.values() if f.kind != "topk"]


def compile_program(typed: TypedProgram) -> DataflowGraph:
    nodes: list = []
    warnings: list[Diagnostic] = []
    pool_fields: dict[str, list[str]] = {}
    pool_triggered: set[str] = set()

    collapse_by_stream: dict[str, CollapseNode] = {}

    for stmt in typed.pipeline:
        if isinstance(stmt, ast.StreamBy):
            src_info = typed.streams[stmt.source]
            owner = stmt.keys[0] if src_info.kind == "connection" else None
            nodes.append(DemuxNode(stmt.name, stmt.source, tuple(stmt.keys), owner))
        elif isinstance(stmt, ast.ForEachGenerate):
            feat = typed.features[stmt.name]
            if feat.kind == "collapsed":
                cnode = collapse_by_stream[feat.stream]
                nodes.append(
                    CollapsedGenNode(feat, feat.stream, cnode.residuals.index(feat.field_name))
                )
                continue
            trigger = False
            if feat.kind == "scalar" and feat.op in EH_POOL_OPS:
                flds = pool_fields.setdefault(feat.stream, [])
                if feat.field_name not in flds:
                    flds.append(feat.field_name)
                if feat.stream not in pool_triggered:
                    pool_triggered.add(feat.stream)
                    trigger = True
            nodes.append(FeatureGenNode(feat, feat.stream, trigger))
        elif isinstance(stmt, ast.Filter):
            nodes.append(FilterNode(stmt.name, stmt.source, stmt.predicate))
        elif isinstance(stmt, ast.Transform):
            info = typed.streams[stmt.name]
            prev_fields: dict[str, int] = {}
            for item in stmt.items:
                _collect_prev(item.expr, prev_fields)
            nodes.append(
                TransformNode(stmt.name, stmt.source, info.keys, tuple(stmt.items), prev_fields)
            )
        elif isinstance(stmt, ast.CollapseBy):
            src_keys = typed.streams[stmt.source].keys
            dropped = tuple(k for k in src_keys if k not in stmt.kept)
            node = CollapseNode(
                stmt.name, stmt.source, tuple(stmt.kept), dropped, tuple(stmt.features)
            )
            collapse_by_stream[stmt.name] = node
            nodes.append(node)
        else:  # pragma: no cover - validation admits no other forms
            raise AssertionError(f"unhandled statement {type(stmt).__name__}")

    if not nodes:
        warnings.append(
            Diagnostic(
                typed.source_file, 1, 1, "warning",
                "pipeline is empty: program declares no streams or features",
            )
        )

    return DataflowGraph(
        typed, nodes, {s: tuple(f) for s, f in pool_fields.items()}, warnings
    )


def _collect_prev(e: ast.Expr, out: dict[str, int]) -> None:
    if isinstance(e, ast.Call) and e.method == "prev":
        out[e.name] = max(out.get(e.name, 0), e.index)
    elif isinstance(e, ast.BinOp):
        _collect_prev(e.left, out)
        _collect_prev(e.right, out)
