"""AST node definitions.

Nodes compare structurally; source positions are carried but excluded from
equality so pretty-print round-trips can be checked with ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


def _pos() -> Pos:
    return Pos(0, 0)


@dataclass(frozen=True)
class Node:
    pos: Pos = field(default_factory=_pos, compare=False, kw_only=True)


# --- expressions ---


@dataclass(frozen=True)
class Num(Node):
    value: float
    is_int: bool


@dataclass(frozen=True)
class Name(Node):
    """Bare identifier: a tuple field or a feature; resolved in validation."""

    ident: str


@dataclass(frozen=True)
class Call(Node):
    """``name.method(index)`` where method is ``value`` or ``prev``."""

    name: str
    method: str
    index: int


@dataclass(frozen=True)
class BinOp(Node):
    op: str  # + - * / > < >= <= == !=
    left: "Expr"
    right: "Expr"


Expr = Num | Name | Call | BinOp


# --- statements ---


@dataclass(frozen=True)
class ConstDef(Node):
    name: str
    value: int


@dataclass(frozen=True)
class Connection(Node):
    name: str
    kind: str  # e.g. VastStream
    host: str
    port: int


@dataclass(frozen=True)
class Partition(Node):
    stream: str
    fields: tuple[str, ...]


@dataclass(frozen=True)
class HashDecl(Node):
    field_name: str
    function: str


@dataclass(frozen=True)
class StreamBy(Node):
    name: str
    source: str
    keys: tuple[str, ...]


@dataclass(frozen=True)
class OpArg(Node):
    """Argument to a generate operator: a field name or an integer."""

    ident: str | None
    value: int | None


@dataclass(frozen=True)
class ForEachGenerate(Node):
    name: str
    source: str
    op: str
    args: tuple[OpArg, ...]


@dataclass(frozen=True)
class Filter(Node):
    name: str
    source: str
    predicate: Expr


@dataclass(frozen=True)
class TransformItem(Node):
    expr: Expr
    label: str


@dataclass(frozen=True)
class Transform(Node):
    name: str
    source: str
    items: tuple[TransformItem, ...]


@dataclass(frozen=True)
class CollapseBy(Node):
    name: str
    source: str
    kept: tuple[str, ...]
    features: tuple[str, ...]


PipelineStmt = StreamBy | ForEachGenerate | Filter | Transform | CollapseBy
Statement = ConstDef | Connection | Partition | HashDecl | PipelineStmt


@dataclass(frozen=True)
class Program(Node):
    consts: tuple[ConstDef, ...]
    connections: tuple[Connection, ...]
    partitions: tuple[Partition, ...]
    hashes: tuple[HashDecl, ...]
    pipeline: tuple[PipelineStmt, ...]
