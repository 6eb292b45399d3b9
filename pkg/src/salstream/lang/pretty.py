"""Canonical pretty-printer. ``parse_program(pretty(p)) == p`` for valid ASTs."""

from __future__ import annotations

from . import ast

_PREC = {"==": 1, "!=": 1, ">": 1, "<": 1, ">=": 1, "<=": 1, "+": 2, "-": 2, "*": 3, "/": 3}


def expr(e: ast.Expr, parent_prec: int = 0, right: bool = False) -> str:
    if isinstance(e, ast.Num):
        if e.is_int:
            return str(int(e.value))
        return repr(e.value)
    if isinstance(e, ast.Name):
        return e.ident
    if isinstance(e, ast.Call):
        return f"{e.name}.{e.method}({e.index})"
    if isinstance(e, ast.BinOp):
        p = _PREC[e.op]
        s = f"{expr(e.left, p, False)} {e.op} {expr(e.right, p, True)}"
        # parenthesize when binding looser than context, or equal on the right
        # (operators are left-associative)
        if p < parent_prec or (p == parent_prec and right):
            return f"({s})"
        return s
    raise TypeError(f"not an expression node: {e!r}")


def _op_arg(a: ast.OpArg) -> str:
    return a.ident if a.ident is not None else str(a.value)


def statement(s: ast.Statement) -> str:
    if isinstance(s, ast.ConstDef):
        return f"{s.name} = {s.value};"
    if isinstance(s, ast.Connection):
        return f'{s.name} = {s.kind}("{s.host}", {s.port});'
    if isinstance(s, ast.Partition):
        return f"PARTITION {s.stream} BY {', '.join(s.fields)};"
    if isinstance(s, ast.HashDecl):
        return f"HASH {s.field_name} WITH {s.function};"
    if isinstance(s, ast.StreamBy):
        return f"{s.name} = STREAM {s.source} BY {', '.join(s.keys)};"
    if isinstance(s, ast.ForEachGenerate):
        return f"{s.name} = FOREACH {s.source} GENERATE {s.op}({', '.join(_op_arg(a) for a in s.args)});"
    if isinstance(s, ast.Filter):
        return f"{s.name} = FILTER {s.source} BY {expr(s.predicate)};"
    if isinstance(s, ast.Transform):
        items = ", ".join(f"({expr(it.expr)}) : {it.label}" for it in s.items)
        return f"{s.name} = FOREACH {s.source} TRANSFORM {items};"
    if isinstance(s, ast.CollapseBy):
        return (
            f"{s.name} = COLLAPSE {s.source} BY {', '.join(s.kept)} "
            f"FOR {', '.join(s.features)};"
        )
    raise TypeError(f"not a statement node: {s!r}")


def pretty(p: ast.Program) -> str:
    lines: list[str] = []
    for sec in (p.consts, p.connections, p.partitions, p.hashes, p.pipeline):
        for s in sec:
            lines.append(statement(s))
    return "\n".join(lines) + "\n"
