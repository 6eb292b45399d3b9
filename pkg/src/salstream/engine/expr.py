"""Expression evaluation against a tuple, the feature map, and (for
TRANSFORM bodies) per-key history buffers.

Evaluation can signal two conditions the caller must decide on:
``NotReady`` (a referenced feature or prev() slot has no value yet) and
``ZeroDivisionError`` (arithmetic fault). Filters and transforms drop the
tuple in both cases and count the drops separately.
"""

from __future__ import annotations

from ..errors import NotReady
from ..lang import ast
from .featuremap import NOT_READY, FeatureMap


class EvalContext:
    """Name-resolution environment for one tuple at one pipeline node.

    feature_names decides whether a bare identifier reads the feature map
    or the tuple; prev_lookup is only set inside TRANSFORM bodies.
    """

    __slots__ = ("row", "fm", "key", "feature_names", "prev_lookup")

    def __init__(self, row, fm: FeatureMap | None, key: str | None,
                 feature_names, prev_lookup=None):
        self.row = row
        self.fm = fm
        self.key = key
        self.feature_names = feature_names
        self.prev_lookup = prev_lookup


def evaluate(node: ast.Expr, ctx: EvalContext):
    if isinstance(node, ast.Num):
        return int(node.value) if node.is_int else node.value
    if isinstance(node, ast.Name):
        if node.ident in ctx.feature_names:
            v = ctx.fm.get(ctx.key, node.ident)
            if v is NOT_READY:
                raise NotReady(node.ident)
            return v
        return ctx.row[node.ident]
    if isinstance(node, ast.Call):
        if node.method == "prev":
            return ctx.prev_lookup(node.name, node.index)
        # value(i): rank i of a topk snapshot; absent ranks contribute 0.
        v = ctx.fm.get(ctx.key, node.name)
        if v is NOT_READY:
            raise NotReady(node.name)
        return v[node.index][1] if node.index < len(v) else 0.0
    if isinstance(node, ast.BinOp):
        a = evaluate(node.left, ctx)
        b = evaluate(node.right, ctx)
        op = node.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return a / b
        if op == ">":
            return a > b
        if op == "<":
            return a < b
        if op == ">=":
            return a >= b
        if op == "<=":
            return a <= b
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        raise AssertionError(f"unknown operator {op!r}")
    raise AssertionError(f"unknown expression node {type(node).__name__}")
