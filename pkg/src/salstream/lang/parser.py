"""Recursive-descent parser producing the AST in ``ast.py``.

Statement forms:

    Name = Int ;
    Name = Conn("host", port) ;
    PARTITION stream BY f1, f2 ;
    HASH field WITH fn ;
    Name = STREAM src BY k1, k2 ;
    Name = FOREACH src GENERATE op(args) ;
    Name = FOREACH src TRANSFORM expr : Label, ... ;
    Name = FILTER src BY expr ;
    Name = COLLAPSE src BY k1 FOR f1, f2 ;
"""

from __future__ import annotations

from . import ast
from .lexer import Token, tokenize
from ..errors import Diagnostic, SalSyntaxError

_COMPARE = {"GT": ">", "LT": "<", "GE": ">=", "LE": "<=", "EQEQ": "==", "NE": "!="}
_ADD = {"PLUS": "+", "MINUS": "-"}
_MUL = {"STAR": "*", "SLASH": "/"}


class _Parser:
    def __init__(self, toks: list[Token], file: str):
        self.toks = toks
        self.i = 0
        self.file = file

    # --- token helpers ---

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def err(self, tok: Token, msg: str):
        raise SalSyntaxError([Diagnostic(self.file, tok.line, tok.col, "error", msg)])

    def expect(self, kind: str, what: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            got = t.text if t.kind != "EOF" else "end of input"
            self.err(t, f"expected {what}, got {got!r}")
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        t = self.peek()
        if t.kind != "IDENT":
            if t.kind in ("STREAM", "BY", "FOREACH", "GENERATE", "FILTER", "TRANSFORM", "COLLAPSE", "FOR", "PARTITION", "HASH", "WITH"):
                self.err(t, f"{t.text!r} is a reserved keyword and cannot be used as an {what}")
            self.err(t, f"expected {what}, got {t.text if t.kind != 'EOF' else 'end of input'!r}")
        return self.next()

    def pos(self, t: Token) -> ast.Pos:
        return ast.Pos(t.line, t.col)

    # --- program ---

    def program(self) -> ast.Program:
        consts: list[ast.ConstDef] = []
        conns: list[ast.Connection] = []
        parts: list[ast.Partition] = []
        hashes: list[ast.HashDecl] = []
        pipeline: list[ast.PipelineStmt] = []
        first = self.peek()
        while self.peek().kind != "EOF":
            stmt = self.statement()
            if isinstance(stmt, ast.ConstDef):
                consts.append(stmt)
            elif isinstance(stmt, ast.Connection):
                conns.append(stmt)
            elif isinstance(stmt, ast.Partition):
                parts.append(stmt)
            elif isinstance(stmt, ast.HashDecl):
                hashes.append(stmt)
            else:
                pipeline.append(stmt)
        return ast.Program(
            consts=tuple(consts),
            connections=tuple(conns),
            partitions=tuple(parts),
            hashes=tuple(hashes),
            pipeline=tuple(pipeline),
            pos=self.pos(first),
        )

    def statement(self) -> ast.Statement:
        t = self.peek()
        if t.kind == "PARTITION":
            return self.partition()
        if t.kind == "HASH":
            return self.hash_decl()
        if t.kind == "IDENT":
            return self.assignment()
        if t.kind not in ("EOF",):
            self.err(t, f"{t.text!r} is a reserved keyword and cannot start a statement")
        self.err(t, "expected a statement")

    def partition(self) -> ast.Partition:
        kw = self.next()
        stream = self.ident("stream name")
        self.expect("BY", "'BY'")
        fields = self.ident_list("field name")
        self.expect("SEMI", "';'")
        return ast.Partition(stream.text, fields, pos=self.pos(kw))

    def hash_decl(self) -> ast.HashDecl:
        kw = self.next()
        field_name = self.ident("field name")
        self.expect("WITH", "'WITH'")
        fn = self.ident("hash function name")
        self.expect("SEMI", "';'")
        return ast.HashDecl(field_name.text, fn.text, pos=self.pos(kw))

    def ident_list(self, what: str) -> tuple[str, ...]:
        out = [self.ident(what).text]
        while self.peek().kind == "COMMA":
            self.next()
            out.append(self.ident(what).text)
        return tuple(out)

    def assignment(self) -> ast.Statement:
        name = self.next()
        self.expect("EQ", "'='")
        t = self.peek()
        if t.kind == "NUMBER":
            num = self.next()
            if "." in num.text:
                self.err(num, "constant definitions take an integer")
            self.expect("SEMI", "';'")
            return ast.ConstDef(name.text, int(num.text), pos=self.pos(name))
        if t.kind == "STREAM":
            self.next()
            src = self.ident("stream name")
            self.expect("BY", "'BY'")
            keys = self.ident_list("key field")
            self.expect("SEMI", "';'")
            return ast.StreamBy(name.text, src.text, keys, pos=self.pos(name))
        if t.kind == "FOREACH":
            self.next()
            src = self.ident("stream name")
            t2 = self.peek()
            if t2.kind == "GENERATE":
                self.next()
                op = self.ident("operator name")
                self.expect("LPAREN", "'('")
                args = self.op_args()
                self.expect("RPAREN", "')'")
                self.expect("SEMI", "';'")
                return ast.ForEachGenerate(name.text, src.text, op.text, args, pos=self.pos(name))
            if t2.kind == "TRANSFORM":
                self.next()
                items = [self.transform_item()]
                while self.peek().kind == "COMMA":
                    self.next()
                    items.append(self.transform_item())
                self.expect("SEMI", "';'")
                return ast.Transform(name.text, src.text, tuple(items), pos=self.pos(name))
            self.err(t2, f"expected 'GENERATE' or 'TRANSFORM', got {t2.text!r}")
        if t.kind == "FILTER":
            self.next()
            src = self.ident("stream name")
            self.expect("BY", "'BY'")
            pred = self.expr()
            self.expect("SEMI", "';'")
            return ast.Filter(name.text, src.text, pred, pos=self.pos(name))
        if t.kind == "COLLAPSE":
            self.next()
            src = self.ident("stream name")
            self.expect("BY", "'BY'")
            kept = self.ident_list("key field")
            self.expect("FOR", "'FOR'")
            feats = self.ident_list("feature name")
            self.expect("SEMI", "';'")
            return ast.CollapseBy(name.text, src.text, kept, feats, pos=self.pos(name))
        if t.kind == "IDENT" and self.peek(1).kind == "LPAREN":
            kind = self.next()
            self.next()  # (
            host = self.expect("STRING", "a quoted host string")
            self.expect("COMMA", "','")
            port = self.expect("NUMBER", "a port number")
            if "." in port.text:
                self.err(port, "port must be an integer")
            self.expect("RPAREN", "')'")
            self.expect("SEMI", "';'")
            return ast.Connection(name.text, kind.text, host.text, int(port.text), pos=self.pos(name))
        self.err(t, f"expected a pipeline operation, constant, or connection, got {t.text!r}")

    def op_args(self) -> tuple[ast.OpArg, ...]:
        args: list[ast.OpArg] = []
        if self.peek().kind == "RPAREN":
            return tuple(args)
        args.append(self.op_arg())
        while self.peek().kind == "COMMA":
            self.next()
            args.append(self.op_arg())
        return tuple(args)

    def op_arg(self) -> ast.OpArg:
        t = self.peek()
        if t.kind == "IDENT":
            self.next()
            return ast.OpArg(t.text, None, pos=self.pos(t))
        if t.kind == "NUMBER":
            self.next()
            if "." in t.text:
                self.err(t, "operator arguments must be field names or integers")
            return ast.OpArg(None, int(t.text), pos=self.pos(t))
        self.err(t, f"expected a field name or integer argument, got {t.text!r}")

    def transform_item(self) -> ast.TransformItem:
        start = self.peek()
        e = self.expr()
        self.expect("COLON", "':' before the output label")
        label = self.ident("output label")
        return ast.TransformItem(e, label.text, pos=self.pos(start))

    # --- expressions ---

    def expr(self) -> ast.Expr:
        left = self.add()
        t = self.peek()
        if t.kind in _COMPARE:
            self.next()
            right = self.add()
            t2 = self.peek()
            if t2.kind in _COMPARE:
                self.err(t2, "comparisons cannot be chained")
            return ast.BinOp(_COMPARE[t.kind], left, right, pos=self.pos(t))
        return left

    def add(self) -> ast.Expr:
        left = self.mul()
        while self.peek().kind in _ADD:
            t = self.next()
            left = ast.BinOp(_ADD[t.kind], left, self.mul(), pos=self.pos(t))
        return left

    def mul(self) -> ast.Expr:
        left = self.atom()
        while self.peek().kind in _MUL:
            t = self.next()
            left = ast.BinOp(_MUL[t.kind], left, self.atom(), pos=self.pos(t))
        return left

    def atom(self) -> ast.Expr:
        t = self.peek()
        if t.kind == "NUMBER":
            self.next()
            return ast.Num(float(t.text), "." not in t.text, pos=self.pos(t))
        if t.kind == "LPAREN":
            self.next()
            e = self.expr()
            self.expect("RPAREN", "')'")
            return e
        if t.kind == "IDENT":
            self.next()
            if self.peek().kind == "DOT":
                self.next()
                method = self.ident("'value' or 'prev'")
                if method.text not in ("value", "prev"):
                    self.err(method, f"unknown accessor {method.text!r}; expected 'value' or 'prev'")
                self.expect("LPAREN", "'('")
                idx = self.expect("NUMBER", "an integer index")
                if "." in idx.text:
                    self.err(idx, f"{method.text}() takes an integer index")
                self.expect("RPAREN", "')'")
                return ast.Call(t.text, method.text, int(idx.text), pos=self.pos(t))
            return ast.Name(t.text, pos=self.pos(t))
        self.err(t, f"expected an expression, got {t.text if t.kind != 'EOF' else 'end of input'!r}")


def parse_program(src: str, file: str = "<string>") -> ast.Program:
    return _Parser(tokenize(src, file), file).program()
