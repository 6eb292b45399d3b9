"""Tokenizer.

Keywords are case-insensitive; identifiers are case-sensitive. ``//`` starts
a comment running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import Diagnostic, SalSyntaxError

KEYWORDS = frozenset(
    {
        "STREAM",
        "BY",
        "FOREACH",
        "GENERATE",
        "FILTER",
        "TRANSFORM",
        "COLLAPSE",
        "FOR",
        "PARTITION",
        "HASH",
        "WITH",
    }
)

_PUNCT = {
    ";": "SEMI",
    ",": "COMMA",
    "(": "LPAREN",
    ")": "RPAREN",
    ".": "DOT",
    ":": "COLON",
    "+": "PLUS",
    "-": "MINUS",
    "*": "STAR",
    "/": "SLASH",
}


@dataclass(frozen=True)
class Token:
    kind: str  # keyword name, punct name, IDENT, NUMBER, STRING, EOF
    text: str
    line: int
    col: int


def tokenize(src: str, file: str = "<string>") -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)

    def err(msg: str, l: int, c: int):
        raise SalSyntaxError([Diagnostic(file, l, c, "error", msg)])

    while i < n:
        ch = src[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "/" and i + 1 < n and src[i + 1] == "/":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            kind = word.upper() if word.upper() in KEYWORDS else "IDENT"
            toks.append(Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            if j < n and src[j] == "." and j + 1 < n and src[j + 1].isdigit():
                j += 1
                while j < n and src[j].isdigit():
                    j += 1
            toks.append(Token("NUMBER", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and src[j] not in '"\n':
                j += 1
            if j >= n or src[j] != '"':
                err("unterminated string literal", line, start_col)
            toks.append(Token("STRING", src[i + 1 : j], line, start_col))
            col += j - i + 1
            i = j + 1
            continue
        if ch in "><=!":
            two = src[i : i + 2]
            if two in (">=", "<=", "==", "!="):
                toks.append(Token({">=": "GE", "<=": "LE", "==": "EQEQ", "!=": "NE"}[two], two, line, start_col))
                i += 2
                col += 2
                continue
            if ch == ">":
                toks.append(Token("GT", ch, line, start_col))
            elif ch == "<":
                toks.append(Token("LT", ch, line, start_col))
            elif ch == "=":
                toks.append(Token("EQ", ch, line, start_col))
            else:
                err(f"unexpected character {ch!r}", line, start_col)
            i += 1
            col += 1
            continue
        if ch in _PUNCT:
            toks.append(Token(_PUNCT[ch], ch, line, start_col))
            i += 1
            col += 1
            continue
        err(f"unexpected character {ch!r}", line, start_col)
    toks.append(Token("EOF", "", line, col))
    return toks
