"""Error types shared across the toolchain.

Diagnostics render as ``file:line:col: severity: message`` so editors and
test harnesses can jump to the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    col: int
    severity: str  # "error" or "warning"
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}: {self.severity}: {self.message}"


class SalError(Exception):
    """Base class; carries the diagnostics that caused the failure."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


class SalSyntaxError(SalError):
    """Lexical or syntactic failure. CLI exit code 1."""


class SalSemanticError(SalError):
    """Validation failure on a syntactically well-formed program. CLI exit code 2."""


class NotReady(Exception):
    """A sketch or buffer has not seen enough items to answer a query."""
