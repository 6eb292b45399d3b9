from .ast import Program
from .parser import parse_program
from .pretty import pretty
from .validate import TypedProgram, validate

__all__ = ["Program", "TypedProgram", "parse_program", "pretty", "validate"]
