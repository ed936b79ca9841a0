"""Exception hierarchy.

Every error carries a short ``category`` used by the CLI when printing
``error: <category>: <detail>``.
"""

from __future__ import annotations


class DdiError(Exception):
    category = "error"


class ParseError(DdiError):
    category = "parse"

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class UnknownIdentifier(ParseError):
    category = "unknown-identifier"


class UnsupportedConstruct(ParseError):
    category = "unsupported"


class UnboundPointer(DdiError):
    category = "unbound-pointer"


class SymbolicBound(DdiError):
    category = "symbolic-bound"


class UnrollCapExceeded(DdiError):
    category = "unroll-cap"


class NonAffineSubscript(DdiError):
    category = "non-affine-subscript"


class PathExplosion(DdiError):
    category = "path-explosion"


class ExecutionError(DdiError):
    category = "runtime"


class DivisionByZero(ExecutionError):
    category = "division-by-zero"


class InputExhausted(ExecutionError):
    category = "input-exhausted"


class ExecutionLimit(ExecutionError):
    category = "step-limit"
