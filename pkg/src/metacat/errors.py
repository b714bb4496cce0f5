"""Exception hierarchy shared by the kernel, the surface language and the CLI."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class MetacatError(Exception):
    """Base class. ``span`` is set when the error can be traced to source text."""

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    @property
    def kind(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.span}: {self.message}"


# static errors: malformed input, never "the proof is wrong"
class StaticError(MetacatError):
    pass


class DuplicateSymbol(StaticError):
    pass


class DuplicateName(StaticError):
    pass


class ArityMismatch(StaticError):
    pass


class UnknownGenerator(StaticError):
    pass


class UnknownSymbol(StaticError):
    pass


class UnknownTheorem(StaticError):
    pass


class WrongArgCount(StaticError):
    pass


class UnboundMetavariable(StaticError):
    pass


class CyclicGraph(StaticError):
    pass


class MalformedGraph(StaticError):
    pass


class InvalidTheorem(MetacatError):
    """Raised when registering a theorem that does not check."""


class ParseError(StaticError):
    def __init__(self, message: str, span: Span, expected: tuple[str, ...] = ()):
        super().__init__(message, span)
        self.expected = expected


class EvalFailure(MetacatError):
    """A partial function was undefined on its input. ``edge`` indexes the IR edge."""

    edge: int


class MatchFailure(EvalFailure):
    def __init__(self, edge: int, expected: str, actual, where: str = ""):
        at = f"edge {edge} ({where})" if where else f"edge {edge}"
        super().__init__(f"{at}: expected {expected}(...), got {actual}")
        self.edge = edge
        self.where = where
        self.expected = expected
        self.actual = actual


class EqualityFailure(EvalFailure):
    def __init__(self, edge: int, left, right, where: str = ""):
        at = f"edge {edge} ({where})" if where else f"edge {edge}"
        super().__init__(f"{at}: {left} != {right}")
        self.edge = edge
        self.where = where
        self.left = left
        self.right = right
