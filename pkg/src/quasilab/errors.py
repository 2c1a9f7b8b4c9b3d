"""Shared exception types."""

from __future__ import annotations


class QuasilabError(Exception):
    """Base class for all quasilab errors."""


class ParseError(QuasilabError):
    """Lexical or syntax error in a DSL input, with a source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class KindConflictError(QuasilabError):
    """Two kinds share a name but disagree on attributes: malformed universe."""


class UnknownKindError(QuasilabError):
    """A kind name was used without being declared in the universe."""


class BoundExceededError(QuasilabError):
    """A combinatorial size guard was exceeded (powerset, ur-universe, ...)."""


class EvaluationError(QuasilabError):
    """Formula evaluation failed: unbound variable or signature mismatch."""
