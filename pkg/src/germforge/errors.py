"""Exception types shared across the library."""

from __future__ import annotations


class GermforgeError(Exception):
    """Base class of all library errors."""


class StructureError(GermforgeError):
    """Operands live over mismatched rings, fields or truncations."""


class DomainError(GermforgeError):
    """Input violates a mathematical precondition (e.g. substitution by a
    jet with nonzero constant term)."""


class UnsupportedFeatureError(GermforgeError):
    """A combination the library explicitly does not support (e.g. filtered
    membership for L/C tags over a singular target)."""


class InternalCheckError(GermforgeError):
    """An internal consistency re-verification failed; indicates a bug."""


class WorkspaceParseError(GermforgeError):
    """Parse error in a workspace file, with position information."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
