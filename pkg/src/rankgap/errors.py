"""Exception types shared across the package.

The split mirrors the CLI exit codes: bad input or violated preconditions
(exit 2), refused work that would exceed an explicit budget (exit 3), and
violations of facts the algorithms are entitled to rely on (exit 4).  The
last kind is never caught and repaired; it means a bug, so it surfaces.
"""

from __future__ import annotations

__all__ = [
    "PreconditionError",
    "ParseError",
    "BudgetExceededError",
    "InternalConsistencyError",
]


class PreconditionError(ValueError):
    """An argument violates a documented precondition."""


class ParseError(PreconditionError):
    """Malformed input text.  Carries a line number when one is known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceededError(RuntimeError):
    """The requested computation would exceed the stated budget.

    Raised instead of silently truncating an enumeration.
    """


class InternalConsistencyError(RuntimeError):
    """A property that is guaranteed by construction failed to hold."""
