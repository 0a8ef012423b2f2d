"""Exception types shared across the library."""

from __future__ import annotations


class BfError(Exception):
    """Base class for every error this library raises on purpose."""


class ValidationError(BfError, ValueError):
    """An object failed its construction-time checks."""


class FrameMismatchError(BfError, ValueError):
    """An operation mixed subsets or mass assignments from different frames."""


class TotalConflictError(BfError, ArithmeticError):
    """Dempster combination is undefined: the operands are fully conflicting.

    Attributes:
        k: the renormalization constant that fell at or below the cutoff.
    """

    def __init__(self, message: str, k: float) -> None:
        super().__init__(message)
        self.k = k


class StaleQueryError(BfError):
    """A response was recorded against a query that is no longer pending."""


class InconsistentResponsesError(BfError):
    """A recorded preference response contradicts an earlier one.

    Attributes:
        entries: the transcript entries that cannot hold at the same time.
    """

    def __init__(self, message: str, entries: tuple = ()) -> None:
        super().__init__(message)
        self.entries = entries
