"""
Exception hierarchy shared by every module.

Expected negative outcomes (inconsistent systems, collapse witnesses,
"no solution" verdicts) are returned as values. Exceptions are reserved for
bad input, mathematical rejection of a construction, and broken internal
invariants.
"""

from typing import Any, Optional


class LeibnizError(Exception):
    """Base error for the toolkit."""

    pass


class UsageError(LeibnizError):
    """Malformed input, dimension or field mismatch, out-of-range bounds."""

    pass


class ParseError(UsageError):
    """Error in a textual expression or JSON document."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class MathematicalRejection(LeibnizError):
    """A construction was rejected because an identity fails; carries a witness."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class LibraryInvariantError(LeibnizError):
    """An internal closure check failed; indicates a bug, not bad input."""

    pass
