"""Exception hierarchy shared by all rdca modules."""
from __future__ import annotations


class RDCAError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(RDCAError, ValueError):
    pass


class CapacityMismatch(RDCAError, ValueError):
    pass


class InvariantViolation(RDCAError, RuntimeError):
    pass


class NotBistable(RDCAError, ValueError):
    """A reaction table violates one of the bistability clauses.

    ``clause`` names the violated condition (``"fixed-point"``,
    ``"monotonicity"``, ``"sign"`` or ``"range"``) and ``u`` the first
    offending state, when there is one.
    """

    def __init__(self, message: str, clause: str, u: int | None = None):
        super().__init__(message)
        self.clause = clause
        self.u = u


class FastSpeedUnsupported(RDCAError, ValueError):
    """Monotone fronts cannot move faster than one cell per step."""


class SearchLimitExceeded(RDCAError):
    """A bounded search stopped early; ``partial`` holds what was found."""

    def __init__(self, message: str, partial: list | None = None):
        super().__init__(message)
        self.partial = list(partial or [])


class BranchLimitExceeded(SearchLimitExceeded):
    pass


class LengthLimitExceeded(SearchLimitExceeded):
    pass


class WindowTooSmall(RDCAError, ValueError):
    pass
