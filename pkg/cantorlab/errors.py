from __future__ import annotations

from typing import Any, List, Optional


class CantorlabError(Exception):
    """Base error; `exit_code` is what the CLI exits with."""

    exit_code = 1


class UsageError(CantorlabError, ValueError):
    exit_code = 2


class MalformedInputError(CantorlabError, ValueError):
    exit_code = 2


class PreconditionError(CantorlabError, ValueError):
    exit_code = 3


class NoPredecessorError(PreconditionError):
    """Raised for ord_pred at a limit position or at (0,0)."""


class LimitCarryError(PreconditionError):
    """Raised when a ⊕ carry would have to pass through a limit position."""


class InvalidIntervalError(PreconditionError):
    pass


class NonRepeatingError(PreconditionError):
    """A schedule repeats a target or a deleted stem."""


class BudgetExceededError(CantorlabError, RuntimeError):
    exit_code = 4

    def __init__(self, message: str, trace: Optional[List[Any]] = None) -> None:
        super().__init__(message)
        self.trace = trace or []


class InvariantViolationError(CantorlabError, RuntimeError):
    exit_code = 5


class MetricAxiomViolation(InvariantViolationError):
    pass
