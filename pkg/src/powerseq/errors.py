"""Shared exception types."""

__all__ = [
    "PowerseqError",
    "DimensionMismatchError",
    "PrecisionError",
    "ConstraintError",
    "StructureError",
    "SplitUndefinedError",
]


class PowerseqError(Exception):
    """Base class for every error this package raises on purpose."""


class DimensionMismatchError(PowerseqError, ValueError):
    """Operand shape or basis index does not match the operator's space."""


class PrecisionError(PowerseqError, ValueError):
    """Requested arithmetic mode cannot represent the stored scalars."""


class ConstraintError(PowerseqError, ValueError):
    """A structural invariant of a construction is violated."""


class StructureError(PowerseqError, RuntimeError):
    """A rule lacks the structure needed for an exact evaluation.

    ``partial`` carries whatever safe partial answer exists (for power norms,
    a finite-scan lower bound).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SplitUndefinedError(PowerseqError, RuntimeError):
    """No identity-part splitting exists for the given operator."""
