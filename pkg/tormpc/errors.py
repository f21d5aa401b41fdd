"""Exceptions raised by the library."""
import typing as t


class DimensionError(ValueError):
    """Operand shapes do not fit the operation."""


class EmptySetError(ValueError):
    """A polytope describes the empty set."""


class UnboundedSetError(ValueError):
    """A set that must be bounded is not."""


class ScenarioError(ValueError):
    """A scenario cannot be used for closed-loop control."""


class LpNumericFailure(RuntimeError):
    """The LP backend failed numerically or returned a point that does not verify."""


class TheoremViolation(RuntimeError):
    """A shrinking-feasibility or convergence guarantee was broken."""

    def __init__(self, message: str, *, seed: t.Optional[int] = None, step: t.Optional[int] = None):
        super().__init__(message)
        self.seed = seed
        self.step = step

    def __str__(self) -> str:
        details = []
        if self.seed is not None:
            details.append(f"seed={self.seed}")
        if self.step is not None:
            details.append(f"k={self.step}")

        message = super().__str__()
        return f"{message} ({', '.join(details)})" if details else message
