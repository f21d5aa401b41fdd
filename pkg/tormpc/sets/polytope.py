"""H-representation polytopes {x : Hx ≤ b}."""
import typing as t
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from tormpc.errors import DimensionError, EmptySetError, UnboundedSetError
from tormpc.lp import LpProblem, lp_solve
from .interval import _as_matrix, _frozen

# Time-indexed constraint sets: a fixed polytope or a callable k -> polytope.
ConstraintSchedule = t.Union["Polytope", t.Callable[[int], "Polytope"]]


@dataclass(frozen=True, eq=False)
class Polytope:
    h: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        h = _as_matrix(self.h)
        b = np.asarray(self.b, dtype=float).ravel()
        if h.shape[0] != b.size:
            raise DimensionError(f"H has {h.shape[0]} rows but b has {b.size} entries.")

        object.__setattr__(self, "h", _frozen(h))
        object.__setattr__(self, "b", _frozen(b))

        if not self._feasible():
            raise EmptySetError("Polytope {x : Hx <= b} is empty.")

    @classmethod
    def box(cls, lower: t.Any, upper: t.Any) -> "Polytope":
        lower = np.asarray(lower, dtype=float).ravel()
        upper = np.asarray(upper, dtype=float).ravel()
        eye = np.eye(lower.size)
        return cls(np.vstack([eye, -eye]), np.concatenate([upper, -lower]))

    @property
    def dimension(self) -> int:
        return self.h.shape[1]

    def _feasible(self) -> bool:
        result = lp_solve(LpProblem(
            c=np.zeros(self.dimension),
            a_ub=sparse.csr_matrix(self.h),
            b_ub=self.b,
        ))
        return result.optimal

    def contains(self, x: t.Any, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float).ravel()
        return bool(np.all(self.h @ x <= self.b + tol))

    def violation(self, x: t.Any) -> float:
        """Largest amount by which ``x`` breaks a row, zero when inside."""
        x = np.asarray(x, dtype=float).ravel()
        return float(max(0.0, np.max(self.h @ x - self.b, initial=0.0)))

    def support(self, direction: t.Any) -> float:
        """max d'x over the polytope."""
        direction = np.asarray(direction, dtype=float).ravel()
        result = lp_solve(LpProblem(
            c=-direction,
            a_ub=sparse.csr_matrix(self.h),
            b_ub=self.b,
        ))
        if not result.optimal:
            raise UnboundedSetError(f"Polytope is unbounded along {direction.tolist()}.")
        return float(direction @ result.x)

    def coordinate_extent(self) -> np.ndarray:
        """max |x_i| over the polytope for every coordinate i."""
        extent = np.empty(self.dimension)
        for i, axis in enumerate(np.eye(self.dimension)):
            extent[i] = max(abs(self.support(axis)), abs(self.support(-axis)))
        return extent


def polytope_at(schedule: ConstraintSchedule, k: int) -> Polytope:
    if isinstance(schedule, Polytope):
        return schedule
    return schedule(k)
