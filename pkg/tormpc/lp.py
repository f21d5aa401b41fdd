"""
Linear-program contract shared by every solver call in the package.

Problems are stated as

    min c'x  s.t.  A_ub x <= b_ub,  A_eq x == b_eq,  lo <= x <= hi

and handed to the HiGHS backend of ``scipy.optimize.linprog``.
"""
import logging
import time
import typing as t
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from tormpc.constants import LP_FEASIBILITY_TOL
from tormpc.errors import DimensionError

logger = logging.getLogger(__name__)

Bound = tuple[t.Optional[float], t.Optional[float]]


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERIC_FAILURE = "numeric-failure"


# scipy.optimize.linprog status codes
_STATUS_MAP = {
    0: LpStatus.OPTIMAL,
    2: LpStatus.INFEASIBLE,
}


@dataclass(frozen=True, eq=False)
class LpProblem:
    c: np.ndarray
    a_ub: t.Optional[sparse.spmatrix] = None
    b_ub: t.Optional[np.ndarray] = None
    a_eq: t.Optional[sparse.spmatrix] = None
    b_eq: t.Optional[np.ndarray] = None
    bounds: list[Bound] = field(default_factory=list)

    def __post_init__(self) -> None:
        n_vars = self.n_vars
        for name, matrix, rhs in (("ub", self.a_ub, self.b_ub), ("eq", self.a_eq, self.b_eq)):
            if matrix is None:
                continue
            if matrix.shape[1] != n_vars:
                raise DimensionError(
                    f"A_{name} has {matrix.shape[1]} columns, expected {n_vars}."
                )
            if rhs is None or len(rhs) != matrix.shape[0]:
                raise DimensionError(f"b_{name} does not match the rows of A_{name}.")

        if self.bounds and len(self.bounds) != n_vars:
            raise DimensionError(f"Got {len(self.bounds)} bounds for {n_vars} variables.")

    @property
    def n_vars(self) -> int:
        return len(self.c)


@dataclass(frozen=True, eq=False)
class LpResult:
    status: LpStatus
    x: t.Optional[np.ndarray]
    message: str = ""
    solve_ms: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _run_highs(problem: LpProblem, method: str) -> t.Any:
    return linprog(
        problem.c,
        A_ub=problem.a_ub,
        b_ub=problem.b_ub,
        A_eq=problem.a_eq,
        b_eq=problem.b_eq,
        bounds=problem.bounds or (None, None),
        method=method,
        options={
            "primal_feasibility_tolerance": LP_FEASIBILITY_TOL,
            "dual_feasibility_tolerance": LP_FEASIBILITY_TOL,
        },
    )


def lp_solve(problem: LpProblem) -> LpResult:
    """
    Solve ``problem``; infeasibility is a status, never an exception.

    When the default HiGHS solver gives up (status 4, typically at infeasible
    horizons), the problem is solved once more with the interior-point method
    before a numeric failure is reported.
    """
    start = time.perf_counter()
    result = _run_highs(problem, "highs")
    status = _STATUS_MAP.get(result.status, LpStatus.NUMERIC_FAILURE)
    if status is LpStatus.NUMERIC_FAILURE:
        logger.debug("HiGHS returned status %d (%s), retrying with highs-ipm",
                     result.status, result.message)
        result = _run_highs(problem, "highs-ipm")
        status = _STATUS_MAP.get(result.status, LpStatus.NUMERIC_FAILURE)
    solve_ms = (time.perf_counter() - start) * 1e3

    if status is LpStatus.NUMERIC_FAILURE:
        logger.warning("LP backend failed (status %d): %s", result.status, result.message)

    logger.debug(
        "LP with %d variables solved in %.1f ms: %s", problem.n_vars, solve_ms, status.value
    )

    x = np.asarray(result.x) if status is LpStatus.OPTIMAL else None
    return LpResult(status=status, x=x, message=result.message, solve_ms=solve_ms)


class RowBuilder:
    """Accumulates sparse constraint rows as COO triplets."""

    def __init__(self, n_vars: int):
        self.n_vars = n_vars
        self._rows: list[int] = []
        self._cols: list[int] = []
        self._vals: list[float] = []
        self._rhs: list[float] = []

    def __len__(self) -> int:
        return len(self._rhs)

    def add_block(self, columns: t.Union[slice, np.ndarray], block: np.ndarray,
                  rhs: t.Optional[np.ndarray] = None) -> None:
        """
        Add ``block`` (r x len(columns)) at ``columns``.

        With ``rhs`` the block opens ``r`` new rows, otherwise it is added onto
        the last ``r`` rows already opened.
        """
        block = np.atleast_2d(np.asarray(block, dtype=float))
        cols = np.arange(self.n_vars)[columns] if isinstance(columns, slice) else columns
        if block.shape[1] != len(cols):
            raise DimensionError(
                f"Block has {block.shape[1]} columns but {len(cols)} were addressed."
            )

        if rhs is not None:
            first_row = len(self._rhs)
            self._rhs.extend(np.broadcast_to(np.asarray(rhs, dtype=float), block.shape[0]))
        else:
            first_row = len(self._rhs) - block.shape[0]
            if first_row < 0:
                raise DimensionError("No open rows to add the block onto.")

        rows, local_cols = np.nonzero(block)
        self._rows.extend((rows + first_row).tolist())
        self._cols.extend(cols[local_cols].tolist())
        self._vals.extend(block[rows, local_cols].tolist())

    def build(self) -> tuple[t.Optional[sparse.csr_matrix], t.Optional[np.ndarray]]:
        if not self._rhs:
            return None, None

        matrix = sparse.coo_matrix(
            (self._vals, (self._rows, self._cols)), shape=(len(self._rhs), self.n_vars)
        )
        return matrix.tocsr(), np.asarray(self._rhs)
