"""
The tightened time-optimal problem at time k.

For a fixed horizon N the problem is a feasibility LP over the nominal
trajectory z(0..N), the nominal inputs v(0..N-1), the absolute-value
variables s(0..N-1) of the tube and the coefficients β of the terminal
zonotope. The minimum horizon is found by an ascending scan over N.
"""
import logging
import typing as t
from collections import namedtuple
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from tormpc.bounds import BoundsTable
from tormpc.constants import N_MAX, VERIFY_TOL
from tormpc.errors import DimensionError, LpNumericFailure
from tormpc.lp import LpProblem, LpStatus, RowBuilder, lp_solve
from tormpc.sets import ConstraintSchedule, Polytope, Zonotope, polytope_at, zonotope_contains
from tormpc.tube import INPUT, STATE, ErrorTube, Layout, abs_epigraph_rows, tightened_rows

logger = logging.getLogger(__name__)

__all__ = [
    "OcpSpec",
    "OcpSolution",
    "OcpStatus",
    "Verification",
    "Layout",
    "tightened_rows",
    "terminal_rows",
    "solve_fixed_horizon",
    "solve_min_time",
    "verify_solution",
    "propagate_error",
]

Verification = namedtuple("Verification", ("feasible", "max_residual", "failures"))


class OcpStatus(Enum):
    SOLVED = "solved"
    INFEASIBLE = "infeasible"
    INFEASIBLE_AT_ALL_HORIZONS = "infeasible-at-all-horizons"


@dataclass(frozen=True, eq=False)
class OcpSpec:
    a_hat: np.ndarray
    b_hat: np.ndarray
    k_gain: np.ndarray
    tube: ErrorTube
    state_constraints: ConstraintSchedule
    input_constraints: ConstraintSchedule
    x0: np.ndarray
    terminal_set: Zonotope
    time_offset: int = 0
    n_max: int = N_MAX
    tie_break: bool = False

    def __post_init__(self) -> None:
        a_hat = np.asarray(self.a_hat, dtype=float)
        b_hat = np.asarray(self.b_hat, dtype=float)
        x0 = np.asarray(self.x0, dtype=float).ravel()
        n, m = b_hat.shape
        if a_hat.shape != (n, n) or x0.size != n:
            raise DimensionError(f"A {a_hat.shape}, B {b_hat.shape} and x0 ({x0.size}) disagree.")
        if np.shape(self.k_gain) != (m, n):
            raise DimensionError(f"K has shape {np.shape(self.k_gain)}, expected {(m, n)}.")
        if self.terminal_set.dimension != n:
            raise DimensionError(
                f"Terminal set has dimension {self.terminal_set.dimension}, expected {n}."
            )
        if not 1 <= self.n_max <= self.tube.n_max:
            raise ValueError(f"n_max={self.n_max} must lie in 1..{self.tube.n_max}.")

        object.__setattr__(self, "a_hat", a_hat)
        object.__setattr__(self, "b_hat", b_hat)
        object.__setattr__(self, "k_gain", np.asarray(self.k_gain, dtype=float))
        object.__setattr__(self, "x0", x0)

    @property
    def n(self) -> int:
        return self.b_hat.shape[0]

    @property
    def m(self) -> int:
        return self.b_hat.shape[1]

    @property
    def bounds(self) -> t.Optional[BoundsTable]:
        """Bounds table behind the tube, when the tube has one."""
        return getattr(self.tube, "table", None)


@dataclass(frozen=True, eq=False)
class OcpSolution:
    status: OcpStatus
    horizon: int = 0
    v_seq: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    z_seq: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    beta: np.ndarray = field(default_factory=lambda: np.zeros(0))
    solve_ms: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status is OcpStatus.SOLVED

    @property
    def xi_seq(self) -> np.ndarray:
        """Rows [z(j); v(j)] for j < N."""
        return np.hstack([self.z_seq[:-1], self.v_seq])


def terminal_rows(rows: RowBuilder, layout: Layout, terminal_set: Zonotope) -> None:
    """z(N) = c + Gβ; the β columns carry the bounds -1 <= β <= 1."""
    if terminal_set.dimension != layout.n:
        raise DimensionError(
            f"Terminal set has dimension {terminal_set.dimension}, expected {layout.n}."
        )
    if terminal_set.n_generators != layout.n_beta:
        raise DimensionError("Layout reserves a different number of terminal coefficients.")

    rows.add_block(layout.z(layout.horizon), np.eye(layout.n), rhs=terminal_set.center)
    if layout.n_beta:
        rows.add_block(layout.beta, -terminal_set.generators)


def _build_problem(spec: OcpSpec, n: int) -> tuple[LpProblem, Layout]:
    layout = Layout(
        n=spec.n,
        m=spec.m,
        horizon=n,
        n_beta=spec.terminal_set.n_generators,
        with_abs=spec.tube.uses_abs_vars,
    )
    eq = RowBuilder(layout.n_vars)
    ub = RowBuilder(layout.n_vars)

    eq.add_block(layout.z(0), np.eye(spec.n), rhs=spec.x0)
    for j in range(n):
        eq.add_block(layout.z(j + 1), np.eye(spec.n), rhs=np.zeros(spec.n))
        eq.add_block(layout.z(j), -spec.a_hat)
        eq.add_block(layout.v(j), -spec.b_hat)
    terminal_rows(eq, layout, spec.terminal_set)

    for j in range(n):
        k = spec.time_offset + j
        spec.tube.add_tightening(
            ub, layout, j, polytope_at(spec.state_constraints, k), STATE, spec.k_gain
        )
        spec.tube.add_tightening(
            ub, layout, j, polytope_at(spec.input_constraints, k), INPUT, spec.k_gain
        )
    if layout.with_abs:
        abs_epigraph_rows(ub, layout)

    c = np.zeros(layout.n_vars)
    if spec.tie_break and layout.with_abs:
        c[layout.s(0, n)] = 1.0

    a_ub, b_ub = ub.build()
    a_eq, b_eq = eq.build()
    problem = LpProblem(
        c=c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq, bounds=layout.bounds()
    )
    return problem, layout


def solve_fixed_horizon(spec: OcpSpec, n: int) -> OcpSolution:
    """
    Solve the tightened problem for the horizon ``n``.

    Infeasibility is returned as a status. A backend failure, or an optimum that
    does not pass the independent re-check, raises ``LpNumericFailure``.
    """
    if not 1 <= n <= spec.n_max:
        raise ValueError(f"Horizon {n} must lie in 1..{spec.n_max}.")

    problem, layout = _build_problem(spec, n)
    result = lp_solve(problem)

    if result.status is LpStatus.INFEASIBLE:
        return OcpSolution(status=OcpStatus.INFEASIBLE, horizon=n, solve_ms=result.solve_ms)
    if result.status is LpStatus.NUMERIC_FAILURE:
        raise LpNumericFailure(f"Horizon {n}: {result.message}")

    x = result.x
    solution = OcpSolution(
        status=OcpStatus.SOLVED,
        horizon=n,
        z_seq=x[:layout.z(n).stop].reshape(n + 1, spec.n),
        v_seq=x[layout.v(0).start:layout.v(n - 1).stop].reshape(n, spec.m),
        beta=x[layout.beta],
        solve_ms=result.solve_ms,
    )

    check = verify_solution(spec, solution)
    if not check.feasible:
        raise LpNumericFailure(
            f"Horizon {n}: solution fails re-verification "
            f"(residual {check.max_residual:.3g}: {', '.join(check.failures)})"
        )
    return solution


def solve_min_time(
        spec: OcpSpec,
        lower: int = 1,
        upper: t.Optional[int] = None
) -> OcpSolution:
    """Smallest feasible horizon in lower..upper by ascending scan."""
    upper = spec.n_max if upper is None else min(upper, spec.n_max)
    total_ms = 0.0

    for n in range(max(lower, 1), upper + 1):
        try:
            solution = solve_fixed_horizon(spec, n)
        except LpNumericFailure as error:
            logger.warning("Treating horizon %d as infeasible: %s", n, error)
            continue

        total_ms += solution.solve_ms
        if solution.solved:
            logger.debug("Minimum horizon %d found in %.1f ms", n, total_ms)
            return replace(solution, solve_ms=total_ms)

    return OcpSolution(status=OcpStatus.INFEASIBLE_AT_ALL_HORIZONS, solve_ms=total_ms)


def verify_solution(
        spec: OcpSpec,
        solution: OcpSolution,
        tol: float = VERIFY_TOL
) -> Verification:
    """Re-check every constraint of ``spec`` at ``solution`` by direct evaluation."""
    return verify_trajectory(spec, solution.z_seq, solution.v_seq, tol)


def verify_trajectory(
        spec: OcpSpec,
        z_seq: np.ndarray,
        v_seq: np.ndarray,
        tol: float = VERIFY_TOL
) -> Verification:
    z_seq = np.asarray(z_seq, dtype=float)
    v_seq = np.asarray(v_seq, dtype=float)
    n = v_seq.shape[0]
    if z_seq.shape != (n + 1, spec.n) or v_seq.shape != (n, spec.m):
        raise DimensionError(f"Trajectory shapes {z_seq.shape} and {v_seq.shape} disagree.")

    scale = max(1.0, float(np.max(np.abs(z_seq), initial=0.0)))
    limit = tol * scale
    residuals: dict[str, float] = {}

    residuals["initial state"] = float(np.max(np.abs(z_seq[0] - spec.x0)))
    if n:
        step = z_seq[1:] - z_seq[:-1] @ spec.a_hat.T - v_seq @ spec.b_hat.T
        residuals["dynamics"] = float(np.max(np.abs(step)))

    xi = np.hstack([z_seq[:-1], v_seq])
    state_excess = input_excess = 0.0
    for j in range(n):
        k = spec.time_offset + j
        radius = spec.tube.radius(j, xi)
        state_excess = max(state_excess, _tightened_excess(
            spec, polytope_at(spec.state_constraints, k), z_seq[j], STATE, radius
        ))
        input_excess = max(input_excess, _tightened_excess(
            spec, polytope_at(spec.input_constraints, k), v_seq[j], INPUT, radius
        ))
    residuals["state constraints"] = state_excess
    residuals["input constraints"] = input_excess

    if not zonotope_contains(spec.terminal_set, z_seq[-1], tol=limit):
        residuals["terminal set"] = np.inf

    failures = [name for name, value in residuals.items() if value > limit]
    return Verification(
        feasible=not failures,
        max_residual=max(residuals.values()),
        failures=failures,
    )


def _tightened_excess(
        spec: OcpSpec,
        polytope: Polytope,
        point: np.ndarray,
        which: str,
        radius: np.ndarray
) -> float:
    """Largest amount by which the tightened rows are broken at ``point``."""
    spread = spec.tube.spread(polytope, which, spec.k_gain)
    return float(np.max(polytope.h @ point + spread @ radius - polytope.b))


def propagate_error(
        spec: OcpSpec,
        solution: OcpSolution,
        a_true: np.ndarray,
        b_true: np.ndarray
) -> np.ndarray:
    """
    Prediction error e(0..N) of the plant (A, B) driven by u = v + K e.

    e(0) = 0 and e(j+1) = (A + BK) e(j) + (A - Â) z(j) + (B - B̂) v(j).
    """
    a_true = np.asarray(a_true, dtype=float)
    b_true = np.asarray(b_true, dtype=float)
    a_k = a_true + b_true @ spec.k_gain
    a_delta = a_true - spec.a_hat
    b_delta = b_true - spec.b_hat

    errors = np.zeros_like(solution.z_seq)
    for j in range(solution.horizon):
        errors[j + 1] = (
            a_k @ errors[j] + a_delta @ solution.z_seq[j] + b_delta @ solution.v_seq[j]
        )
    return errors
