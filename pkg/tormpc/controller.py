"""
Closed-loop time-optimal robust MPC.

Every step first tries the problem with the terminal equality z(N) = 0 at a
horizon one shorter than the previous optimum. When that fails, the terminal
set is enlarged by the mismatch the previous step could have caused and the
problem is solved again; feasibility at that horizon is guaranteed, so a
failure there is raised as a ``TheoremViolation``.
"""
import logging
import typing as t
from dataclasses import dataclass, field, replace

import numpy as np

from tormpc.constants import Branch, RunStatus
from tormpc.errors import LpNumericFailure, TheoremViolation
from tormpc.ocp import OcpSolution, OcpSpec, OcpStatus, solve_fixed_horizon, solve_min_time
from tormpc.sets import Zonotope, box_to_zonotope, zonotope_affine
from tormpc.tube import ErrorTube

logger = logging.getLogger(__name__)

Plant = tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True, eq=False)
class ControllerState:
    template: OcpSpec
    k: int
    n_prev: int
    terminal_set: Zonotope
    t_l: int
    x_prev: np.ndarray
    u_prev: np.ndarray
    solution: OcpSolution
    branch: Branch


@dataclass(eq=False)
class RunLog:
    x0: np.ndarray
    plant: Plant
    seed: t.Optional[int] = None
    status: RunStatus = RunStatus.CONVERGED
    x_hist: list[np.ndarray] = field(default_factory=list)
    u_hist: list[np.ndarray] = field(default_factory=list)
    n_star_hist: list[int] = field(default_factory=list)
    branch_hist: list[Branch] = field(default_factory=list)
    solve_ms_hist: list[float] = field(default_factory=list)
    delta_hist: list[np.ndarray] = field(default_factory=list)
    terminal_generators_hist: list[int] = field(default_factory=list)
    terminal_sets: list[Zonotope] = field(default_factory=list)
    solutions: list[OcpSolution] = field(default_factory=list)
    t_l: int = 0
    t_c: int = 0

    @property
    def converged(self) -> bool:
        return self.status is RunStatus.CONVERGED

    @property
    def states(self) -> np.ndarray:
        """x(0..T_c) as rows."""
        return np.asarray(self.x_hist)

    @property
    def inputs(self) -> np.ndarray:
        return np.asarray(self.u_hist)

    @property
    def n_star_initial(self) -> t.Optional[int]:
        return self.n_star_hist[0] if self.n_star_hist else None

    def record(self, x: np.ndarray, state: ControllerState) -> None:
        self.x_hist.append(x)
        self.u_hist.append(state.u_prev)
        self.n_star_hist.append(state.n_prev)
        self.branch_hist.append(state.branch)
        self.solve_ms_hist.append(state.solution.solve_ms)
        self.terminal_generators_hist.append(state.terminal_set.n_generators)
        self.terminal_sets.append(state.terminal_set)
        self.solutions.append(state.solution)


def terminal_increment(ahat_k: np.ndarray, radius: np.ndarray, horizon: int) -> Zonotope:
    """Â_K^(horizon-1) applied to the zero-centered box of the given radius."""
    if horizon < 1:
        raise ValueError("Horizon must be at least 1.")

    power = np.linalg.matrix_power(np.asarray(ahat_k, dtype=float), horizon - 1)
    image = zonotope_affine(power, box_to_zonotope(radius))
    kept = np.any(image.generators, axis=0)
    return Zonotope(image.center, image.generators[:, kept])


def enlarge_terminal_set(
        z_f: Zonotope,
        ahat_k: np.ndarray,
        delta_s: np.ndarray,
        n_prev: int,
        x_prev: np.ndarray,
        u_prev: np.ndarray
) -> Zonotope:
    """z_f ⊕ Â_K^(n_prev-1) box(Δ_S |[x_prev; u_prev]|)."""
    xi = np.concatenate([np.ravel(x_prev), np.ravel(u_prev)])
    radius = np.asarray(delta_s, dtype=float) @ np.abs(xi)
    return z_f + terminal_increment(ahat_k, radius, n_prev)


def _enlarge_with_tube(state: ControllerState) -> Zonotope:
    tube = state.template.tube
    xi = np.concatenate([state.x_prev, state.u_prev])
    return state.terminal_set + terminal_increment(
        tube.ahat_k, tube.disturbance_radius(xi), state.n_prev
    )


def _solve_or_infeasible(spec: OcpSpec, n: int) -> OcpSolution:
    try:
        return solve_fixed_horizon(spec, n)
    except LpNumericFailure as error:
        logger.warning("Treating horizon %d as infeasible: %s", n, error)
        return OcpSolution(status=OcpStatus.INFEASIBLE, horizon=n)


def shrink_search(spec: OcpSpec, upper: int) -> OcpSolution:
    """
    Solve at ``upper`` and, while feasible, keep probing one step shorter.

    The returned solution carries the time of every LP solved on the way.
    """
    best = _solve_or_infeasible(spec, upper)
    total_ms = best.solve_ms
    if best.solved:
        for n in range(upper - 1, 0, -1):
            candidate = _solve_or_infeasible(spec, n)
            total_ms += candidate.solve_ms
            if not candidate.solved:
                break
            best = candidate

    return replace(best, solve_ms=total_ms)


def initialize(template: OcpSpec, x0: np.ndarray) -> t.Optional[ControllerState]:
    """Solve the initial problem with z(N) = 0; None when it is infeasible."""
    origin = Zonotope.origin(template.n)
    spec = replace(template, x0=x0, terminal_set=origin, time_offset=0)
    solution = solve_min_time(spec)
    if not solution.solved:
        logger.info("Initial problem infeasible up to N=%d", spec.n_max)
        return None

    logger.info("k=0: N*=%d", solution.horizon)
    return ControllerState(
        template=template,
        k=0,
        n_prev=solution.horizon,
        terminal_set=origin,
        t_l=0,
        x_prev=spec.x0,
        u_prev=solution.v_seq[0],
        solution=solution,
        branch=Branch.INITIAL,
    )


def controller_step(
        state: ControllerState,
        x_k: np.ndarray,
        seed: t.Optional[int] = None
) -> tuple[np.ndarray, ControllerState]:
    """Advance the controller to the measured state ``x_k`` and return u(k)."""
    k = state.k + 1
    upper = state.n_prev - 1
    if upper < 1:
        raise ValueError("The controller has already converged.")

    origin = Zonotope.origin(state.template.n)
    spec = replace(state.template, x0=x_k, terminal_set=origin, time_offset=k)
    solution = shrink_search(spec, upper)

    if solution.solved:
        terminal_set, t_l, branch = origin, k, Branch.RESET
    else:
        terminal_set = _enlarge_with_tube(state)
        first_ms = solution.solve_ms
        solution = shrink_search(replace(spec, terminal_set=terminal_set), upper)
        if not solution.solved:
            raise TheoremViolation(
                f"Problem with the enlarged terminal set is infeasible at N={upper}",
                seed=seed,
                step=k,
            )
        solution = replace(solution, solve_ms=solution.solve_ms + first_ms)
        t_l, branch = state.t_l, Branch.ENLARGE

    logger.info(
        "k=%d: N*=%d (%s, %d terminal generators)",
        k, solution.horizon, branch.value, terminal_set.n_generators,
    )
    u_k = solution.v_seq[0]
    new_state = ControllerState(
        template=state.template,
        k=k,
        n_prev=solution.horizon,
        terminal_set=terminal_set,
        t_l=t_l,
        x_prev=spec.x0,
        u_prev=u_k,
        solution=solution,
        branch=branch,
    )
    return u_k, new_state


def run_closed_loop(
        template: OcpSpec,
        plant: Plant,
        x0: np.ndarray,
        seed: t.Optional[int] = None
) -> RunLog:
    """
    Drive the plant x(k+1) = A x(k) + B u(k) from ``x0`` until the horizon reaches one.

    ``template`` supplies the nominal model, the tube and the constraints; its
    initial state and terminal set are replaced per step.
    """
    a_true, b_true = (np.asarray(matrix, dtype=float) for matrix in plant)
    x = np.asarray(x0, dtype=float).ravel()
    log = RunLog(x0=x, plant=(a_true, b_true), seed=seed)

    state = initialize(template, x)
    if state is None:
        log.status = RunStatus.OUT_OF_ROA
        return log

    log.record(x, state)
    while True:
        u = state.u_prev
        x_next = a_true @ x + b_true @ u
        log.delta_hist.append(x_next - template.a_hat @ x - template.b_hat @ u)
        x = x_next
        if state.n_prev == 1:
            break

        _, state = controller_step(state, x, seed=seed)
        log.record(x, state)

    log.x_hist.append(x)
    log.t_l = state.t_l
    log.t_c = state.k + 1
    logger.info("Converged in T_c=%d steps (N0*=%d, T_l=%d)", log.t_c, log.n_star_initial, log.t_l)
    return log


def _accumulated_set(
        log: RunLog,
        ahat_k: np.ndarray,
        radius_of: t.Callable[[np.ndarray], np.ndarray]
) -> Zonotope:
    n = log.x0.size
    total = Zonotope.origin(n)
    for k in range(log.t_l, log.t_c):
        xi = np.concatenate([log.x_hist[k], log.u_hist[k]])
        total = total + terminal_increment(ahat_k, radius_of(xi), log.n_star_hist[k])
    return total


def final_set(log: RunLog, ahat_k: np.ndarray, delta_s: np.ndarray) -> Zonotope:
    """Σ_{k=T_l}^{T_c-1} Â_K^(N*_k - 1) box(Δ_S |[x(k); u(k)]|); contains x(T_c)."""
    delta_s = np.asarray(delta_s, dtype=float)
    return _accumulated_set(log, ahat_k, lambda xi: delta_s @ np.abs(xi))


def tube_final_set(log: RunLog, tube: ErrorTube) -> Zonotope:
    """The same set built from the disturbance model of ``tube``."""
    return _accumulated_set(log, tube.ahat_k, tube.disturbance_radius)


def candidate_solution(
        prev: OcpSolution,
        delta: np.ndarray,
        k_gain: np.ndarray,
        ahat_k: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """
    Shifted previous solution corrected by the observed mismatch δ.

    v̂(j) = v*(j+1) + K Â_K^j δ for j < N*-1 and ẑ(j) = z*(j+1) + Â_K^j δ for j < N*.
    """
    horizon = prev.horizon
    delta = np.asarray(delta, dtype=float).ravel()
    ahat_k = np.asarray(ahat_k, dtype=float)

    corrections = np.empty((horizon, delta.size))
    corrections[0] = delta
    for j in range(1, horizon):
        corrections[j] = ahat_k @ corrections[j - 1]

    z_hat = prev.z_seq[1:] + corrections
    v_hat = prev.v_seq[1:] + corrections[:-1] @ np.asarray(k_gain, dtype=float).T
    return v_hat, z_hat
