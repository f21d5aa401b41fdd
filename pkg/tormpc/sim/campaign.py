"""
Monte-Carlo campaigns: many closed-loop runs on sampled plants, each checked
against the guarantees of the controller.
"""
import logging
import typing as t
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np
from tqdm import tqdm

from tormpc.constants import MEMBERSHIP_TOL, VERIFY_TOL, Branch, SamplingMode
from tormpc.controller import RunLog, candidate_solution, run_closed_loop, tube_final_set
from tormpc.errors import TheoremViolation
from tormpc.models import CampaignAggregate, CampaignReport, RunSummary
from tormpc.ocp import OcpSpec, verify_trajectory
from tormpc.sets import polytope_at, zonotope_contains
from .plant import sample_plant
from .scenario import Scenario

logger = logging.getLogger(__name__)


def run_seeds(master_seed: int, count: int) -> list[int]:
    """Independent per-run seeds derived from one master seed."""
    children = np.random.SeedSequence(master_seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


def constraint_violation(template: OcpSpec, log: RunLog) -> float:
    """Largest violation of 𝒳(k) by x(k) and 𝒰(k) by u(k) over k < T_c."""
    worst = 0.0
    for k in range(log.t_c):
        worst = max(
            worst,
            polytope_at(template.state_constraints, k).violation(log.x_hist[k]),
            polytope_at(template.input_constraints, k).violation(log.u_hist[k]),
        )
    return worst


def verify_run(template: OcpSpec, log: RunLog, tol: float = VERIFY_TOL) -> float:
    """
    Check a converged run against the controller guarantees.

    Raises ``TheoremViolation`` when the horizon fails to shrink, convergence
    takes longer than the initial horizon, x(T_c) leaves the final set, a
    logged mismatch leaves its box, a shifted previous solution fails to be
    feasible after an enlargement, or a constraint is broken. Returns the
    largest constraint violation.
    """
    def fail(message: str, step: t.Optional[int] = None) -> t.NoReturn:
        raise TheoremViolation(message, seed=log.seed, step=step)

    tube = template.tube
    for k in range(1, len(log.n_star_hist)):
        if log.n_star_hist[k] > log.n_star_hist[k - 1] - 1:
            fail(f"N* grew from {log.n_star_hist[k - 1]} to {log.n_star_hist[k]}", k)

    if log.t_c > log.n_star_initial:
        fail(f"T_c={log.t_c} exceeds N0*={log.n_star_initial}")

    for k, delta in enumerate(log.delta_hist):
        xi = np.concatenate([log.x_hist[k], log.u_hist[k]])
        limit = tube.disturbance_radius(xi) + MEMBERSHIP_TOL
        if np.any(np.abs(delta) > limit):
            fail("Model mismatch outside its uncertainty box", k)

    final = tube_final_set(log, tube)
    scale = max(1.0, float(np.max(np.abs(log.x0))))
    if not zonotope_contains(final, log.x_hist[log.t_c], tol=tol * scale):
        fail("x(T_c) is outside the final set")

    for k, branch in enumerate(log.branch_hist):
        if branch is not Branch.ENLARGE:
            continue
        spec = replace(
            template, x0=log.x_hist[k], terminal_set=log.terminal_sets[k], time_offset=k
        )
        v_hat, z_hat = candidate_solution(
            log.solutions[k - 1], log.delta_hist[k - 1], template.k_gain, tube.ahat_k
        )
        check = verify_trajectory(spec, z_hat, v_hat, tol)
        if not check.feasible:
            fail(f"Shifted candidate is infeasible ({', '.join(check.failures)})", k)

    violation = constraint_violation(template, log)
    if violation > tol:
        fail(f"Constraints broken by {violation:.3g}")
    return violation


def summarize_run(
        scenario: Scenario,
        template: OcpSpec,
        log: RunLog,
        violation: float,
        timing: bool = False
) -> RunSummary:
    if not log.converged:
        return RunSummary(
            seed=log.seed, x0=log.x0.tolist(), status=log.status.value,
            n_star_0=None, t_c=None, t_l=None,
            final_position_error=None, final_velocity_error=None, fuel=None,
            final_set_position_radius=None, final_set_velocity_radius=None,
            solve_ms_mean=None, solve_ms_max=None,
        )

    position = list(scenario.position_axes)
    velocity = list(scenario.velocity_axes)
    x_final = log.x_hist[log.t_c]
    final_radius = tube_final_set(log, template.tube).box_radius()

    return RunSummary(
        seed=log.seed,
        x0=log.x0.tolist(),
        status=log.status.value,
        n_star_0=log.n_star_initial,
        t_c=log.t_c,
        t_l=log.t_l,
        enlargements=sum(branch is Branch.ENLARGE for branch in log.branch_hist),
        max_violation=violation,
        final_position_error=float(np.linalg.norm(x_final[position])),
        final_velocity_error=float(np.linalg.norm(x_final[velocity])),
        fuel=float(np.abs(log.inputs).sum()),
        final_set_position_radius=float(np.max(final_radius[position], initial=0.0)),
        final_set_velocity_radius=float(np.max(final_radius[velocity], initial=0.0)),
        solve_ms_mean=float(np.mean(log.solve_ms_hist)) if timing else None,
        solve_ms_max=float(np.max(log.solve_ms_hist)) if timing else None,
    )


def _mean(values: t.Iterable[t.Optional[float]]) -> t.Optional[float]:
    values = [value for value in values if value is not None]
    return float(np.mean(values)) if values else None


def aggregate(runs: list[RunSummary]) -> CampaignAggregate:
    converged = [run for run in runs if run.status == "converged"]
    return CampaignAggregate(
        runs=len(runs),
        feasible_fraction=len(converged) / len(runs) if runs else 0.0,
        mean_final_position_error=_mean(run.final_position_error for run in converged),
        mean_final_velocity_error=_mean(run.final_velocity_error for run in converged),
        mean_fuel=_mean(run.fuel for run in converged),
        mean_final_set_position_radius=_mean(run.final_set_position_radius for run in converged),
        mean_final_set_velocity_radius=_mean(run.final_set_velocity_radius for run in converged),
        mean_solve_ms=_mean(run.solve_ms_mean for run in converged),
        max_violation=max((run.max_violation for run in runs), default=0.0),
    )


def _run_one(
        scenario: Scenario,
        template: OcpSpec,
        x0: np.ndarray,
        seed: int,
        mode: SamplingMode,
        timing: bool
) -> RunSummary:
    plant = sample_plant(scenario, seed, mode)
    log = run_closed_loop(template, plant, x0, seed=seed)
    violation = verify_run(template, log) if log.converged else 0.0
    return summarize_run(scenario, template, log, violation, timing)


def monte_carlo(
        scenario: Scenario,
        x0_set: t.Sequence[np.ndarray],
        runs_per_x0: int,
        seed: int,
        *,
        template: t.Optional[OcpSpec] = None,
        mode: SamplingMode = SamplingMode.UNIFORM,
        jobs: int = 1,
        timing: bool = False,
        progress: bool = False
) -> CampaignReport:
    """
    Run ``runs_per_x0`` sampled plants from every initial state.

    A ``TheoremViolation`` in any run aborts the campaign; the exception carries
    the offending seed.
    """
    if runs_per_x0 < 1:
        raise ValueError("runs_per_x0 must be at least 1.")

    template = scenario.ocp_template() if template is None else template
    seeds = _chunks(run_seeds(seed, len(x0_set) * runs_per_x0), runs_per_x0)
    tasks = [
        (np.asarray(x0, dtype=float), run_seed)
        for x0, x0_seeds in zip(x0_set, seeds)
        for run_seed in x0_seeds
    ]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [
                executor.submit(_run_one, scenario, template, x0, run_seed, mode, timing)
                for x0, run_seed in tasks
            ]
            runs = [
                future.result()
                for future in tqdm(futures, desc="Campaign", disable=not progress)
            ]
    else:
        runs = [
            _run_one(scenario, template, x0, run_seed, mode, timing)
            for x0, run_seed in tqdm(tasks, desc="Campaign", disable=not progress)
        ]

    report = CampaignReport(
        scenario=scenario.name,
        tube=template.tube.kind.value,
        master_seed=seed,
        runs_per_x0=runs_per_x0,
        runs=runs,
        aggregate=aggregate(runs),
    )
    logger.info(
        "Campaign of %d runs: %.0f%% feasible",
        len(runs), 100 * report.aggregate.feasible_fraction,
    )
    return report


def _chunks(values: list[int], size: int) -> list[list[int]]:
    return [values[i:i + size] for i in range(0, len(values), size)]
