import numpy as np
import pytest

from tormpc.constants import SamplingMode
from tormpc.controller import run_closed_loop
from tormpc.errors import TheoremViolation
from tormpc.sim import cone_grid, monte_carlo, run_seeds, verify_run
from tormpc.sim.campaign import aggregate, constraint_violation


@pytest.fixture
def template(uncertain_scalar):
    return uncertain_scalar.ocp_template(cache_dir=None)


def test_run_seeds():
    seeds = run_seeds(7, 20)
    assert len(seeds) == 20
    assert len(set(seeds)) == 20
    assert seeds == run_seeds(7, 20)
    assert seeds != run_seeds(8, 20)
    assert run_seeds(7, 5) == seeds[:5]


def test_campaign_is_reproducible(uncertain_scalar, template):
    x0_set = [np.array([3.0]), np.array([-2.0])]
    first = monte_carlo(uncertain_scalar, x0_set, 3, seed=1, template=template)
    second = monte_carlo(uncertain_scalar, x0_set, 3, seed=1, template=template)

    assert len(first.runs) == 6
    assert first.aggregate.feasible_fraction == 1.0
    assert [run.x0 for run in first.runs[:3]] == [[3.0]] * 3
    assert first.runs == second.runs
    assert first.master_seed == 1
    assert first.runs_per_x0 == 3
    assert all(run.max_violation <= 1e-7 for run in first.runs)
    assert all(run.t_c <= run.n_star_0 for run in first.runs)
    assert all(run.solve_ms_mean is None for run in first.runs)


def test_parallel_campaign_matches_serial(uncertain_scalar, template):
    x0_set = [np.array([3.0]), np.array([-2.0])]
    serial = monte_carlo(uncertain_scalar, x0_set, 2, seed=5, template=template)
    parallel = monte_carlo(uncertain_scalar, x0_set, 2, seed=5, template=template, jobs=2)
    assert serial.runs == parallel.runs


def test_nominal_campaign_hits_the_origin(nominal_scalar):
    report = monte_carlo(
        nominal_scalar, [np.array([4.0])], 2, seed=3,
        template=nominal_scalar.ocp_template(cache_dir=None), timing=True,
    )
    for run in report.runs:
        assert run.final_position_error == pytest.approx(0.0, abs=1e-7)
        assert run.final_set_position_radius == 0.0
        assert run.fuel == pytest.approx(4.0)
        assert run.enlargements == 0
        assert run.solve_ms_mean > 0.0
    assert report.aggregate.mean_fuel == pytest.approx(4.0)


def test_infeasible_initial_states_are_reported(uncertain_scalar, template):
    report = monte_carlo(
        uncertain_scalar, [np.array([3.0]), np.array([50.0])], 1, seed=0,
        template=template, mode=SamplingMode.VERTEX,
    )
    assert [run.status for run in report.runs] == ["converged", "out-of-roa"]
    assert report.aggregate.feasible_fraction == 0.5
    assert report.runs[1].t_c is None


def test_campaign_needs_runs(uncertain_scalar, template):
    with pytest.raises(ValueError):
        monte_carlo(uncertain_scalar, [np.array([3.0])], 0, seed=0, template=template)


def test_empty_aggregate():
    summary = aggregate([])
    assert summary.runs == 0
    assert summary.feasible_fraction == 0.0
    assert summary.mean_fuel is None


def test_verify_run_catches_tampering(template):
    plant = (np.array([[1.04]]), np.array([[0.97]]))
    log = run_closed_loop(template, plant, np.array([3.0]), seed=2)
    assert constraint_violation(template, log) == 0.0
    assert verify_run(template, log) == 0.0

    log.n_star_hist[1] = log.n_star_hist[0]
    with pytest.raises(TheoremViolation, match="grew"):
        verify_run(template, log)
    log.n_star_hist[1] = log.n_star_hist[0] - 1

    log.x_hist[-1] = log.x_hist[-1] + 1.0
    with pytest.raises(TheoremViolation, match="final set"):
        verify_run(template, log)


def test_verify_run_checks_the_mismatch_box(template):
    log = run_closed_loop(template, (np.eye(1), np.eye(1)), np.array([3.0]))
    log.delta_hist[0] = np.array([5.0])
    with pytest.raises(TheoremViolation, match="uncertainty box") as raised:
        verify_run(template, log)
    assert raised.value.step == 0


@pytest.mark.slow
def test_rendezvous_campaign(hcw, hcw_template):
    grid = cone_grid()
    picks = np.random.default_rng(21).choice(len(grid), size=50, replace=False)
    report = monte_carlo(
        hcw, [grid[i] for i in picks], 1, 2024, template=hcw_template, jobs=4, timing=True
    )

    # every run went through verify_run, which raises on a broken guarantee
    assert len(report.runs) == 50
    assert report.aggregate.feasible_fraction == 1.0
    assert report.aggregate.max_violation <= 1e-7
    assert all(run.t_c <= run.n_star_0 for run in report.runs)

    assert report.aggregate.mean_final_position_error < 0.1
    assert report.aggregate.mean_final_velocity_error < 0.01
    assert report.aggregate.mean_solve_ms < 5000.0
