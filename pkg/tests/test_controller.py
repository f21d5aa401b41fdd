from dataclasses import replace

import numpy as np
import pytest

from tests.conftest import scalar_scenario
from tormpc.constants import Branch, RunStatus, SamplingMode
from tormpc.controller import (
    candidate_solution, controller_step, enlarge_terminal_set, final_set, initialize,
    run_closed_loop, shrink_search, terminal_increment, tube_final_set
)
from tormpc.errors import TheoremViolation
from tormpc.ocp import OcpSolution, OcpStatus
from tormpc.sets import Zonotope, zonotope_contains
from tormpc.sim import additive_w_bound, sample_plant, verify_run


@pytest.fixture
def nominal_template():
    return scalar_scenario().ocp_template(cache_dir=None)


@pytest.fixture
def uncertain_template(uncertain_scalar):
    return uncertain_scalar.ocp_template(cache_dir=None)


def test_terminal_increment():
    increment = terminal_increment(np.diag([0.5, 2.0]), [0.1, 0.0], 3)
    assert increment.n_generators == 1
    np.testing.assert_allclose(increment.generators, [[0.025], [0.0]])
    assert not np.any(increment.center)

    assert terminal_increment(np.eye(2), [0.0, 0.0], 1).n_generators == 0
    with pytest.raises(ValueError):
        terminal_increment(np.eye(2), [0.1, 0.1], 0)


def test_enlarge_terminal_set_hand_example():
    enlarged = enlarge_terminal_set(
        Zonotope.origin(1), [[0.5]], [[0.1, 0.2]], 3, np.array([1.0]), np.array([1.0])
    )
    np.testing.assert_allclose(enlarged.generators, [[0.075]])

    twice = enlarge_terminal_set(
        enlarged, [[0.5]], [[0.1, 0.2]], 1, np.array([1.0]), np.array([-1.0])
    )
    np.testing.assert_allclose(twice.box_radius(), [0.375])


def test_candidate_solution_hand_example():
    previous = OcpSolution(
        status=OcpStatus.SOLVED,
        horizon=3,
        z_seq=np.array([[3.0], [2.0], [1.0], [0.0]]),
        v_seq=np.array([[-1.0], [-1.0], [-1.0]]),
    )
    v_hat, z_hat = candidate_solution(previous, [0.1], [[-0.5]], [[0.5]])
    np.testing.assert_allclose(z_hat.ravel(), [2.1, 1.05, 0.025])
    np.testing.assert_allclose(v_hat.ravel(), [-1.05, -1.025])


def test_shrink_search(nominal_template):
    spec = replace(nominal_template, x0=np.array([3.0]))
    assert shrink_search(spec, 5).horizon == 3
    assert not shrink_search(spec, 2).solved


def test_nominal_run_resets_every_step(nominal_template):
    log = run_closed_loop(nominal_template, (np.eye(1), np.eye(1)), np.array([3.0]))
    assert log.converged
    assert log.n_star_hist == [3, 2, 1]
    assert log.branch_hist == [Branch.INITIAL, Branch.RESET, Branch.RESET]
    assert log.t_c == 3
    assert log.t_l == 2
    np.testing.assert_allclose(log.states.ravel(), [3.0, 2.0, 1.0, 0.0], atol=1e-7)
    np.testing.assert_allclose(log.inputs.ravel(), [-1.0, -1.0, -1.0], atol=1e-7)
    assert all(not np.any(delta) for delta in log.delta_hist)
    assert final_set(log, [[0.5]], [[0.0, 0.0]]).is_singleton


def test_out_of_region_of_attraction(nominal_template):
    log = run_closed_loop(nominal_template, (np.eye(1), np.eye(1)), np.array([50.0]))
    assert log.status is RunStatus.OUT_OF_ROA
    assert not log.converged
    assert not log.x_hist
    assert log.n_star_initial is None
    assert initialize(nominal_template, np.array([50.0])) is None


@pytest.mark.parametrize("seed", range(8))
def test_uncertain_runs_keep_their_guarantees(uncertain_scalar, uncertain_template, seed):
    plant = sample_plant(uncertain_scalar, seed, SamplingMode.VERTEX)
    log = run_closed_loop(uncertain_template, plant, np.array([4.0]), seed=seed)
    assert log.converged
    assert len(log.x_hist) == log.t_c + 1
    assert len(log.u_hist) == len(log.delta_hist) == log.t_c
    assert log.t_c <= log.n_star_initial
    assert np.all(np.diff(log.n_star_hist) <= -1)

    last_reset = max(k for k, branch in enumerate(log.branch_hist) if branch is not Branch.ENLARGE)
    assert log.t_l == last_reset

    final = final_set(log, uncertain_scalar.ahat_k, uncertain_scalar.delta_s)
    np.testing.assert_allclose(
        final.box_radius(), tube_final_set(log, uncertain_template.tube).box_radius()
    )
    assert zonotope_contains(final, log.x_hist[log.t_c], tol=1e-6)
    assert verify_run(uncertain_template, log) <= 1e-7


def test_converged_controller_cannot_step(nominal_template):
    state = initialize(nominal_template, np.array([0.5]))
    assert state.n_prev == 1
    with pytest.raises(ValueError):
        controller_step(state, np.array([0.0]))


def test_plant_outside_the_uncertainty_is_detected(uncertain_template):
    with pytest.raises(TheoremViolation) as raised:
        run_closed_loop(uncertain_template, (2.0 * np.eye(1), np.eye(1)), np.array([3.0]), seed=9)

    assert raised.value.seed == 9
    assert raised.value.step == 1
    assert "seed=9" in str(raised.value)


@pytest.mark.slow
def test_rendezvous_run(hcw, hcw_template):
    plant = sample_plant(hcw, 11)
    log = run_closed_loop(hcw_template, plant, np.array([20.0, 0.0, 0.0, 0.0, 0.0, 0.0]), seed=11)
    assert log.converged
    assert verify_run(hcw_template, log) <= 1e-7
    assert log.t_c <= log.n_star_initial


def test_enlargement_branch_is_taken(uncertain_scalar, uncertain_template):
    enlarged = 0
    for seed in range(100):
        plant = sample_plant(uncertain_scalar, seed, SamplingMode.VERTEX)
        x0 = np.array([(4.0, -4.0, 3.5)[seed % 3]])
        log = run_closed_loop(uncertain_template, plant, x0, seed=seed)
        assert log.converged
        verify_run(uncertain_template, log)
        enlarged += Branch.ENLARGE in log.branch_hist
    assert enlarged > 0


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_rendezvous_mismatch_stays_in_the_additive_box(hcw, hcw_template, seed):
    w = additive_w_bound(hcw.delta_s, hcw.state_poly, hcw.input_poly)
    plant = sample_plant(hcw, seed, SamplingMode.VERTEX)
    x0 = np.array([35.0, 10.0, 0.0, 0.0, 0.0, 0.0])
    log = run_closed_loop(hcw_template, plant, x0, seed=seed)
    assert log.converged

    for x, u, delta in zip(log.x_hist, log.u_hist, log.delta_hist):
        assert np.all(np.abs(delta) <= hcw.delta_s @ np.abs(np.concatenate([x, u])) + 1e-12)
        assert np.all(np.abs(delta) <= w + 1e-7)
    assert np.max(np.abs(log.states[:, 3:])) <= 0.4 + 1e-7
    assert np.max(np.abs(log.inputs)) <= 0.01 + 1e-7
