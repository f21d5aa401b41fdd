import numpy as np
import pytest

from tests.conftest import scalar_scenario
from tormpc.controller import run_closed_loop
from tormpc.sim import additive_w_bound, baseline_run, cone_grid, roa_scan, tube_ordering
from tormpc.sim.baseline import admissible_extent


def test_admissible_extent(uncertain_scalar):
    extent = admissible_extent(uncertain_scalar.state_poly, uncertain_scalar.input_poly)
    np.testing.assert_allclose(extent, [10.0, 1.0])


def test_w_bound(uncertain_scalar):
    w = additive_w_bound(
        uncertain_scalar.delta_s, uncertain_scalar.state_poly, uncertain_scalar.input_poly
    )
    np.testing.assert_allclose(w, [0.05 * 10.0 + 0.05 * 1.0])


def test_tube_ordering_at_the_first_step(uncertain_scalar):
    table = uncertain_scalar.bounds_table(cache_dir=None)
    xi_bar = admissible_extent(uncertain_scalar.state_poly, uncertain_scalar.input_poly)
    w = additive_w_bound(
        uncertain_scalar.delta_s, uncertain_scalar.state_poly, uncertain_scalar.input_poly
    )
    ordered = tube_ordering(table, w, xi_bar, 6)
    assert ordered.shape == (6,)
    assert ordered[0]

    # A larger w dominates everywhere
    assert np.all(tube_ordering(table, 10 * w, xi_bar, 6))


def test_zero_w_matches_the_nominal_controller(nominal_scalar):
    plant = (np.eye(1), np.eye(1))
    base = baseline_run(nominal_scalar, np.array([3.0]), plant=plant)
    ours = run_closed_loop(nominal_scalar.ocp_template(cache_dir=None), plant, np.array([3.0]))
    assert base.n_star_hist == ours.n_star_hist == [3, 2, 1]
    np.testing.assert_allclose(base.inputs, ours.inputs, atol=1e-7)


def test_baseline_region_is_nested():
    scenario = scalar_scenario(0.05)
    w = additive_w_bound(scenario.delta_s, scenario.state_poly, scenario.input_poly)
    grid = [np.array([x]) for x in np.linspace(-9.5, 9.5, 11)]

    ours = roa_scan(scenario, grid, tube=scenario.multiplicative_tube(cache_dir=None))
    base = roa_scan(scenario, grid, tube=scenario.additive_tube(w))
    assert all(mine.feasible or not theirs.feasible for mine, theirs in zip(ours, base))
    assert sum(p.feasible for p in base) <= sum(p.feasible for p in ours)


@pytest.mark.slow
def test_rendezvous_baseline_needs_longer_horizons(hcw):
    # On the rendezvous problem w is a few mm/s on the velocity rows only, so both
    # controllers reach every grid point; the additive tube shows up as longer horizons.
    w = additive_w_bound(hcw.delta_s, hcw.state_poly, hcw.input_poly)
    np.testing.assert_allclose(w[:3], 0.0)
    assert np.all(w[3:] > 4e-3) and np.all(w[3:] < 5e-3)

    grid = cone_grid()[::7]
    ours = roa_scan(hcw, grid, tube=hcw.multiplicative_tube(cache_dir=None))
    base = roa_scan(hcw, grid, tube=hcw.additive_tube(w))

    assert all(mine.feasible or not theirs.feasible for mine, theirs in zip(ours, base))
    common = [(mine, theirs) for mine, theirs in zip(ours, base) if theirs.feasible]
    assert all(theirs.n_star_0 >= mine.n_star_0 for mine, theirs in common)
    assert sum(theirs.n_star_0 for _, theirs in common) > sum(mine.n_star_0 for mine, _ in common)
