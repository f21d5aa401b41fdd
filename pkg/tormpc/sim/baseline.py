"""
Simplified additive-disturbance baseline.

The model mismatch is bounded once for all admissible (x, u) by a fixed box w
and the same closed-loop controller runs with the additive error tube.
"""
import typing as t

import numpy as np

from tormpc.bounds import BoundsTable
from tormpc.controller import RunLog, run_closed_loop
from tormpc.sets import Polytope
from .plant import Plant, sample_plant
from .scenario import Scenario


def admissible_extent(state_poly: Polytope, input_poly: Polytope) -> np.ndarray:
    """max |ξ_i| over 𝒳 × 𝒰 for every coordinate of ξ = [x; u]."""
    return np.concatenate([state_poly.coordinate_extent(), input_poly.coordinate_extent()])


def additive_w_bound(delta_s: np.ndarray, state_poly: Polytope, input_poly: Polytope) -> np.ndarray:
    """Radius w with |D ξ| <= w for every |D| <= Δ_S and every admissible ξ."""
    return np.asarray(delta_s, dtype=float) @ admissible_extent(state_poly, input_poly)


def tube_ordering(
        table: BoundsTable,
        w: np.ndarray,
        xi_bar: np.ndarray,
        horizon: int
) -> np.ndarray:
    """
    Per step j = 1..horizon, whether the additive radius dominates the multiplicative one.

    The multiplicative radius is evaluated at |ξ(i)| = ξ̄ for every i.
    """
    abs_powers = table.abs_powers
    additive = np.cumsum(abs_powers[:horizon] @ w, axis=0)
    multiplicative = np.cumsum(table.radii[:horizon] @ xi_bar, axis=0)
    return np.all(additive >= multiplicative - 1e-12 * np.abs(multiplicative), axis=1)


def baseline_run(
        scenario: Scenario,
        x0: np.ndarray,
        seed: t.Optional[int] = None,
        plant: t.Optional[Plant] = None
) -> RunLog:
    w = additive_w_bound(scenario.delta_s, scenario.state_poly, scenario.input_poly)
    template = scenario.ocp_template(scenario.additive_tube(w))
    plant = sample_plant(scenario, seed) if plant is None else plant
    return run_closed_loop(template, plant, x0, seed=seed)
