"""Sampling of true plants from the interval uncertainty of a scenario."""
import typing as t

import numpy as np

from tormpc.constants import SamplingMode
from .scenario import Scenario

Plant = tuple[np.ndarray, np.ndarray]


def sample_plant(
        scenario: Scenario,
        seed: t.Union[int, np.random.SeedSequence, None] = None,
        mode: SamplingMode = SamplingMode.UNIFORM
) -> Plant:
    """
    Draw (A, B) with |A - Â| <= Δ_A and |B - B̂| <= Δ_B entrywise.

    ``UNIFORM`` draws every entry uniformly in its interval, ``VERTEX`` puts every
    entry at one of its two ends.
    """
    rng = np.random.default_rng(seed)
    shape = (scenario.n, scenario.n + scenario.m)
    if mode is SamplingMode.UNIFORM:
        beta = rng.uniform(-1.0, 1.0, size=shape)
    elif mode is SamplingMode.VERTEX:
        beta = rng.choice((-1.0, 1.0), size=shape)
    else:
        raise ValueError(f"Unknown sampling mode {mode!r}.")

    offset = beta * scenario.delta_s
    return scenario.a_hat + offset[:, :scenario.n], scenario.b_hat + offset[:, scenario.n:]


def nominal_plant(scenario: Scenario) -> Plant:
    return scenario.a_hat.copy(), scenario.b_hat.copy()
