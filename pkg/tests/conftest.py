import json
import typing as t
from pathlib import Path

import numpy as np
import pytest

from tormpc.ocp import OcpSpec
from tormpc.sets import Polytope
from tormpc.sim import Scenario, hcw_scenario


def scalar_scenario(
        delta: float = 0.0,
        n_max: int = 30,
        v_max: float = 1.0,
        x_max: float = 10.0
) -> Scenario:
    """x(k+1) = x(k) + u(k) with |x| <= x_max, |u| <= v_max and K = -0.5."""
    return Scenario(
        a_hat=[[1.0]],
        b_hat=[[1.0]],
        delta_a=[[delta]],
        delta_b=[[delta]],
        k_gain=[[-0.5]],
        state_poly=Polytope.box([-x_max], [x_max]),
        input_poly=Polytope.box([-v_max], [v_max]),
        n_max=n_max,
        name="scalar",
    )


def random_system(seed: int, n: int, m: int, scale: float = 0.02) -> dict[str, np.ndarray]:
    """A random system whose nominal closed loop A + BK has spectral radius 0.6."""
    rng = np.random.default_rng(seed)
    a_hat = rng.normal(size=(n, n))
    b_hat = rng.normal(size=(n, m))
    k_gain = rng.normal(size=(m, n)) * 0.1
    closed = a_hat + b_hat @ k_gain
    a_hat = a_hat - closed + 0.6 * closed / np.max(np.abs(np.linalg.eigvals(closed)))
    return {
        "a_hat": a_hat,
        "b_hat": b_hat,
        "delta_a": scale * rng.uniform(size=(n, n)),
        "delta_b": scale * rng.uniform(size=(n, m)),
        "k_gain": k_gain,
    }


@pytest.fixture
def nominal_scalar() -> Scenario:
    return scalar_scenario()


@pytest.fixture
def uncertain_scalar() -> Scenario:
    return scalar_scenario(delta=0.05)


@pytest.fixture(scope="session")
def hcw() -> Scenario:
    return hcw_scenario()


@pytest.fixture(scope="session")
def hcw_template(hcw: Scenario) -> OcpSpec:
    return hcw.ocp_template(cache_dir=None)


def scalar_document(delta: float = 0.0) -> dict[str, t.Any]:
    """The scalar scenario as a scenario-file document."""
    return {
        "name": "scalar",
        "a_hat": [[1.0]],
        "b_hat": [[1.0]],
        "delta_a": [[delta]],
        "delta_b": [[delta]],
        "k_gain": [[-0.5]],
        "state_poly": {"H": [[1.0], [-1.0]], "b": [10.0, 10.0]},
        "input_poly": {"H": [[1.0], [-1.0]], "b": [1.0, 1.0]},
        "n_max": 30,
    }


@pytest.fixture
def scalar_file(tmp_path: Path) -> Path:
    path = tmp_path / "scalar.json"
    path.write_text(json.dumps(scalar_document()), encoding="utf-8")
    return path


@pytest.fixture
def uncertain_scalar_file(tmp_path: Path) -> Path:
    path = tmp_path / "uncertain.json"
    path.write_text(json.dumps(scalar_document(0.05)), encoding="utf-8")
    return path
