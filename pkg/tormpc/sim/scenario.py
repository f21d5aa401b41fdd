"""
Scenarios: the nominal model, its uncertainty, the gain and the constraint sets.

The built-in scenario is a rendezvous of a chaser with a target on a circular
orbit, in discrete Hill-Clohessy-Wiltshire coordinates (radial, along-track,
cross-track positions followed by the three velocities).
"""
import json
import logging
import typing as t
from dataclasses import dataclass
from pathlib import Path

import deepmerge
import numpy as np
from pydantic import ValidationError

from tormpc.bounds import BoundsTable, closed_loop_interval, gain_spotcheck, load_or_compute
from tormpc.constants import BUILTIN_SCENARIOS, CACHE_DIR, N_MAX
from tormpc.errors import ScenarioError
from tormpc.models import ScenarioFile, VisibilityModel
from tormpc.ocp import OcpSpec
from tormpc.sets import Polytope, Zonotope
from tormpc.tube import AdditiveTube, ErrorTube, MultiplicativeTube

logger = logging.getLogger(__name__)

HCW_DT = 11.7
HCW_MAX_SPEED = 0.4
HCW_MAX_ACCELERATION = 0.01

_merger = deepmerge.Merger([(dict, ["merge"])], ["override"], ["override"])


@dataclass(frozen=True, eq=False)
class Scenario:
    a_hat: np.ndarray
    b_hat: np.ndarray
    delta_a: np.ndarray
    delta_b: np.ndarray
    k_gain: np.ndarray
    state_poly: Polytope
    input_poly: Polytope
    n_max: int = N_MAX
    dt: float = 1.0
    name: str = "scenario"
    position_axes: tuple[int, ...] = ()
    velocity_axes: tuple[int, ...] = ()
    cone: t.Optional[VisibilityModel] = None

    def __post_init__(self) -> None:
        for key in ("a_hat", "b_hat", "delta_a", "delta_b", "k_gain"):
            object.__setattr__(self, key, np.asarray(getattr(self, key), dtype=float))
        # Raises DimensionError on inconsistent shapes
        closed_loop_interval(self.a_hat, self.b_hat, self.delta_a, self.delta_b, self.k_gain)

        if self.state_poly.dimension != self.n or self.input_poly.dimension != self.m:
            raise ScenarioError("Constraint polytopes do not match the system dimensions.")
        if not self.input_poly.contains(np.zeros(self.m)):
            raise ScenarioError("The input set must contain 0.")

        if not self.position_axes and not self.velocity_axes:
            half = (self.n + 1) // 2
            object.__setattr__(self, "position_axes", tuple(range(half)))
            object.__setattr__(self, "velocity_axes", tuple(range(half, self.n)))

    @property
    def n(self) -> int:
        return self.b_hat.shape[0]

    @property
    def m(self) -> int:
        return self.b_hat.shape[1]

    @property
    def delta_s(self) -> np.ndarray:
        return np.hstack([self.delta_a, self.delta_b])

    @property
    def ahat_k(self) -> np.ndarray:
        return self.a_hat + self.b_hat @ self.k_gain

    def bounds_table(
            self,
            cache_dir: t.Union[str, Path, None] = CACHE_DIR,
            method: str = "recursive"
    ) -> BoundsTable:
        return load_or_compute(
            self.a_hat, self.b_hat, self.delta_a, self.delta_b, self.k_gain,
            self.n_max, cache_dir=cache_dir, method=method,
        )

    def multiplicative_tube(self, cache_dir: t.Union[str, Path, None] = CACHE_DIR) -> ErrorTube:
        return MultiplicativeTube(self.bounds_table(cache_dir))

    def additive_tube(self, w: np.ndarray) -> ErrorTube:
        return AdditiveTube(w, self.ahat_k, self.n_max)

    def ocp_template(
            self,
            tube: t.Optional[ErrorTube] = None,
            *,
            tie_break: bool = False,
            cache_dir: t.Union[str, Path, None] = CACHE_DIR
    ) -> OcpSpec:
        """Problem data shared by every step; x0 and the terminal set are placeholders."""
        return OcpSpec(
            a_hat=self.a_hat,
            b_hat=self.b_hat,
            k_gain=self.k_gain,
            tube=tube if tube is not None else self.multiplicative_tube(cache_dir),
            state_constraints=self.state_poly,
            input_constraints=self.input_poly,
            x0=np.zeros(self.n),
            terminal_set=Zonotope.origin(self.n),
            n_max=self.n_max,
            tie_break=tie_break,
        )

    def check_gain(self, samples: int = 1000, seed: int = 0) -> float:
        """Spectral-radius spot-check of the closed loop; warns when it reaches 1."""
        _, _, i_ak = closed_loop_interval(
            self.a_hat, self.b_hat, self.delta_a, self.delta_b, self.k_gain
        )
        radius = gain_spotcheck(i_ak, samples, seed)
        if radius >= 1.0:
            logger.warning(
                "Sampled closed-loop spectral radius %.4f >= 1 for scenario '%s'.",
                radius, self.name,
            )
        return radius


def visibility_cone(
        half_angle_deg: float = 60.0,
        facets: int = 8,
        radial_cap: float = 70.0,
        max_speed: float = HCW_MAX_SPEED
) -> Polytope:
    """
    Inner polyhedral approximation of the approach cone, with a velocity box.

    The cone has its apex at the target and its axis along +x. Facet i keeps
    cos(φ_i) y + sin(φ_i) z <= tan(θ) cos(π/facets) x, so every facet touches
    the circular cone only along the edges of the inscribed polygon.
    """
    angles = 2 * np.pi * np.arange(facets) / facets
    slope = np.tan(np.radians(half_angle_deg)) * np.cos(np.pi / facets)

    position = np.zeros((facets + 1, 3))
    position[:facets, 0] = -slope
    position[:facets, 1] = np.cos(angles)
    position[:facets, 2] = np.sin(angles)
    position[facets, 0] = 1.0

    speed = np.vstack([np.eye(3), -np.eye(3)])
    h = np.block([
        [position, np.zeros((facets + 1, 3))],
        [np.zeros((6, 3)), speed],
    ])
    b = np.concatenate([np.zeros(facets), [radial_cap], np.full(6, max_speed)])
    return Polytope(h, b)


def hcw_document(
        half_angle_deg: float = 60.0,
        facets: int = 8,
        radial_cap: float = 70.0
) -> dict[str, t.Any]:
    """The rendezvous scenario as a scenario-file document."""
    a_hat = np.eye(6)
    a_hat[0, 3] = a_hat[1, 4] = a_hat[2, 5] = HCW_DT
    a_hat[3, 0] = 3.8e-5
    a_hat[3, 4] = 0.02
    a_hat[4, 3] = -0.02
    a_hat[5, 2] = -1.3e-5

    b_hat = np.vstack([np.zeros((3, 3)), HCW_DT * np.eye(3)])

    delta_a = np.zeros((6, 6))
    delta_a[3, 0] = 1e-3 * 0.004
    delta_a[3, 4] = 1e-3 * 1.23
    delta_a[4, 3] = 1e-3 * 1.23
    delta_a[5, 2] = 1e-3 * 0.001

    # Thrust misalignment couples each axis into the other two
    delta_b = np.vstack([np.zeros((3, 3)), 0.205 * (np.ones((3, 3)) - np.eye(3))])

    k_gain = -0.1 * np.array([
        [0.025, 0.0, 0.0, 1.005, 0.021, 0.0],
        [0.0, 0.026, 0.0, -0.021, 1.022, 0.0],
        [0.0, 0.0, 0.026, 0.0, 0.0, 1.022],
    ])

    input_h = np.vstack([np.eye(3), -np.eye(3)])
    return {
        "name": "hcw",
        "a_hat": a_hat.tolist(),
        "b_hat": b_hat.tolist(),
        "delta_a": delta_a.tolist(),
        "delta_b": delta_b.tolist(),
        "k_gain": k_gain.tolist(),
        "visibility": {
            "half_angle_deg": half_angle_deg,
            "facets": facets,
            "radial_cap": radial_cap,
            "max_speed": HCW_MAX_SPEED,
        },
        "input_poly": {"H": input_h.tolist(), "b": [HCW_MAX_ACCELERATION] * 6},
        "n_max": 200,
        "dt": HCW_DT,
        "position_axes": [0, 1, 2],
        "velocity_axes": [3, 4, 5],
    }


def hcw_scenario(
        half_angle_deg: float = 60.0,
        facets: int = 8,
        radial_cap: float = 70.0
) -> Scenario:
    return scenario_from_document(hcw_document(half_angle_deg, facets, radial_cap))


def scenario_from_document(document: dict[str, t.Any]) -> Scenario:
    """Validate a scenario document and build the scenario; raises pydantic.ValidationError."""
    model = ScenarioFile.parse_obj(document)
    if model.visibility is not None:
        state_poly = _cone_from_model(model.visibility)
    else:
        state_poly = Polytope(model.state_poly.H, model.state_poly.b)

    return Scenario(
        a_hat=model.a_hat,
        b_hat=model.b_hat,
        delta_a=model.delta_a,
        delta_b=model.delta_b,
        k_gain=model.k_gain,
        state_poly=state_poly,
        input_poly=Polytope(model.input_poly.H, model.input_poly.b),
        n_max=model.n_max or N_MAX,
        dt=model.dt,
        name=model.name,
        position_axes=tuple(model.position_axes or ()),
        velocity_axes=tuple(model.velocity_axes or ()),
        cone=model.visibility,
    )


def _cone_from_model(visibility: VisibilityModel) -> Polytope:
    return visibility_cone(
        visibility.half_angle_deg, visibility.facets, visibility.radial_cap, visibility.max_speed
    )


def load_document(source: t.Union[str, Path]) -> dict[str, t.Any]:
    """
    Read a scenario document from a JSON file or a built-in name.

    Raises ``json.JSONDecodeError`` with line and column on malformed files.
    """
    if str(source) in BUILTIN_SCENARIOS:
        return hcw_document()

    with Path(source).open(encoding="utf-8") as file:
        return json.load(file)


def load_scenario(
        source: t.Union[str, Path],
        overrides: t.Optional[dict[str, t.Any]] = None
) -> Scenario:
    """Load a scenario and patch it with ``overrides`` before validation."""
    document = load_document(source)
    if overrides:
        document = _merger.merge(document, overrides)

    try:
        scenario = scenario_from_document(document)
    except ValidationError:
        logger.error("Scenario %s failed validation.", source)
        raise

    scenario.check_gain()
    return scenario
