"""Region-of-attraction scans: which initial states admit a solution of the initial problem."""
import logging
import typing as t
from dataclasses import replace

import numpy as np
from tqdm import tqdm

from tormpc.errors import ScenarioError
from tormpc.models import RoaPoint
from tormpc.ocp import solve_min_time
from tormpc.sets import Zonotope
from tormpc.tube import ErrorTube
from .scenario import Scenario

logger = logging.getLogger(__name__)


def cone_grid(
        half_angle_deg: float = 60.0,
        facets: int = 8,
        radial_cap: float = 70.0,
        rows: int = 10,
        margin: float = 0.02
) -> list[np.ndarray]:
    """
    In-plane initial positions at rest inside the visibility cone.

    Row i (1-based) sits at x = i * radial_cap / rows and holds i + 2 points
    spread evenly across the cone section |y| <= (1 - margin) c x, where c is
    the in-plane slope of the polyhedral cone. Ten rows give 75 points.
    """
    slope = np.tan(np.radians(half_angle_deg)) * np.cos(np.pi / facets)
    grid = []
    for i in range(1, rows + 1):
        x = i * radial_cap / rows
        half_width = (1.0 - margin) * slope * x
        for y in np.linspace(-half_width, half_width, i + 2):
            grid.append(np.array([x, y, 0.0, 0.0, 0.0, 0.0]))
    return grid


def default_grid(scenario: Scenario) -> list[np.ndarray]:
    """The cone grid of a scenario whose state set is a visibility cone."""
    if scenario.cone is None:
        raise ScenarioError(
            f"Scenario '{scenario.name}' has no visibility cone, so a grid must be given."
        )
    return cone_grid(scenario.cone.half_angle_deg, scenario.cone.facets, scenario.cone.radial_cap)


def roa_scan(
        scenario: Scenario,
        grid: t.Optional[t.Sequence[np.ndarray]] = None,
        tube: t.Optional[ErrorTube] = None,
        progress: bool = False
) -> list[RoaPoint]:
    """Solve the initial problem with z(N) = 0 at every grid point."""
    grid = default_grid(scenario) if grid is None else grid
    template = scenario.ocp_template(tube)
    origin = Zonotope.origin(scenario.n)

    points = []
    for x0 in tqdm(grid, desc="ROA", disable=not progress):
        spec = replace(template, x0=x0, terminal_set=origin)
        solution = solve_min_time(spec)
        points.append(RoaPoint(
            x0=np.asarray(x0, dtype=float).tolist(),
            feasible=solution.solved,
            n_star_0=solution.horizon if solution.solved else None,
        ))

    feasible = sum(point.feasible for point in points)
    logger.info("ROA scan: %d of %d initial states feasible", feasible, len(points))
    return points
