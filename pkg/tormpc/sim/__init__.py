from .baseline import additive_w_bound, baseline_run, tube_ordering
from .campaign import monte_carlo, run_seeds, verify_run
from .plant import nominal_plant, sample_plant
from .roa import cone_grid, default_grid, roa_scan
from .scenario import Scenario, hcw_scenario, load_scenario, visibility_cone

__all__ = [
    "Scenario",
    "hcw_scenario",
    "load_scenario",
    "visibility_cone",
    "sample_plant",
    "nominal_plant",
    "cone_grid",
    "default_grid",
    "roa_scan",
    "monte_carlo",
    "run_seeds",
    "verify_run",
    "additive_w_bound",
    "baseline_run",
    "tube_ordering",
]
