"""
Compares the controller with the simplified additive-disturbance baseline.
"""
import argparse

import numpy as np

from tormpc.command import Command, add_run_arguments
from tormpc.constants import EXIT_INFEASIBLE, EXIT_OK, ROA_CSV_NAME, RUN_CSV_NAME
from tormpc.controller import run_closed_loop
from tormpc.sim import (
    Scenario, additive_w_bound, baseline_run, default_grid, roa_scan, sample_plant, tube_ordering
)
from tormpc.sim.baseline import admissible_extent
from tormpc.sim.export import read_grid, write_roa_csv, write_run_csv


class Baseline(Command):
    """
    With ``--x0`` runs both controllers on the same sampled plant and compares fuel.

    Without it, scans both regions of attraction on the grid and reports their nesting.
    """

    name = "baseline"
    help = "Compare against the additive-disturbance baseline."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--x0", help="Initial state for a single comparison run.")
        parser.add_argument("--grid", help="CSV of initial states; default is the cone grid.")
        add_run_arguments(parser)

    def run(self) -> int:
        scenario = self.load_scenario()
        w = additive_w_bound(scenario.delta_s, scenario.state_poly, scenario.input_poly)
        print(f"w = {np.array2string(w, precision=6, separator=',')}")

        table = scenario.bounds_table()
        xi_bar = admissible_extent(scenario.state_poly, scenario.input_poly)
        ordered = tube_ordering(table, w, xi_bar, table.n_max)
        print(f"additive tube dominates at {int(ordered.sum())}/{ordered.size} steps")

        if self.config.x0 is not None:
            return self.compare_runs(scenario)
        return self.compare_roa(scenario, w)

    def compare_runs(self, scenario: Scenario) -> int:
        x0 = self.initial_state(scenario)
        plant = sample_plant(scenario, self.config.seed, self.config.mode)
        tor = run_closed_loop(scenario.ocp_template(), plant, x0, seed=self.config.seed)
        base = baseline_run(scenario, x0, seed=self.config.seed, plant=plant)

        for label, log in (("tormpc", tor), ("baseline", base)):
            if not log.converged:
                print(f"{label}: out of the region of attraction")
                continue
            path = self.config.output_dir / RUN_CSV_NAME.format(
                tag=f"{label}-seed{self.config.seed}"
            )
            write_run_csv(log, path, timing=self.config.timing)
            fuel = float(np.abs(log.inputs).sum())
            print(f"{label}: T_c={log.t_c}, N0*={log.n_star_initial}, fuel={fuel:.6g} -> {path}")

        return EXIT_OK if tor.converged else EXIT_INFEASIBLE

    def compare_roa(self, scenario: Scenario, w: np.ndarray) -> int:
        grid = read_grid(self.config.grid) if self.config.grid else default_grid(scenario)
        tor = roa_scan(scenario, grid, progress=True)
        base = roa_scan(scenario, grid, tube=scenario.additive_tube(w), progress=True)

        path = self.config.output_dir / f"baseline-{ROA_CSV_NAME}"
        write_roa_csv(base, path)
        nested = all(ours.feasible or not theirs.feasible for ours, theirs in zip(tor, base))
        print(
            f"feasible: tormpc {sum(p.feasible for p in tor)}/{len(tor)}, "
            f"baseline {sum(p.feasible for p in base)}/{len(base)}; "
            f"baseline inside tormpc: {nested} -> {path}"
        )
        return EXIT_OK
