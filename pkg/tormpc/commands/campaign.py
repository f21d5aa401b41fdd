"""
Runs a Monte-Carlo campaign over sampled plants and initial states.
"""
import argparse

import numpy as np

from tormpc.command import Command, add_run_arguments
from tormpc.constants import EXIT_OK, REPORT_JSON_NAME
from tormpc.sim import default_grid, monte_carlo
from tormpc.sim.export import read_grid, write_report_json


class Campaign(Command):
    """Writes the JSON report; every run is checked against the controller guarantees."""

    name = "campaign"
    help = "Run many closed loops on sampled plants."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--runs", type=int, default=1, help="Runs per initial state.")
        parser.add_argument("--grid", help="CSV of initial states; default is the cone grid.")
        parser.add_argument(
            "--points", type=int, help="Use this many grid points, drawn with the seed."
        )
        parser.add_argument("--jobs", type=int, default=1, help="Parallel worker processes.")
        add_run_arguments(parser)

    def run(self) -> int:
        scenario = self.load_scenario()
        grid = read_grid(self.config.grid) if self.config.grid else default_grid(scenario)
        if self.config.points is not None and self.config.points < len(grid):
            rng = np.random.default_rng(self.config.seed)
            chosen = np.sort(rng.choice(len(grid), size=self.config.points, replace=False))
            grid = [grid[i] for i in chosen]

        template = scenario.ocp_template()
        report = monte_carlo(
            scenario,
            grid,
            self.config.runs,
            self.config.seed,
            template=template,
            mode=self.config.mode,
            jobs=self.config.jobs,
            timing=self.config.timing,
            progress=True,
        )

        path = self.config.output_dir / REPORT_JSON_NAME
        write_report_json(report, path)
        aggregate = report.aggregate
        print(
            f"{aggregate.runs} runs, {100 * aggregate.feasible_fraction:.1f}% feasible, "
            f"mean final position error {aggregate.mean_final_position_error} -> {path}"
        )
        return EXIT_OK
