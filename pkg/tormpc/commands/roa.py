"""
Scans the region of attraction over a grid of initial states.
"""
import argparse

from tormpc.command import Command
from tormpc.constants import EXIT_OK, ROA_CSV_NAME
from tormpc.sim import default_grid, roa_scan
from tormpc.sim.export import read_grid, write_roa_csv


class Roa(Command):
    """Writes one CSV row per grid point with its feasibility and N0*."""

    name = "roa"
    help = "Check the initial problem on a grid of initial states."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--grid", help="CSV of initial states (columns x1..xn); default is the cone grid."
        )

    def run(self) -> int:
        scenario = self.load_scenario()
        grid = read_grid(self.config.grid) if self.config.grid else default_grid(scenario)
        points = roa_scan(scenario, grid, progress=True)

        path = self.config.output_dir / ROA_CSV_NAME
        write_roa_csv(points, path)
        feasible = sum(point.feasible for point in points)
        print(f"{feasible}/{len(points)} initial states feasible -> {path}")
        return EXIT_OK
