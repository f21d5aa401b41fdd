"""
Computes the error-bound table of a scenario and stores it in the cache.
"""
import argparse

import numpy as np

from tormpc.bounds import closed_loop_interval, interval_product_radii
from tormpc.command import Command
from tormpc.constants import EXIT_OK


def report_steps(n_max: int) -> list[int]:
    """Steps 0, 1, 2, 5, 10, 20, 50, ... below n_max, and the last one."""
    steps = {n_max - 1}
    scale = 1
    while scale < n_max:
        steps.update(step for step in (scale, 2 * scale, 5 * scale) if step < n_max)
        scale *= 10
    steps.add(0)
    return sorted(steps)


class Precompute(Command):
    """Writes the bounds cache and prints the largest radius entry per step."""

    name = "precompute"
    help = "Compute and cache the error-bound table."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--method",
            choices=["recursive", "direct"],
            default="recursive",
            help="Closed-form recursion or iterated matrix-zonotope operator.",
        )

    def run(self) -> int:
        scenario = self.load_scenario()
        table = scenario.bounds_table(method=self.config.method)

        _, _, i_ak = closed_loop_interval(
            scenario.a_hat, scenario.b_hat, scenario.delta_a, scenario.delta_b, scenario.k_gain
        )
        products = interval_product_radii(i_ak, scenario.delta_s, table.n_max)

        print(f"{'j':>5} {'max radius':>14} {'max interval product':>22}")
        for j in report_steps(table.n_max):
            print(f"{j:>5} {np.max(table.radii[j]):>14.6g} {np.max(products[j]):>22.6g}")
        print(f"gain spot-check: {scenario.check_gain():.6f}")
        return EXIT_OK
