"""
Solves the initial time-optimal problem for one initial state.
"""
import argparse
from dataclasses import replace

import numpy as np

from tormpc.command import Command
from tormpc.constants import EXIT_INFEASIBLE, EXIT_OK
from tormpc.ocp import solve_min_time
from tormpc.sets import Zonotope


class Solve(Command):
    """Prints the minimum horizon and the first input, or exits with 1 when infeasible."""

    name = "solve"
    help = "Solve the initial problem with z(N) = 0."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--x0", required=True, help="Initial state, comma separated.")
        parser.add_argument(
            "--tie-break", dest="tie_break", action="store_true",
            help="Minimise Σ|ξ| among the feasible trajectories.",
        )

    def run(self) -> int:
        scenario = self.load_scenario()
        x0 = self.initial_state(scenario)
        spec = scenario.ocp_template(tie_break=self.config.tie_break)
        solution = solve_min_time(replace(spec, x0=x0, terminal_set=Zonotope.origin(spec.n)))

        if not solution.solved:
            print(f"infeasible up to N={spec.n_max}")
            return EXIT_INFEASIBLE

        u0 = np.array2string(solution.v_seq[0], precision=6, separator=",")
        print(f"N0*={solution.horizon} u0={u0}")
        return EXIT_OK
