"""
Runs the closed loop from one initial state on one sampled plant.
"""
import argparse

from tormpc.command import Command, add_run_arguments
from tormpc.constants import EXIT_INFEASIBLE, EXIT_OK, RUN_CSV_NAME
from tormpc.controller import run_closed_loop
from tormpc.sim import nominal_plant, sample_plant, verify_run
from tormpc.sim.export import write_run_csv


class Simulate(Command):
    """Writes the run CSV and prints a one-line summary."""

    name = "simulate"
    help = "Run the closed loop on a sampled plant."

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--x0", required=True, help="Initial state, comma separated.")
        parser.add_argument(
            "--nominal", action="store_true", help="Use the nominal plant instead of a sample."
        )
        add_run_arguments(parser)

    def run(self) -> int:
        scenario = self.load_scenario()
        x0 = self.initial_state(scenario)
        template = scenario.ocp_template()
        if self.config.nominal:
            plant = nominal_plant(scenario)
        else:
            plant = sample_plant(scenario, self.config.seed, self.config.mode)

        log = run_closed_loop(template, plant, x0, seed=self.config.seed)
        if not log.converged:
            print("out of the region of attraction: initial problem infeasible")
            return EXIT_INFEASIBLE

        verify_run(template, log)
        tag = "nominal" if self.config.nominal else f"seed{self.config.seed}"
        path = self.config.output_dir / RUN_CSV_NAME.format(tag=tag)
        write_run_csv(log, path, timing=self.config.timing)

        print(f"T_c={log.t_c}, N0*={log.n_star_initial}, T_l={log.t_l} -> {path}")
        return EXIT_OK
