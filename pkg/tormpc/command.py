"""
Base class for implementing sub-commands.
"""
import argparse
import logging

import numpy as np

from tormpc.constants import SamplingMode
from tormpc.errors import DimensionError
from tormpc.models import CliConfig
from tormpc.sim import Scenario, load_scenario

logger = logging.getLogger(__name__)


class Command:
    name: str
    help: str

    def __init__(self, config: CliConfig):
        self.config = config

    @classmethod
    def check_parameters(cls) -> None:
        if not hasattr(cls, "name"):
            raise ValueError(f"Command {cls.__name__} has not defined a name")

        if not hasattr(cls, "help"):
            raise ValueError(f"Command {cls.__name__} has not defined a help text")

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Add the flags specific to this command."""

    def run(self) -> int:
        """Execute the command and return the process exit code."""
        raise NotImplementedError

    def load_scenario(self) -> Scenario:
        """Scenario of ``--scenario`` patched with ``--nmax`` and ``--facets``."""
        overrides = {}
        if self.config.n_max is not None:
            overrides["n_max"] = self.config.n_max
        if self.config.facets is not None:
            overrides["visibility"] = {"facets": self.config.facets}

        scenario = load_scenario(self.config.scenario, overrides)
        logger.info("Loaded scenario '%s' (n=%d, m=%d)", scenario.name, scenario.n, scenario.m)
        return scenario

    def initial_state(self, scenario: Scenario) -> np.ndarray:
        if self.config.x0 is None:
            raise DimensionError("This command needs --x0.")

        x0 = np.asarray(self.config.x0, dtype=float)
        if x0.size != scenario.n:
            raise DimensionError(
                f"--x0 has {x0.size} entries, the scenario has {scenario.n} states."
            )
        return x0


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags of commands that sample plants."""
    parser.add_argument("--seed", type=int, default=0, help="Seed of the plant sampling.")
    parser.add_argument(
        "--mode",
        choices=[mode.value for mode in SamplingMode],
        default=SamplingMode.UNIFORM.value,
        help="Plant sampling mode.",
    )
    parser.add_argument(
        "--timing", action="store_true", help="Record solver wall-clock times in the output."
    )
