"""
Module to dynamically build the command-line parser from the commands directory.
"""
import argparse
import importlib
import inspect
import typing as t
from pathlib import Path

from tormpc.command import Command

COMMANDS_DIRECTORY = Path(__file__).parent / "commands"


def is_command_class(member: t.Any) -> bool:
    return inspect.isclass(member) and issubclass(member, Command) and member != Command


def command_classes() -> t.Iterator[type[Command]]:
    for module_path in sorted(COMMANDS_DIRECTORY.glob("*.py")):
        if module_path.stem.startswith("_"):
            continue

        command_module = importlib.import_module(f"tormpc.commands.{module_path.stem}")
        for _member_name, member in inspect.getmembers(command_module):
            if is_command_class(member) and member.__module__ == command_module.__name__:
                member.check_parameters()
                yield member


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scenario", default="hcw", help="Scenario JSON file, or 'hcw' for the built-in one."
    )
    parser.add_argument("--output-dir", dest="output_dir", help="Directory for result files.")
    parser.add_argument("--nmax", dest="n_max", type=int, help="Override the horizon limit.")
    parser.add_argument("--facets", type=int, help="Override the visibility-cone facet count.")
    parser.add_argument(
        "--verbose", action="count", default=0, help="Repeat for more log output."
    )


def create_parser() -> tuple[argparse.ArgumentParser, dict[str, type[Command]]]:
    parser = argparse.ArgumentParser(
        prog="tormpc", description="Time-optimal robust MPC for interval-uncertain linear systems."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    commands = {}
    for command in command_classes():
        subparser = subparsers.add_parser(command.name, help=command.help)
        add_common_arguments(subparser)
        command.add_arguments(subparser)
        commands[command.name] = command

    return parser, commands
