"""
Command-line entry point.

Exit codes: 0 on success, 1 when the initial problem is infeasible or the LP
backend fails, 2 on a configuration error and 3 when a run breaks a controller guarantee.
"""
import json
import logging
import sys
import typing as t

import sentry_sdk
from pydantic import ValidationError

from tormpc import constants
from tormpc.command_manager import create_parser
from tormpc.errors import (
    DimensionError, EmptySetError, LpNumericFailure, ScenarioError, TheoremViolation,
    UnboundedSetError
)
from tormpc.models import CliConfig

logger = logging.getLogger(__name__)

SENTRY_RELEASE = f"tormpc@{constants.GIT_SHA}"


def configure_logging(verbose: int) -> None:
    base = logging.getLevelName(constants.LOG_LEVEL)
    if not isinstance(base, int):
        base = logging.WARNING

    logging.basicConfig(
        level=max(logging.DEBUG, base - 10 * verbose),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _report_validation(error: ValidationError) -> None:
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"])
        logger.error("%s: %s", location, item["msg"])


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    parser, commands = create_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    sentry_sdk.init(
        dsn=constants.SENTRY_DSN,
        release=SENTRY_RELEASE,
        environment=SENTRY_RELEASE
    )

    try:
        config = CliConfig(**{key: value for key, value in vars(args).items() if value is not None})
    except ValidationError as error:
        _report_validation(error)
        return constants.EXIT_CONFIG_ERROR

    command = commands[config.command](config)
    try:
        return command.run()
    except json.JSONDecodeError as error:
        logger.error(
            "%s: line %d, column %d: %s", config.scenario, error.lineno, error.colno, error.msg
        )
    except ValidationError as error:
        _report_validation(error)
    except (DimensionError, EmptySetError, UnboundedSetError, ScenarioError) as error:
        logger.error("%s", error)
    except LpNumericFailure as error:
        sentry_sdk.capture_exception(error)
        logger.error("LP backend failure: %s", error)
        return constants.EXIT_INFEASIBLE
    except TheoremViolation as error:
        sentry_sdk.capture_exception(error)
        logger.error("Theorem violation: %s", error)
        return constants.EXIT_THEOREM_VIOLATION

    return constants.EXIT_CONFIG_ERROR


def run() -> None:
    sys.exit(main())
