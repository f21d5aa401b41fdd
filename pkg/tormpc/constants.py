import os
from enum import Enum

from dotenv import load_dotenv

load_dotenv()


OUTPUT_DIR = os.getenv("TORMPC_OUTPUT_DIR", "output")
CACHE_DIR = os.getenv("TORMPC_CACHE_DIR", ".cache/tormpc")
N_MAX = int(os.getenv("TORMPC_N_MAX", "200"))
LOG_LEVEL = os.getenv("TORMPC_LOG_LEVEL", "WARNING").upper()

BUILTIN_SCENARIOS = ("hcw",)

GIT_SHA = os.getenv("GIT_SHA", "dev")
SENTRY_DSN = os.getenv("TORMPC_SENTRY_DSN")

# LP feasibility slack handed to the backend
LP_FEASIBILITY_TOL = 1e-8
# Independent re-check of returned solutions
VERIFY_TOL = 1e-7
MEMBERSHIP_TOL = 1e-7

BOUNDS_CACHE_VERSION = 1

RUN_CSV_NAME = "run-{tag}.csv"
ROA_CSV_NAME = "roa.csv"
REPORT_JSON_NAME = "report.json"

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_CONFIG_ERROR = 2
EXIT_THEOREM_VIOLATION = 3


class Branch(Enum):
    """Which line of the closed-loop algorithm produced a step. Read more in SCHEMA.md."""

    INITIAL = "initial"
    RESET = "reset"
    ENLARGE = "enlarge"


class SamplingMode(Enum):
    UNIFORM = "uniform"
    VERTEX = "vertex"


class RunStatus(Enum):
    CONVERGED = "converged"
    OUT_OF_ROA = "out-of-roa"


class TubeKind(Enum):
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"
