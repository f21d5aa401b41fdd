import os
import typing as t
from pathlib import Path

from pydantic import BaseModel, validator

from tormpc.constants import BUILTIN_SCENARIOS, OUTPUT_DIR, SamplingMode


class CliConfig(BaseModel):
    """Validated command-line options shared by every command."""

    command: str
    scenario: str = "hcw"
    output_dir: Path = Path(OUTPUT_DIR)
    seed: int = 0
    runs: int = 1
    points: t.Optional[int] = None
    n_max: t.Optional[int] = None
    facets: t.Optional[int] = None
    x0: t.Optional[t.List[float]] = None
    grid: t.Optional[Path] = None
    mode: SamplingMode = SamplingMode.UNIFORM
    method: str = "recursive"
    nominal: bool = False
    tie_break: bool = False
    timing: bool = False
    jobs: int = 1
    verbose: int = 0

    @validator("scenario")
    def validate_scenario(cls, value: str) -> str:
        """A built-in name or an existing file."""
        if value not in BUILTIN_SCENARIOS and not Path(value).is_file():
            raise ValueError(f"Scenario file '{value}' does not exist.")
        return value

    @validator("output_dir")
    def validate_output_dir(cls, value: Path) -> Path:
        value.mkdir(parents=True, exist_ok=True)
        if not os.access(value, os.W_OK):
            raise ValueError(f"Output directory '{value}' is not writable.")
        return value

    @validator("grid")
    def validate_grid(cls, value: t.Optional[Path]) -> t.Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"Grid file '{value}' does not exist.")
        return value

    @validator("x0", pre=True)
    def parse_x0(cls, value: t.Any) -> t.Any:
        """Accepts a comma-separated list such as "30,0,0,0,0,0"."""
        if isinstance(value, str):
            try:
                return [float(entry) for entry in value.split(",")]
            except ValueError:
                raise ValueError(f"Cannot read '{value}' as comma-separated numbers.")
        return value

    @validator("runs", "jobs", "n_max", "points")
    def validate_positive(cls, value: t.Optional[int]) -> t.Optional[int]:
        if value is not None and value < 1:
            raise ValueError("Must be at least 1.")
        return value

    @validator("facets")
    def validate_facets(cls, value: t.Optional[int]) -> t.Optional[int]:
        if value is not None and value < 3:
            raise ValueError("A cone needs at least 3 facets.")
        return value

    @validator("method")
    def validate_method(cls, value: str) -> str:
        if value not in ("recursive", "direct"):
            raise ValueError("Method must be 'recursive' or 'direct'.")
        return value
