import typing as t

from pydantic import BaseModel, root_validator, validator

Matrix = t.List[t.List[float]]


def _shape(matrix: Matrix) -> tuple[int, int]:
    return len(matrix), len(matrix[0]) if matrix else 0


class PolytopeModel(BaseModel):
    """Half-space description {x : Hx <= b}."""

    H: Matrix
    b: t.List[float]

    @validator("H")
    def validate_rectangular(cls, value: Matrix) -> Matrix:
        """Every row of H has the same length."""
        if not value:
            raise ValueError("H needs at least one row.")
        if len({len(row) for row in value}) != 1:
            raise ValueError("Rows of H have different lengths.")
        return value

    @root_validator(skip_on_failure=True)
    def validate_rows(cls, values: dict[str, t.Any]) -> dict[str, t.Any]:
        if len(values["H"]) != len(values["b"]):
            raise ValueError("H and b must have the same number of rows.")
        return values


class VisibilityModel(BaseModel):
    """Polyhedral visibility cone along +x with a velocity box, expanded into a state polytope."""

    half_angle_deg: float = 60.0
    facets: int = 8
    radial_cap: float = 70.0
    max_speed: float = 0.4

    @validator("half_angle_deg")
    def validate_angle(cls, value: float) -> float:
        if not 0 < value < 90:
            raise ValueError("Half angle must lie strictly between 0 and 90 degrees.")
        return value

    @validator("facets")
    def validate_facets(cls, value: int) -> int:
        if value < 3:
            raise ValueError("A cone needs at least 3 facets.")
        return value

    @validator("radial_cap", "max_speed")
    def validate_positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("Must be positive.")
        return value


class ScenarioFile(BaseModel):
    """Schema model for a scenario file. Read more in SCHEMA.md."""

    name: str = "scenario"
    a_hat: Matrix
    b_hat: Matrix
    delta_a: Matrix
    delta_b: Matrix
    k_gain: Matrix
    state_poly: t.Optional[PolytopeModel] = None
    visibility: t.Optional[VisibilityModel] = None
    input_poly: PolytopeModel
    n_max: t.Optional[int] = None
    dt: float = 1.0
    position_axes: t.Optional[t.List[int]] = None
    velocity_axes: t.Optional[t.List[int]] = None

    class Config:
        extra = "forbid"

    @validator("a_hat", "b_hat", "delta_a", "delta_b", "k_gain")
    def validate_matrix(cls, value: Matrix) -> Matrix:
        """Matrices are nonempty and rectangular."""
        if not value or not value[0]:
            raise ValueError("Matrix must not be empty.")
        if len({len(row) for row in value}) != 1:
            raise ValueError("Matrix rows have different lengths.")
        return value

    @validator("delta_a", "delta_b")
    def validate_radius(cls, value: Matrix) -> Matrix:
        if any(entry < 0 for row in value for entry in row):
            raise ValueError("Uncertainty radii must be nonnegative.")
        return value

    @validator("n_max")
    def validate_n_max(cls, value: t.Optional[int]) -> t.Optional[int]:
        if value is not None and value < 1:
            raise ValueError("n_max must be at least 1.")
        return value

    @root_validator(skip_on_failure=True)
    def validate_dimensions(cls, values: dict[str, t.Any]) -> dict[str, t.Any]:
        """All matrices agree on n and m, and exactly one state-set description is given."""
        n, m = _shape(values["b_hat"])
        expected = {
            "a_hat": (n, n),
            "delta_a": (n, n),
            "delta_b": (n, m),
            "k_gain": (m, n),
        }
        for key, shape in expected.items():
            if _shape(values[key]) != shape:
                raise ValueError(f"{key} has shape {_shape(values[key])}, expected {shape}.")

        if (values.get("state_poly") is None) == (values.get("visibility") is None):
            raise ValueError("Give exactly one of 'state_poly' and 'visibility'.")
        if values.get("visibility") is not None and n != 6:
            raise ValueError("'visibility' describes a 6-state relative-motion model.")
        if values.get("state_poly") is not None and _shape(values["state_poly"].H)[1] != n:
            raise ValueError(f"state_poly must act on {n} states.")
        if _shape(values["input_poly"].H)[1] != m:
            raise ValueError(f"input_poly must act on {m} inputs.")

        for key in ("position_axes", "velocity_axes"):
            if any(not 0 <= axis < n for axis in values.get(key) or []):
                raise ValueError(f"{key} must index states 0..{n - 1}.")

        return values
