import typing as t

from pydantic import BaseModel, Field, validator


class RunSummary(BaseModel):
    """One closed-loop run of a campaign."""

    seed: int
    x0: t.List[float]
    status: str
    n_star_0: t.Optional[int]
    t_c: t.Optional[int]
    t_l: t.Optional[int]
    enlargements: int = 0
    max_violation: float = 0.0
    final_position_error: t.Optional[float]
    final_velocity_error: t.Optional[float]
    fuel: t.Optional[float]
    final_set_position_radius: t.Optional[float]
    final_set_velocity_radius: t.Optional[float]
    solve_ms_mean: t.Optional[float]
    solve_ms_max: t.Optional[float]


class CampaignAggregate(BaseModel):
    runs: int
    feasible_fraction: float = Field(ge=0.0, le=1.0)
    mean_final_position_error: t.Optional[float]
    mean_final_velocity_error: t.Optional[float]
    mean_fuel: t.Optional[float]
    mean_final_set_position_radius: t.Optional[float]
    mean_final_set_velocity_radius: t.Optional[float]
    mean_solve_ms: t.Optional[float]
    max_violation: float = 0.0


class CampaignReport(BaseModel):
    """Schema model of the campaign JSON report. Read more in SCHEMA.md."""

    scenario: str
    tube: str
    master_seed: int
    runs_per_x0: int
    runs: t.List[RunSummary]
    aggregate: CampaignAggregate

    @validator("runs")
    def validate_runs(cls, runs: t.List[RunSummary]) -> t.List[RunSummary]:
        """Accepted runs never break a constraint."""
        for run in runs:
            if run.status == "converged" and run.max_violation > 1e-6:
                raise ValueError(f"Run with seed {run.seed} breaks its constraints.")
        return runs


class RoaPoint(BaseModel):
    """One row of an ROA scan."""

    x0: t.List[float]
    feasible: bool
    n_star_0: t.Optional[int]
