from .cli_config import CliConfig
from .reports import CampaignAggregate, CampaignReport, RoaPoint, RunSummary
from .scenario_file import PolytopeModel, ScenarioFile, VisibilityModel

__all__ = [
    "CliConfig",
    "ScenarioFile",
    "PolytopeModel",
    "VisibilityModel",
    "RunSummary",
    "CampaignAggregate",
    "CampaignReport",
    "RoaPoint",
]
