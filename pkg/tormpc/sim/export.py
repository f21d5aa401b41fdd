"""Writers for the run CSV, the ROA CSV and the campaign JSON report. Read more in SCHEMA.md."""
import csv
import re
import typing as t
from pathlib import Path

import numpy as np

from tormpc.controller import RunLog
from tormpc.errors import ScenarioError
from tormpc.models import CampaignReport, RoaPoint


def _number(value: float) -> str:
    return f"{value:.10g}"


def run_rows(log: RunLog, timing: bool = False) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a run: one row per applied input plus the final state."""
    n = log.x0.size
    m = log.u_hist[0].size if log.u_hist else 0
    header = (
        ["k"]
        + [f"x{i + 1}" for i in range(n)]
        + [f"u{i + 1}" for i in range(m)]
        + ["N_star", "branch", "solve_ms"]
    )

    rows = []
    for k, x in enumerate(log.x_hist):
        row = [str(k)] + [_number(value) for value in x]
        if k < len(log.u_hist):
            row += [_number(value) for value in log.u_hist[k]]
            row += [str(log.n_star_hist[k]), log.branch_hist[k].value]
            row.append(_number(log.solve_ms_hist[k]) if timing else "")
        else:
            row += [""] * (m + 3)
        rows.append(row)
    return header, rows


def _write_csv(path: Path, header: list[str], rows: t.Iterable[list[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_run_csv(log: RunLog, path: Path, timing: bool = False) -> None:
    header, rows = run_rows(log, timing)
    _write_csv(path, header, rows)


def write_roa_csv(points: t.Sequence[RoaPoint], path: Path) -> None:
    n = len(points[0].x0) if points else 0
    header = [f"x{i + 1}" for i in range(n)] + ["feasible", "N0_star"]
    rows = [
        [_number(value) for value in point.x0]
        + [str(point.feasible).lower(), "" if point.n_star_0 is None else str(point.n_star_0)]
        for point in points
    ]
    _write_csv(path, header, rows)


def write_report_json(report: CampaignReport, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.json(indent=2) + "\n", encoding="utf-8")


def read_grid(path: Path) -> list[np.ndarray]:
    """Initial states from a CSV whose state columns are named x1, x2, …; an ROA CSV qualifies."""
    with path.open(encoding="utf-8", newline="") as file:
        reader = csv.DictReader(file)
        columns = [name for name in reader.fieldnames or [] if re.fullmatch(r"x\d+", name)]
        columns.sort(key=lambda name: int(name[1:]))
        if not columns:
            raise ScenarioError(f"Grid file {path} has no x1, x2, … columns.")
        return [np.array([float(row[name]) for name in columns]) for row in reader]
