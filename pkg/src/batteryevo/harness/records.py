"""CSV persistence for robot logs, summaries and Pareto tables."""

from __future__ import annotations

import csv
from pathlib import Path

from ..moea.experiment import ROBOT_COLUMNS

SUMMARY_COLUMNS = ("experiment", "generation", "metric", "median", "q1", "q3")
PARETO_COLUMNS = ROBOT_COLUMNS + ("nondominated",)

_INT = {"run", "generation", "robot_id", "n_modules", "n_bricks", "n_joints",
        "branching", "alive_steps", "nondominated"}
_FLOAT = {"proportion", "speed_cms", "battery_remaining", "balance",
          "median", "q1", "q3"}


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(path, rows, columns) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])


def read_rows(path) -> list[dict]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = []
        for raw in csv.DictReader(fh):
            row = {}
            for k, v in raw.items():
                if k in _INT:
                    row[k] = int(v)
                elif k in _FLOAT:
                    row[k] = float(v)
                else:
                    row[k] = v
            rows.append(row)
    return rows


def write_robots(path, rows) -> None:
    write_rows(path, rows, ROBOT_COLUMNS)


def write_summary(path, rows) -> None:
    write_rows(path, rows, SUMMARY_COLUMNS)


def write_pareto(path, rows) -> None:
    write_rows(path, rows, PARETO_COLUMNS)
