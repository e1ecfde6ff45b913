"""Strict readers for the simulator's delimited artifacts.

Three schemas are accepted, matching the simulator's published outputs:

  trials      seed,decision,big_steps
  trajectory  step,zeros,ones,empties,collisions
  comparison  seed,basic_steps,waiting_steps

A header mismatch names the offending column; files with no data rows
are rejected so no image is ever rendered from nothing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TRIALS_COLUMNS = ("seed", "decision", "big_steps")
TRAJECTORY_COLUMNS = ("step", "zeros", "ones", "empties", "collisions")
COMPARISON_COLUMNS = ("seed", "basic_steps", "waiting_steps")


class SchemaError(ValueError):
    """The CSV does not match the expected simulator schema."""


def _read_rows(path: str | Path, expected: tuple[str, ...]) -> list[dict[str, str]]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header {','.join(expected)}") from None
        for k, want in enumerate(expected):
            got = header[k].strip() if k < len(header) else "<missing>"
            if got != want:
                raise SchemaError(f"{path}: column {k + 1} is {got!r}, expected {want!r}")
        if len(header) > len(expected):
            raise SchemaError(f"{path}: unexpected extra column {header[len(expected)]!r}")
        rows = [dict(zip(expected, row)) for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


@dataclass(frozen=True)
class TrialsTable:
    seeds: np.ndarray
    decisions: list[str]       # "0", "1" or "timeout"
    big_steps: np.ndarray

    @property
    def decided_steps(self) -> np.ndarray:
        mask = np.array([d != "timeout" for d in self.decisions])
        return self.big_steps[mask]


def read_trials(path: str | Path) -> TrialsTable:
    rows = _read_rows(path, TRIALS_COLUMNS)
    for row in rows:
        if row["decision"] not in ("0", "1", "timeout"):
            raise SchemaError(f"{path}: bad decision value {row['decision']!r}")
    return TrialsTable(
        seeds=np.array([int(r["seed"]) for r in rows]),
        decisions=[r["decision"] for r in rows],
        big_steps=np.array([int(r["big_steps"]) for r in rows]),
    )


@dataclass(frozen=True)
class TrajectoryTable:
    steps: np.ndarray
    zeros: np.ndarray
    ones: np.ndarray
    empties: np.ndarray
    collisions: np.ndarray


def read_trajectory(path: str | Path) -> TrajectoryTable:
    rows = _read_rows(path, TRAJECTORY_COLUMNS)
    as_float = {
        name: np.array([float(r[name]) for r in rows])
        for name in TRAJECTORY_COLUMNS
    }
    return TrajectoryTable(
        steps=as_float["step"],
        zeros=as_float["zeros"],
        ones=as_float["ones"],
        empties=as_float["empties"],
        collisions=as_float["collisions"],
    )


@dataclass(frozen=True)
class ComparisonTable:
    seeds: np.ndarray
    basic_steps: np.ndarray
    waiting_steps: np.ndarray


def read_comparison(path: str | Path) -> ComparisonTable:
    rows = _read_rows(path, COMPARISON_COLUMNS)
    return ComparisonTable(
        seeds=np.array([int(r["seed"]) for r in rows]),
        basic_steps=np.array([int(r["basic_steps"]) for r in rows]),
        waiting_steps=np.array([int(r["waiting_steps"]) for r in rows]),
    )
