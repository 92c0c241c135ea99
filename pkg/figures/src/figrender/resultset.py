"""Readers for the documented result-set formats.

Trajectory CSV: header `t,<col>,...`, 9-significant-digit values.
Event CSV: header `trial_id,label,time`. Metrics/manifest: JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class RenderError(RuntimeError):
    """A result set is missing a file or column a figure needs."""


@dataclass(frozen=True)
class ResultFiles:
    root: Path

    def trajectory(self, name: str) -> Path:
        return Path(self.root) / "trajectories" / f"{name}.csv"

    @property
    def events(self) -> Path:
        return Path(self.root) / "events.csv"

    @property
    def metrics(self) -> Path:
        return Path(self.root) / "metrics.json"

    @property
    def manifest(self) -> Path:
        return Path(self.root) / "manifest.json"


def read_trajectory(path, figure: str, required=()) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise RenderError(f"{figure}: missing trajectory file {path}")
    with path.open() as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    cols = {name: data[:, i] for i, name in enumerate(header)}
    for name in ("t", *required):
        if name not in cols:
            raise RenderError(f"{figure}: missing column {name!r} in {path.name}")
    return cols


def read_events(path, figure: str) -> list[tuple[int, str, np.ndarray]]:
    """Grouped (trial_id, label, times) in file order; an empty file is allowed."""
    path = Path(path)
    if not path.exists():
        raise RenderError(f"{figure}: missing events file {path}")
    groups: dict[tuple[int, str], list[float]] = {}
    order: list[tuple[int, str]] = []
    with path.open() as fh:
        header = fh.readline().strip()
        if header != "trial_id,label,time":
            raise RenderError(f"{figure}: unexpected events header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            trial, label, t = line.split(",")
            key = (int(trial), label)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(float(t))
    return [(k[0], k[1], np.asarray(groups[k])) for k in order]


def read_metrics(path, figure: str) -> dict:
    path = Path(path)
    if not path.exists():
        raise RenderError(f"{figure}: missing metrics file {path}")
    return json.loads(path.read_text())
