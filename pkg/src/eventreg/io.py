"""Deterministic readers/writers for the persisted result formats.

Trajectory CSV: first column t, then the declared columns, header row,
values with 9 significant digits. Event CSV: columns trial_id,label,time.
Metrics and manifests are JSON with sorted keys.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .events import EventTrain

__all__ = [
    "format_value", "write_trajectory_csv", "read_trajectory_csv",
    "write_events_csv", "read_events_csv", "write_json", "read_json",
]


def format_value(x: float) -> str:
    return f"{float(x):.9g}"


def write_trajectory_csv(path, t: np.ndarray, columns: dict[str, np.ndarray]) -> Path:
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    lines = ["t," + ",".join(names)]
    for i, ti in enumerate(np.asarray(t, dtype=float)):
        lines.append(",".join([format_value(ti)] + [format_value(a[i]) for a in arrays]))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_trajectory_csv(path):
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    cols = {name: data[:, i] for i, name in enumerate(header)}
    t = cols.pop("t")
    return t, cols


def write_events_csv(path, trains: list[EventTrain]) -> Path:
    path = Path(path)
    lines = ["trial_id,label,time"]
    for tr in trains:
        for t in tr.times:
            lines.append(f"{tr.trial_id},{tr.label},{format_value(t)}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_events_csv(path) -> list[EventTrain]:
    path = Path(path)
    groups: dict[tuple[int, str], list[float]] = {}
    order: list[tuple[int, str]] = []
    with path.open() as fh:
        header = fh.readline().strip()
        if header != "trial_id,label,time":
            raise ValueError(f"unexpected event CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            trial_s, label, time_s = line.split(",")
            key = (int(trial_s), label)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(float(time_s))
    return [EventTrain(trial_id=k[0], label=k[1], times=tuple(groups[k])) for k in order]


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text())
