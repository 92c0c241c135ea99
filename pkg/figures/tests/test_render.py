"""Renderer unit tests on synthetic result sets (no simulation needed)."""

import json
from pathlib import Path

import pytest

from figrender import FigureJob, RenderError, render


def make_resultset(root: Path, trajectories: dict, events_rows: list, manifest=None,
                   metrics=None):
    (root / "trajectories").mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in trajectories.items():
        lines = [",".join(header)]
        lines += [",".join(f"{v:.9g}" for v in row) for row in rows]
        (root / "trajectories" / f"{name}.csv").write_text("\n".join(lines) + "\n")
    lines = ["trial_id,label,time"]
    lines += [f"{t},{label},{time:.9g}" for t, label, time in events_rows]
    (root / "events.csv").write_text("\n".join(lines) + "\n")
    (root / "metrics.json").write_text(json.dumps(metrics or {}))
    (root / "manifest.json").write_text(json.dumps(manifest or {}))


def synthetic_fig1(root: Path, n_trials=4):
    rows = [(float(k) / 10, 0.1 * k, -0.1 * k) for k in range(30)]
    make_resultset(
        root,
        {"protocol_b": (["t", "v0", "v1"], rows)},
        [(trial, label, 1.0 + trial + 0.01 * i)
         for label in ("A", "B") for trial in range(n_trials) for i in range(3)],
    )


def test_fig1_reports_raster_rows(tmp_path):
    synthetic_fig1(tmp_path / "rs")
    report = render(FigureJob("fig1", tmp_path / "rs", tmp_path / "out.svg"))
    assert report["raster_rows"] == {"A": 4, "B": 4}
    out = tmp_path / "out.svg"
    assert out.exists() and out.stat().st_size > 1000
    assert b"<svg" in out.read_bytes()[:200]


def test_empty_event_csv_renders_without_crash(tmp_path):
    root = tmp_path / "rs"
    rows = [(float(k) / 10, 0.1 * k) for k in range(10)]
    make_resultset(root, {"protocol_b": (["t", "v0"], rows)}, [])
    report = render(FigureJob("fig1", root, tmp_path / "out.svg"))
    assert report["raster_rows"] == {"A": 0, "B": 0}
    assert (tmp_path / "out.svg").stat().st_size > 0


def test_missing_column_names_figure_and_column(tmp_path):
    root = tmp_path / "rs"
    rows = [(float(k) / 10, 0.0, 0.0) for k in range(10)]
    make_resultset(root, {"angles": (["t", "theta", "wrong"], rows)},
                   [], manifest={"config": {"resets": {
                       "large": {"time": 1.0}, "small": {"time": 2.0}}}})
    with pytest.raises(RenderError) as err:
        render(FigureJob("fig3", root, tmp_path / "out.svg"))
    msg = str(err.value)
    assert "fig3" in msg and "theta_r" in msg


def test_unknown_figure_and_non_vector_output(tmp_path):
    synthetic_fig1(tmp_path / "rs")
    with pytest.raises(RenderError):
        render(FigureJob("fig99", tmp_path / "rs", tmp_path / "out.svg"))
    with pytest.raises(RenderError):
        render(FigureJob("fig1", tmp_path / "rs", tmp_path / "out.png"))


def test_rendering_is_read_only(tmp_path):
    root = tmp_path / "rs"
    synthetic_fig1(root)
    before = {p: p.read_bytes() for p in root.rglob("*") if p.is_file()}
    render(FigureJob("fig1", root, tmp_path / "out.svg"))
    after = {p: p.read_bytes() for p in root.rglob("*") if p.is_file()}
    assert before == after
