"""One renderer per figure id; all output is vector (SVG or PDF)."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .resultset import RenderError, ResultFiles, read_events, read_metrics, read_trajectory

VECTOR_SUFFIXES = {".svg", ".pdf"}


@dataclass(frozen=True)
class FigureJob:
    figure: str
    in_dir: Path
    out_path: Path
    style: dict = field(default_factory=dict)


def _style(job: FigureJob, key: str, default):
    return job.style.get(key, default)


def _raster(ax, rows, lw=0.6):
    """One horizontal row per (row_index, times); returns the row count."""
    for offset, times in rows:
        if len(times):
            ax.eventplot(times, lineoffsets=offset, linelengths=0.8, linewidth=lw)
    ax.set_ylabel("trial")
    return len(rows)


def _traces(ax, cols, names, figure, styles=None, lw=0.8):
    for i, name in enumerate(names):
        if name not in cols:
            raise RenderError(f"{figure}: missing column {name!r}")
        fmt = (styles or {}).get(name, "-")
        ax.plot(cols["t"], cols[name], fmt, lw=lw, label=name)
    ax.legend(fontsize=7, loc="upper right")


def _render_fig1(files: ResultFiles, job: FigureJob):
    cols = read_trajectory(files.trajectory("protocol_b"), "fig1", required=("v0",))
    events = read_events(files.events, "fig1")
    fig, axes = plt.subplots(3, 1, figsize=(7, 6.5), sharex=True)
    n_overlay = 0
    for name in cols:
        if name.startswith("v"):
            axes[0].plot(cols["t"], cols[name], lw=0.4)
            n_overlay += 1
    axes[0].set_ylabel("v (noise protocol)")
    rows_a = _raster(axes[1], [(trial, times) for trial, label, times in events
                               if label == "A"])
    axes[1].set_title("constant step", fontsize=8)
    rows_b = _raster(axes[2], [(trial, times) for trial, label, times in events
                               if label == "B"])
    axes[2].set_title("frozen noise", fontsize=8)
    axes[2].set_xlabel("t")
    return fig, {"panels": 3, "raster_rows": {"A": rows_a, "B": rows_b},
                 "overlaid_traces": n_overlay}


def _render_fig3(files: ResultFiles, job: FigureJob):
    cols = read_trajectory(files.trajectory("angles"), "fig3",
                           required=("theta", "theta_r", "error"))
    import json
    manifest = json.loads(files.manifest.read_text())
    resets = [manifest["config"]["resets"][k]["time"] for k in ("large", "small")]
    fig, axes = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    _traces(axes[0], cols, ["theta", "theta_r"], "fig3", {"theta_r": "--"})
    for tr in resets:
        for ax in axes:
            ax.axvline(tr, color="k", ls=":", lw=0.8)
    axes[0].set_ylabel("angle")
    axes[1].plot(cols["t"], cols["error"], lw=0.8)
    axes[1].set_ylabel("tracking error")
    axes[1].set_xlabel("t")
    return fig, {"panels": 2, "raster_rows": {}, "reset_markers": resets}


def _render_rejection(files: ResultFiles, job: FigureJob, figure: str, zoom=None):
    cols = read_trajectory(files.trajectory("voltages"), figure,
                           required=("v_unperturbed", "v_disturbed", "v_compensated"))
    fig, axes = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    _traces(axes[0], cols, ["v_disturbed"], figure)
    _traces(axes[1], cols, ["v_unperturbed", "v_compensated"], figure,
            {"v_compensated": "--"})
    axes[0].set_ylabel("v")
    axes[1].set_ylabel("v")
    axes[1].set_xlabel("t")
    if zoom:
        for ax in axes:
            ax.set_xlim(*zoom)
    return fig, {"panels": 2, "raster_rows": {}}


def _render_fig5(files, job):
    return _render_rejection(files, job, "fig5", zoom=(300.0, 500.0))


def _render_fig6(files, job):
    return _render_rejection(files, job, "fig6")


def _render_fig7(files: ResultFiles, job: FigureJob):
    cols = read_trajectory(files.trajectory("angles"), "fig7",
                           required=("theta_1", "theta_2", "theta_single", "drive"))
    fig, axes = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    _traces(axes[0], cols, ["theta_single", "drive"], "fig7", {"drive": ":"})
    _traces(axes[1], cols, ["theta_1", "theta_2"], "fig7", {"theta_2": "--"})
    axes[0].set_ylabel("angle")
    axes[1].set_ylabel("angle")
    axes[1].set_xlabel("t")
    return fig, {"panels": 2, "raster_rows": {}}


def _render_fig8(files: ResultFiles, job: FigureJob):
    cols = read_trajectory(files.trajectory("voltages"), "fig8",
                           required=("v1_uncoupled", "v2_uncoupled",
                                     "v1_synaptic", "v2_synaptic"))
    metrics = read_metrics(files.metrics, "fig8")
    fig, axes = plt.subplots(3, 1, figsize=(7, 6.5))
    _traces(axes[0], cols, ["v1_uncoupled", "v2_uncoupled"], "fig8", {"v2_uncoupled": "--"})
    axes[0].set_title("no coupling", fontsize=8)
    _traces(axes[1], cols, ["v1_synaptic", "v2_synaptic"], "fig8", {"v2_synaptic": "--"})
    axes[1].set_title("synaptic coupling", fontsize=8)
    gains, fracs, rmss = [], [], []
    for key, value in sorted(metrics.items()):
        if key.startswith("diffusive_") and key.endswith("_matched_fraction"):
            g = key.split("_")[1]
            if g == "threshold":
                continue
            gains.append(float(g))
            fracs.append(value)
            rmss.append(metrics[f"diffusive_{g}_voltage_rms"])
    order = sorted(range(len(gains)), key=lambda i: gains[i])
    gains = [gains[i] for i in order]
    axes[2].semilogx(gains, [fracs[i] for i in order], "o-", label="matched fraction")
    axes[2].semilogx(gains, [rmss[i] for i in order], "s--", label="voltage rms distance")
    axes[2].axhline(metrics["synaptic_voltage_rms"], color="k", ls=":", lw=0.8,
                    label="synaptic rms")
    axes[2].set_xlabel("diffusive gain")
    axes[2].legend(fontsize=7)
    return fig, {"panels": 3, "raster_rows": {}, "diffusive_points": len(gains)}


def _render_fig10(files: ResultFiles, job: FigureJob):
    cols = read_trajectory(files.trajectory("voltages"), "fig10",
                           required=("v_baseline", "v_uncompensated"))
    events = read_events(files.events, "fig10")
    fig, axes = plt.subplots(2, 1, figsize=(7.5, 5.5))
    delta_cols = [c for c in cols if c.startswith("v_delta_")]
    _traces(axes[0], cols, ["v_baseline", "v_uncompensated"] + delta_cols, "fig10",
            {c: "--" for c in delta_cols}, lw=0.5)
    axes[0].set_ylabel("v")
    rows = []
    labels = []
    for offset, (trial, label, times) in enumerate(events):
        rows.append((offset, times))
        labels.append(label)
    n = _raster(axes[1], rows)
    axes[1].set_yticks(range(len(labels)))
    axes[1].set_yticklabels(labels, fontsize=6)
    axes[1].set_xlabel("t")
    return fig, {"panels": 2, "raster_rows": {"event_trains": n}}


def _render_fig12(files: ResultFiles, job: FigureJob):
    cols = read_trajectory(files.trajectory("closed_loop"), "fig12",
                           required=("theta", "v_1", "v_3"))
    events = read_events(files.events, "fig12")
    import json
    switch = json.loads(files.manifest.read_text())["config"]["switch_time"]
    fig, axes = plt.subplots(3, 1, figsize=(7.5, 6.5), sharex=True)
    axes[0].plot(cols["t"], cols["theta"], lw=0.8)
    axes[0].axvline(switch, color="k", ls="--", lw=0.8)
    axes[0].set_ylabel("theta")
    _traces(axes[1], cols, ["v_1", "v_3"], "fig12", {"v_3": "--"}, lw=0.5)
    axes[1].axvline(switch, color="k", ls="--", lw=0.8)
    axes[1].set_ylabel("v")
    n = _raster(axes[2], [(i, times) for i, (_, label, times) in enumerate(events)])
    axes[2].set_yticks(range(len(events)))
    axes[2].set_yticklabels([label for _, label, _ in events], fontsize=7)
    axes[2].set_xlabel("t")
    return fig, {"panels": 3, "raster_rows": {"event_trains": n}, "switch_time": switch}


def _render_ifsync(files: ResultFiles, job: FigureJob):
    events = read_events(files.events, "ifsync")
    metrics = read_metrics(files.metrics, "ifsync")
    fig, ax = plt.subplots(figsize=(7, 3.5))
    n = _raster(ax, [(trial_and_unit(label, trial), times)
                     for trial, label, times in events])
    ax.set_ylabel("unit")
    ax.set_xlabel("t")
    ax.set_title(f"synced {int(metrics['synced_count'])}/{int(metrics['n_seeds'])} seeds "
                 "within 50 natural periods", fontsize=8)
    return fig, {"panels": 1, "raster_rows": {"units": n}}


def trial_and_unit(label: str, trial: int) -> int:
    if label.startswith("unit_"):
        return int(label.split("_")[1])
    return trial


FIGURES = {
    "fig1": _render_fig1,
    "fig3": _render_fig3,
    "fig5": _render_fig5,
    "fig6": _render_fig6,
    "fig7": _render_fig7,
    "fig8": _render_fig8,
    "fig10": _render_fig10,
    "fig12": _render_fig12,
    "ifsync": _render_ifsync,
}


def render(job: FigureJob) -> dict:
    """Render one figure job; returns a report with panel and raster-row counts."""
    if job.figure not in FIGURES:
        raise RenderError(f"unknown figure id {job.figure!r}; known: {sorted(FIGURES)}")
    out = Path(job.out_path)
    if out.suffix not in VECTOR_SUFFIXES:
        raise RenderError(f"{job.figure}: output must be vector ({sorted(VECTOR_SUFFIXES)})")
    files = ResultFiles(Path(job.in_dir))
    fig, report = FIGURES[job.figure](files, job)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    report.update({"figure": job.figure, "out_path": str(out)})
    return report
