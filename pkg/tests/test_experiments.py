import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from eventreg.experiments import (
    CATALOG, ConfigError, ExperimentSpec, FIGURE_IDS,
    apply_override, reproduce_from_manifest, resolve_config, run_experiment,
)
from eventreg.io import read_events_csv, read_trajectory_csv


def tree_hash(root) -> str:
    h = hashlib.sha256()
    for p in sorted(Path(root).rglob("*")):
        if p.is_file():
            h.update(p.relative_to(root).as_posix().encode())
            h.update(p.read_bytes())
    return h.hexdigest()


def test_catalog_covers_every_figure():
    assert len(CATALOG) == 9
    assert set(FIGURE_IDS.values()) == set(CATALOG)


def test_unknown_experiment_rejected():
    with pytest.raises(ConfigError):
        resolve_config(ExperimentSpec(experiment="nope"))


def test_override_hygiene():
    cfg = {"a": {"b": 1.0}, "c": 2}
    apply_override(cfg, "a.b", 3.0)
    assert cfg["a"]["b"] == 3.0
    with pytest.raises(ConfigError):
        apply_override(cfg, "a.zzz", 1)
    with pytest.raises(ConfigError):
        apply_override(cfg, "zzz", 1)
    with pytest.raises(ConfigError):
        apply_override(cfg, "a", {"b": 4})
    # resolution fails before any simulation starts
    spec = ExperimentSpec(experiment="if-sync", overrides={"no.such.path": 1})
    with pytest.raises(ConfigError):
        resolve_config(spec)


def test_seed_precedence():
    spec = ExperimentSpec(experiment="if-sync", seed=77)
    assert resolve_config(spec)["seed"] == 77
    assert resolve_config(ExperimentSpec(experiment="if-sync"))["seed"] == 1


def test_grid_override():
    spec = ExperimentSpec(experiment="fn-rejection-dc", grid={"t_end": 120.0})
    assert resolve_config(spec)["grid"]["t_end"] == 120.0
    with pytest.raises(ConfigError):
        resolve_config(ExperimentSpec(experiment="fn-rejection-dc", grid={"bogus": 1.0}))


def test_output_collision_requires_force(tmp_path):
    out = tmp_path / "out"
    spec = ExperimentSpec(experiment="if-sync", out_dir=out,
                          overrides={"n_seeds": 3, "horizon_periods": 20.0})
    run_experiment(spec)
    with pytest.raises(ConfigError):
        run_experiment(spec)
    run_experiment(ExperimentSpec(experiment="if-sync", out_dir=out, force=True,
                                  overrides={"n_seeds": 3, "horizon_periods": 20.0}))


def test_rerun_is_bit_identical(tmp_path):
    ov = {"grid.t_end": 150.0}
    a = run_experiment(ExperimentSpec("fn-rejection-noise", seed=3, overrides=ov,
                                      out_dir=tmp_path / "a"))
    b = run_experiment(ExperimentSpec("fn-rejection-noise", seed=3, overrides=ov,
                                      out_dir=tmp_path / "b"))
    assert tree_hash(tmp_path / "a") == tree_hash(tmp_path / "b")


def test_manifest_reproduces_bit_identical(tmp_path):
    a = run_experiment(ExperimentSpec("fn-rejection-dc", seed=2,
                                      overrides={"grid.t_end": 300.0},
                                      out_dir=tmp_path / "a"))
    c = reproduce_from_manifest(a.manifest_path, out_dir=tmp_path / "c")
    assert tree_hash(tmp_path / "a") == tree_hash(tmp_path / "c")
    manifest = json.loads(Path(a.manifest_path).read_text())
    assert manifest["experiment"] == "fn-rejection-dc"
    assert manifest["config"]["grid"]["t_end"] == 300.0


def test_result_files_parse(tmp_path):
    rs = run_experiment(ExperimentSpec("fn-rejection-dc", out_dir=tmp_path / "r",
                                       overrides={"grid.t_end": 300.0}))
    trains = read_events_csv(rs.events_path)
    assert any(tr.label == "presynaptic" for tr in trains)
    t, cols = read_trajectory_csv(rs.trajectories["voltages"])
    assert "v_unperturbed" in cols
    assert len(t) == len(cols["v_unperturbed"])
    assert np.all(np.diff(t) > 0)
    metrics = json.loads(Path(rs.metrics_path).read_text())
    assert all(isinstance(v, float) for v in metrics.values())


def test_event_rejection_zero_mismatch_is_exact(tmp_path):
    rs = run_experiment(ExperimentSpec("event-rejection", out_dir=tmp_path / "er"))
    m = rs.metrics
    assert m["delta_0_spurious"] == 0
    assert m["delta_0_baseline_matched"] == 1.0
    assert m["delta_0_max_voltage_diff"] < 1e-6
    # the paper-scale instance: every presynaptic spike triggers a spurious event
    assert m["presyn_spikes"] == 4
    assert m["uncompensated_spurious"] == m["presyn_spikes"]


def test_presets_addressable_from_configs(tmp_path):
    # named presets are config fields; unknown names are configuration errors
    assert resolve_config(ExperimentSpec("reliability"))["neuron_preset"] == "fn-classic"
    assert resolve_config(ExperimentSpec("event-pendulum"))["hco_preset"] == "paper-hco"
    with pytest.raises(ConfigError):
        run_experiment(ExperimentSpec("fn-rejection-dc", out_dir=tmp_path / "x",
                                      overrides={"neuron_preset": "nope"}))
    with pytest.raises(ConfigError):
        run_experiment(ExperimentSpec("event-pendulum", out_dir=tmp_path / "y",
                                      overrides={"hco_preset": "fn-classic"}))
