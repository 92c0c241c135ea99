import json
import subprocess
import sys

CLI = [sys.executable, "-m", "eventreg.cli"]


def run_cli(*args, env=None):
    return subprocess.run(CLI + list(args), capture_output=True, text=True, env=env)


def test_list_prints_nine_ids():
    r = run_cli("list")
    assert r.returncode == 0
    lines = [ln for ln in r.stdout.strip().splitlines() if ln]
    assert len(lines) == 9
    assert any(ln.startswith("reliability:") for ln in lines)


def test_validate_ok_and_writes_nothing(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "if-sync", "seed": 5}))
    before = set(tmp_path.rglob("*"))
    r = run_cli("validate", str(cfg))
    assert r.returncode == 0
    assert set(tmp_path.rglob("*")) == before


def test_validate_unknown_override_names_path(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "if-sync",
                               "overrides": {"definitely.not.here": 1}}))
    r = run_cli("validate", str(cfg))
    assert r.returncode == 1
    assert "definitely.not.here" in r.stderr


def test_validate_unknown_experiment(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "made-up"}))
    r = run_cli("validate", str(cfg))
    assert r.returncode == 1


def test_run_with_config_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "experiment": "if-sync", "seed": 9,
        "overrides": {"n_seeds": 3, "horizon_periods": 20.0},
    }))
    out = tmp_path / "out"
    r = run_cli("run", str(cfg), "--seed", "4", "--out", str(out))
    assert r.returncode == 0, r.stderr
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 4  # flag wins over the config seed
    assert "synced_fraction" in r.stdout


def test_reproduce_identical_stdout(tmp_path):
    args = ["reproduce", "ifsync", "--override", "n_seeds=3",
            "--override", "horizon_periods=20.0", "--force"]
    r1 = run_cli(*args, "--out", str(tmp_path / "a"))
    r2 = run_cli(*args, "--out", str(tmp_path / "b"))
    assert r1.returncode == 0 and r2.returncode == 0
    strip = lambda s: "\n".join(ln for ln in s.splitlines() if not ln.startswith("outputs:"))
    assert strip(r1.stdout) == strip(r2.stdout)


def test_collision_without_force_is_config_error(tmp_path):
    out = tmp_path / "out"
    args = ["reproduce", "ifsync", "--override", "n_seeds=2",
            "--override", "horizon_periods=20.0", "--out", str(out)]
    assert run_cli(*args).returncode == 0
    r = run_cli(*args)
    assert r.returncode == 1
    assert "force" in r.stderr


def test_env_var_sets_default_output_root(tmp_path):
    import os
    env = dict(os.environ)
    env["EVENTREG_OUT"] = str(tmp_path / "root")
    r = run_cli("reproduce", "ifsync", "--override", "n_seeds=2",
                "--override", "horizon_periods=20.0", env=env)
    assert r.returncode == 0
    assert (tmp_path / "root" / "if-sync" / "metrics.json").exists()
