"""Command-line front end: run experiments, list the catalog, validate configs.

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (
    CATALOG, ConfigError, ExperimentError, ExperimentSpec, FIGURE_IDS,
    resolve_config, run_experiment,
)
from .io import read_json


def _parse_override(item: str):
    if "=" not in item:
        raise ConfigError(f"override {item!r} must look like path=value")
    path, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path.strip(), value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventreg",
        description="Seeded trajectory/event regulation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a config file")
    run.add_argument("config", type=Path)
    validate = sub.add_parser("validate", help="check a config without simulating")
    validate.add_argument("config", type=Path)
    reproduce = sub.add_parser("reproduce", help="run a figure scenario by id")
    reproduce.add_argument("figure", choices=sorted(FIGURE_IDS))
    lst = sub.add_parser("list", help="list catalog experiment ids")

    for p in (run, reproduce):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--override", action="append", default=[],
                       metavar="PATH=VALUE", help="dotted-path config override")
        p.add_argument("--force", action="store_true",
                       help="overwrite a non-empty output directory")
    return parser


def _spec_from_args(args, experiment: str | None = None) -> ExperimentSpec:
    overrides = dict(_parse_override(item) for item in args.override)
    if experiment is None:
        doc = read_json(args.config)
        base = dict(doc.get("overrides") or {})
        base.update(overrides)
        doc["overrides"] = base
        return ExperimentSpec.from_config(doc, seed=args.seed, out_dir=args.out,
                                          force=args.force)
    return ExperimentSpec(experiment=experiment, seed=args.seed, overrides=overrides,
                          out_dir=args.out, force=args.force)


def _print_metrics(result):
    for key in sorted(result.metrics):
        print(f"{key} = {result.metrics[key]:.9g}")
    print(f"outputs: {result.out_dir}")


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            for exp_id in sorted(CATALOG):
                print(f"{exp_id}: {CATALOG[exp_id].description}")
            return 0
        if args.command == "validate":
            doc = read_json(args.config)
            spec = ExperimentSpec.from_config(doc)
            resolve_config(spec)
            print(f"config ok: experiment {spec.experiment!r}")
            return 0
        if args.command == "run":
            result = run_experiment(_spec_from_args(args))
            _print_metrics(result)
            return 0
        if args.command == "reproduce":
            spec = _spec_from_args(args, experiment=FIGURE_IDS[args.figure])
            result = run_experiment(spec)
            _print_metrics(result)
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 1
    except (ExperimentError, Exception) as err:  # noqa: BLE001
        print(f"runtime error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
