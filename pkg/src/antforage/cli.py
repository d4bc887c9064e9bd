"""Command-line entry points: ``run``, ``sweep``, ``render`` and ``spotlight``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, SimConfig, load_config, parse_overrides
from .engine import run
from .experiments import attack_sweep, defense_sweep, run_sweep, spotlight_configs
from .io import emit_run_csv, emit_sweep_csv
from .render import render_frames


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat JSON object of config fields")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")
    p.add_argument("--seed", type=int, help="RNG seed (overrides config)")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config field; repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antforage", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="one run; writes series.csv and final.csv")
    _common(p)

    p = sub.add_parser("sweep", help="multi-seed parameter sweep; writes sweep.csv")
    _common(p)
    p.add_argument("--kind", choices=("attack", "defense"), default="attack")
    p.add_argument("--runs", type=int, default=20, help="runs per cell (default: 20)")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p = sub.add_parser("render", help="one run; writes a PPM frame every --frames steps")
    _common(p)
    p.add_argument("--frames", type=int, required=True, metavar="INTERVAL")

    p = sub.add_parser("spotlight", help="run alpha, beta, gamma and delta into subdirectories")
    _common(p)
    return parser


def _config(args: argparse.Namespace) -> SimConfig:
    overrides: dict = dict(parse_overrides(args.overrides))
    if args.seed is not None:
        overrides["seed"] = args.seed
    return load_config(args.config, overrides)


def _report(label: str, metrics) -> None:
    print(f"{label}: " + " ".join(f"{k}={v:.6g}" for k, v in metrics.as_dict().items()))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        if args.command == "run":
            result = run(config)
            emit_run_csv(result, args.out)
            _report("run", result.metrics)
        elif args.command == "sweep":
            make = attack_sweep if args.kind == "attack" else defense_sweep
            base = config if args.kind == "attack" else spotlight_configs(config)["alpha"]
            spec = make(base, runs_per_cell=args.runs, seed_base=config.seed)
            table = run_sweep(spec, workers=args.workers)
            path = emit_sweep_csv(table, args.out)
            print(f"sweep: {len(table)} cells -> {path}")
        elif args.command == "render":
            if args.frames < 1:
                raise ConfigError("--frames must be >= 1")
            result, paths = render_frames(config, args.frames, args.out)
            emit_run_csv(result, args.out)
            print(f"render: {len(paths)} frames -> {args.out}")
        elif args.command == "spotlight":
            for name, cfg in spotlight_configs(config).items():
                result = run(cfg)
                emit_run_csv(result, args.out / name)
                _report(name, result.metrics)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"antforage: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
