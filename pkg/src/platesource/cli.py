"""Command-line interface.

Subcommands mirror the experiment harness: ``simulate``, ``reconstruct``,
``pipeline``, and ``table``. Configuration comes from an ``--example``
preset, a flat ``key = value`` config file, or both (file overrides
preset; dedicated flags override the file). Failures print a JSON error
object to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .experiment import (
    ExperimentConfig,
    example_config,
    run_pipeline,
    run_reconstruct,
    run_simulate,
    run_table,
)

__all__ = ["main", "parse_config_file"]

_FIELD_TYPES = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


def _coerce(name: str, raw: str):
    if name not in _FIELD_TYPES:
        raise ValueError(f"unknown config key {name!r}")
    raw = raw.strip()
    if name == "source":
        return raw
    if name == "output_dir":
        return raw
    if name == "noise_scale_lap":
        return raw
    if name == "truncation":
        return raw if raw in ("default", "alt") else int(raw)
    if name == "k_scale":
        return None if raw.lower() in ("none", "") else float(raw)
    if name in ("n_measure", "out_angle_count", "mode_cutoff", "seed",
                "quad_points_per_side", "eval_points_per_side"):
        return int(raw)
    return float(raw)


def parse_config_file(path) -> dict:
    """Parse a flat ``key = value`` config document (``#`` comments)."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def _build_config(args) -> ExperimentConfig:
    overrides = {}
    if args.config:
        overrides.update(parse_config_file(args.config))
    if args.out is not None:
        overrides["output_dir"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.delta is not None:
        overrides["delta"] = args.delta
    if getattr(args, "theta_max", None) is not None:
        overrides["theta_max"] = args.theta_max * np.pi
    if args.example is not None:
        return example_config(args.example, **overrides)
    return ExperimentConfig(**overrides)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--example", type=int, choices=(1, 2, 3),
                   help="preset for one of the reference experiments")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="noise seed")
    p.add_argument("--delta", type=float, help="noise level in [0, 1)")
    p.add_argument("--theta-max", type=float, dest="theta_max", metavar="T",
                   help="measurement aperture as a multiple of pi")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel workers for data generation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platesource",
        description="Multi-wavenumber boundary-data source reconstruction",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in [
        ("simulate", "generate measured boundary data"),
        ("reconstruct", "invert previously simulated data"),
        ("pipeline", "simulate (with caching) and reconstruct"),
        ("table", "noise-level sweep over one dataset"),
    ]:
        p = sub.add_parser(name, help=descr)
        _add_common(p)
        if name == "table":
            p.add_argument(
                "--deltas",
                default="0.005,0.05,0.1,0.2",
                help="comma-separated noise levels",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _build_config(args)
        if args.command == "simulate":
            manifest = run_simulate(cfg, workers=args.workers)
            print(f"wrote {len(manifest['entries'])} trace files to {cfg.data_dir()}")
        elif args.command == "reconstruct":
            result = run_reconstruct(cfg)
            _print_report(result)
        elif args.command == "pipeline":
            result = run_pipeline(cfg, workers=args.workers)
            _print_report(result)
        elif args.command == "table":
            deltas = [float(v) for v in args.deltas.split(",") if v]
            rows = run_table(cfg, deltas, workers=args.workers)
            print((Path(cfg.output_dir) / "table.txt").read_text(), end="")
            print(f"table written to {Path(cfg.output_dir) / 'table.csv'}")
    except Exception as exc:  # surface a machine-readable error
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    return 0


def _print_report(result) -> None:
    r = result.report
    h1 = "-" if r.rel_h1 is None else f"{r.rel_h1:.4%}"
    print(
        f"N={r.N_used} delta={r.delta:g} rel_l2={r.rel_l2:.4%} rel_h1={h1} "
        f"time={r.wall_time_s:.2f}s -> {result.paths['report']}"
    )


if __name__ == "__main__":
    sys.exit(main())
