"""Command-line entry point: ``figures --in DIR --example N --kinds ...``."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureRequest, render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="figures",
        description="Regenerate figures from experiment output directories",
    )
    p.add_argument("--in", dest="input_dir", required=True, help="run output directory")
    p.add_argument("--example", type=int, required=True, choices=(1, 2, 3))
    p.add_argument(
        "--kinds",
        default=",".join(KINDS),
        help=f"comma-separated subset of {','.join(KINDS)} (empty renders nothing)",
    )
    p.add_argument(
        "--cross-sections",
        dest="cross_sections",
        help="comma-separated x2 values for cross sections (default per example)",
    )
    p.add_argument("--out", dest="output_dir", help="where to write images (default: --in)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    kinds = tuple(k for k in args.kinds.split(",") if k)
    lines = None
    if args.cross_sections:
        lines = tuple(float(v) for v in args.cross_sections.split(","))
    try:
        req = FigureRequest(
            input_dir=args.input_dir,
            example_id=args.example,
            kinds=kinds,
            cross_section_lines=lines,
            output_dir=args.output_dir,
        )
        written = render(req)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
