"""One command per figure job: `haarmagic-figs <figure_id> --in ... --out ...`.

Exit codes follow the campaign tooling: 0 ok, 2 schema mismatch / bad
arguments, 4 missing series or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .io import MissingSeries, SchemaMismatch
from .render import FIGURE_IDS, FigureJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarmagic-figs",
        description="Render publication figures from campaign summaries")
    sub = parser.add_subparsers(dest="figure_id", required=True)
    for figure_id in FIGURE_IDS:
        p = sub.add_parser(figure_id, help=f"render {figure_id}")
        p.add_argument("--in", dest="input_path", required=True,
                       help="summary.json from the campaign runner")
        p.add_argument("--out", dest="output_path", required=True,
                       help="image file to write")
        p.add_argument("--format", dest="fmt", choices=("png", "svg"),
                       default="png")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = FigureJob(args.figure_id, args.input_path, args.output_path, args.fmt)
    try:
        meta = render(job)
    except SchemaMismatch as e:
        print(f"schema mismatch: {e}", file=sys.stderr)
        return 2
    except MissingSeries as e:
        print(f"missing series: {e}", file=sys.stderr)
        return 4
    except (OSError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 4
    print(f"{job.figure_id} -> {job.output_path}")
    if "slopes" in meta:
        for key, slope in meta["slopes"].items():
            print(f"  {key} slope = {slope!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
