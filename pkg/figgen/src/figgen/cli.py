"""figgen <kind> --out <path> [inputs...] - plots from simulator output files."""

from __future__ import annotations

import argparse
import sys

from .io import FiggenError
from .plots import plot_error_surface, plot_heatmap_grid, plot_layout, plot_timeseries


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="figgen", description=__doc__)
    sub = p.add_subparsers(dest="kind", required=True)

    sp = sub.add_parser("timeseries", help="overlaid total-vs-time lines")
    sp.add_argument("csvs", nargs="+", help="timeseries.csv files")
    sp.add_argument("--out", required=True, help="output image (.png or .svg)")
    sp.add_argument("--labels", default=None, help="comma-separated legend labels")

    sp = sub.add_parser("heatmap_grid", help="field snapshots with actuator overlays")
    sp.add_argument("snapshots", nargs="+", help="snapshot csv files")
    sp.add_argument("--out", required=True)
    sp.add_argument("--trajectories", default=None, help="trajectories.csv for overlays")
    sp.add_argument("--times", default=None, help="comma-separated times (default: all)")

    sp = sub.add_parser("layout", help="sensor mesh, partition, actuators, sources")
    sp.add_argument("--partition", required=True, help="partition_initial.csv")
    sp.add_argument("--summary", required=True, help="summary.json")
    sp.add_argument("--trajectories", default=None)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("error_surface", help="numerical vs exact vs difference")
    sp.add_argument("numerical", help="numerical.csv")
    sp.add_argument("exact", help="exact.csv")
    sp.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.kind == "timeseries":
            labels = args.labels.split(",") if args.labels else None
            plot_timeseries(args.csvs, args.out, labels)
        elif args.kind == "heatmap_grid":
            times = [float(v) for v in args.times.split(",")] if args.times else None
            plot_heatmap_grid(args.snapshots, args.trajectories, times, args.out)
        elif args.kind == "layout":
            plot_layout(args.partition, args.summary, args.out, args.trajectories)
        elif args.kind == "error_surface":
            plot_error_surface(args.numerical, args.exact, args.out)
        print(args.out)
        return 0
    except FiggenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
