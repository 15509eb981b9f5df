"""Case-study command line: run the controlled-ratio experiment and
aggregate its results."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .aggregate import aggregate_and_plot
from .config import DEFAULT_RATIO_GRID, SamplingSpec
from .data import load_adult, synthetic_adult
from .engine import MeasureEngine
from .pipeline import run_experiment, save_results


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairdist-casestudy", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the repeated-holdout experiment")
    p_run.add_argument("--data", required=True, help="Adult CSV path, or 'synthetic'")
    p_run.add_argument("--out-dir", type=Path, default=Path("out/casestudy"))
    p_run.add_argument("--axes", default="ir,gr", help="comma list of swept axes")
    p_run.add_argument("--grid", default=None, help="comma list of ratios (default: the study grid)")
    p_run.add_argument("--n", type=int, default=1100)
    p_run.add_argument("--reps", type=int, default=50)
    p_run.add_argument("--seed", type=int, default=SamplingSpec.seed)
    p_run.add_argument("--classifiers", default=None, help="comma list (default: all six)")
    p_run.add_argument("--engine", default=None, help="primary CLI binary (default: fairdist)")

    p_agg = sub.add_parser("aggregate", help="tables, plots and stability summary")
    p_agg.add_argument("--results", required=True)
    p_agg.add_argument("--out-dir", type=Path, default=Path("out/casestudy"))
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "aggregate":
        summary = aggregate_and_plot(args.results, args.out_dir)
        for axis, verdict in summary.items():
            print(f"{axis}: {verdict['classifiers_satisfying']} classifiers with stable measures below predictive parity")
        return 0

    source = synthetic_adult() if args.data == "synthetic" else load_adult(args.data)
    grid = (
        tuple(Fraction(token) for token in args.grid.split(","))
        if args.grid
        else DEFAULT_RATIO_GRID
    )
    spec = SamplingSpec(
        n_subset=args.n,
        grid=grid,
        repetitions=args.reps,
        seed=args.seed,
        classifiers=tuple(args.classifiers.split(",")) if args.classifiers else SamplingSpec.classifiers,
    )
    axes = tuple(a.strip() for a in args.axes.split(",") if a.strip())
    engine = MeasureEngine(args.engine)

    def progress(axis, ratio, count):
        print(f"  {axis}={ratio}: {count} records", flush=True)

    records, manifest = run_experiment(source, spec, axes, engine, progress)
    save_results(records, manifest, args.out_dir)
    print(f"wrote {len(records)} records to {args.out_dir}/results.csv")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
