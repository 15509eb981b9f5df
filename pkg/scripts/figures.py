#!/usr/bin/env python3
"""Generate the summary figures: perfect-fairness and undefined-value
sweep curves for all six measures, fairness/performance heatmaps, and
the property verdict table.
"""
import argparse
from fractions import Fraction
from pathlib import Path

from fairdist.core import MeasureId, format_ratio
from fairdist.distribution import joint_heatmap, sweep_curve
from fairdist.exports import (
    heatmap_payload,
    render_report_table,
    report_payload,
    sweep_payload,
    to_json,
)
from fairdist.parallel import default_workers
from fairdist.properties import RatioGrid, property_report
from fairdist.svg import render_curve, render_heatmap


def sweep_grid(n: int) -> list[Fraction]:
    extreme = Fraction(2, n)  # two minority examples, one per group
    return sorted({extreme, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1 - extreme})


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=56, help="dataset size for sweep curves")
    parser.add_argument("--heatmap-n", type=int, default=16, help="dataset size for heatmaps")
    parser.add_argument("--report-n", type=int, default=24)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--out-dir", type=Path, default=Path("out/figures"))
    args = parser.parse_args()
    workers = args.threads if args.threads else default_workers()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    grid = sweep_grid(args.n)
    half = Fraction(1, 2)
    for statistic in ("perfect-fairness", "undefined"):
        for axis in ("ir", "gr"):
            for measure in MeasureId:
                curve = sweep_curve(measure, args.n, axis, grid, half, statistic, workers=workers)
                slug = f"{statistic}_{axis}_{measure.value}"
                (args.out_dir / f"{slug}.json").write_text(to_json(sweep_payload(curve)))
                title = f"{measure.value}  {statistic}  n={args.n}  vary {axis}"
                (args.out_dir / f"{slug}.svg").write_text(
                    render_curve(curve.points, title, axis, statistic)
                )
    print(f"sweeps at n={args.n} over {{{', '.join(format_ratio(r) for r in grid)}}} done")

    for perf in ("accuracy", "g-mean"):
        for measure in MeasureId:
            heat = joint_heatmap(measure, perf, args.heatmap_n, 41, 41, workers=workers)
            payload = heatmap_payload(heat)
            slug = f"heatmap_{measure.value}_{perf}"
            (args.out_dir / f"{slug}.json").write_text(to_json(payload))
            title = f"{measure.value} vs {perf}  n={args.heatmap_n}"
            (args.out_dir / f"{slug}.svg").write_text(render_heatmap(payload, title))
    print(f"heatmaps at n={args.heatmap_n} done")

    ratios = [Fraction(1, args.report_n // 2), Fraction(1, 4), half, Fraction(3, 4),
              1 - Fraction(1, args.report_n // 2)]
    report = property_report(RatioGrid.square(args.report_n, ratios), workers=workers)
    (args.out_dir / "property_report.json").write_text(to_json(report_payload(report)))
    table = render_report_table(report)
    (args.out_dir / "property_report.txt").write_text(table)
    print(table)


if __name__ == "__main__":
    main()
