#!/usr/bin/env python3
"""Compute the exact pmfs of all six fairness measures on the 5x5
ratio grid at n=56 and export them as JSON plus histogram SVGs.

The full space at n=56 holds 553,270,671 confusion pairs; the per-cell
convolution gives every grid pmf exactly in seconds.
"""
import argparse
import time
from fractions import Fraction
from pathlib import Path

from fairdist.core import MeasureId, format_ratio, stratum_from_ratios
from fairdist.distribution import stratum_pmf_fast
from fairdist.exports import pmf_payload, to_json
from fairdist.svg import render_histogram

RATIOS = [Fraction(1, 28), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(27, 28)]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=56)
    parser.add_argument("--bins", type=int, default=41)
    parser.add_argument("--out-dir", type=Path, default=Path("out/paper_grid"))
    parser.add_argument("--no-svg", action="store_true")
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    count = 0
    for measure in MeasureId:
        for ir in RATIOS:
            for gr in RATIOS:
                stratum = stratum_from_ratios(args.n, ir, gr)
                pmf = stratum_pmf_fast(measure, stratum)
                slug = f"{measure.value}_ir{ir.numerator}-{ir.denominator}_gr{gr.numerator}-{gr.denominator}"
                (args.out_dir / f"{slug}.json").write_text(
                    to_json(pmf_payload(pmf, stratum, measure))
                )
                if not args.no_svg:
                    title = (
                        f"{measure.value}  n={args.n}  "
                        f"ir={format_ratio(ir)}  gr={format_ratio(gr)}"
                    )
                    (args.out_dir / f"{slug}.svg").write_text(
                        render_histogram(pmf, title, args.bins)
                    )
                count += 1
    elapsed = time.perf_counter() - started
    print(f"wrote {count} exact pmfs (n={args.n}) to {args.out_dir} in {elapsed:.1f}s")


if __name__ == "__main__":
    main()
