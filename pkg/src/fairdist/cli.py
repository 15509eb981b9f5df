"""Command-line surface.

Subcommands: count, pmf, sweep, heatmap, properties, measure, plot.
Exit codes: 0 ok, 2 usage error, 3 inexact ratio, 4 overflow/limit,
5 I/O error.  Output files are written atomically (temp file + rename).
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import exports, svg
from .core import (
    ConfusionPair,
    InexactRatioError,
    LimitError,
    MeasureId,
    format_ratio,
    parse_ratio,
    stratum_from_ratios,
)
from .distribution import (
    DEFAULT_BIN_COUNT,
    DEFAULT_HEATMAP_N,
    joint_heatmap,
    stratum_pmf_fast,
    sweep_curve,
)
from .enumeration import total_count
from .measures import measure_value
from .parallel import default_workers
from .properties import RatioGrid, Thresholds, property_report

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INEXACT = 3
EXIT_LIMIT = 4
EXIT_IO = 5

BATCH_FIELDS = ("tp_p", "fn_p", "fp_p", "tn_p", "tp_up", "fn_up", "fp_up", "tn_up")


def _ratio(text: str) -> Fraction:
    try:
        return parse_ratio(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid(text: str) -> list[Fraction]:
    return [_ratio(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairdist",
        description="Exact distributions of group fairness measures over confusion pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, fmt=("json", "csv")) -> None:
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=fmt, default=fmt[0])

    p_count = sub.add_parser("count", help="number of confusion pairs for a dataset size")
    p_count.add_argument("--n", type=int, required=True)

    p_pmf = sub.add_parser("pmf", help="exact measure pmf for one (n, IR, GR) stratum")
    p_pmf.add_argument("--n", type=int, required=True)
    p_pmf.add_argument("--ir", type=_ratio, required=True)
    p_pmf.add_argument("--gr", type=_ratio, required=True)
    p_pmf.add_argument("--measure", type=MeasureId.from_token, required=True)
    add_common(p_pmf)

    p_sweep = sub.add_parser("sweep", help="statistic of the pmf along an IR or GR grid")
    p_sweep.add_argument("--n", type=int, required=True)
    p_sweep.add_argument("--measure", type=MeasureId.from_token, required=True)
    p_sweep.add_argument("--vary", choices=("ir", "gr"), required=True)
    p_sweep.add_argument("--grid", type=_grid, required=True, help="comma-separated ratios")
    p_sweep.add_argument("--ir", type=_ratio, default=None, help="fixed IR when varying GR")
    p_sweep.add_argument("--gr", type=_ratio, default=None, help="fixed GR when varying IR")
    p_sweep.add_argument(
        "--statistic", choices=("perfect-fairness", "undefined", "unique-values"),
        default="perfect-fairness",
    )
    p_sweep.add_argument("--denominator", choices=("all", "defined"), default="all")
    p_sweep.add_argument("--threads", type=int, default=None)
    add_common(p_sweep)

    p_heat = sub.add_parser("heatmap", help="joint fairness/performance histogram")
    p_heat.add_argument("--n", type=int, default=DEFAULT_HEATMAP_N)
    p_heat.add_argument("--measure", type=MeasureId.from_token, required=True)
    p_heat.add_argument("--perf", choices=("accuracy", "g-mean"), default="accuracy")
    p_heat.add_argument("--bins", type=int, default=DEFAULT_BIN_COUNT)
    p_heat.add_argument("--perf-bins", type=int, default=None, help="default: same as --bins")
    p_heat.add_argument("--ir", type=_ratio, default=None, help="restrict to one stratum")
    p_heat.add_argument("--gr", type=_ratio, default=None)
    p_heat.add_argument("--threads", type=int, default=None)
    add_common(p_heat)

    p_props = sub.add_parser("properties", help="eight-property verdict report over a ratio grid")
    p_props.add_argument("--n", type=int, required=True)
    p_props.add_argument("--grid", type=_grid, default=None, help="square grid ratios")
    p_props.add_argument("--ir-grid", type=_grid, default=None)
    p_props.add_argument("--gr-grid", type=_grid, default=None)
    p_props.add_argument("--immunity-tv", type=_ratio, default=None)
    p_props.add_argument("--shape-tv", type=_ratio, default=None)
    p_props.add_argument("--shape-bins", type=int, default=None)
    p_props.add_argument("--resolution-ratio", type=_ratio, default=None)
    p_props.add_argument("--pf-ratio", type=_ratio, default=None)
    p_props.add_argument("--threads", type=int, default=None)
    add_common(p_props, fmt=("json", "table"))

    p_measure = sub.add_parser("measure", help="score a batch of confusion pairs (JSON lines)")
    p_measure.add_argument("--input", default="-", help="JSON-lines file (default: stdin)")
    add_common(p_measure, fmt=None)

    p_plot = sub.add_parser("plot", help="render an exported artifact as SVG")
    p_plot.add_argument("--kind", choices=("histogram", "curve", "heatmap"), required=True)
    p_plot.add_argument("--input", required=True)
    p_plot.add_argument("--bins", type=int, default=DEFAULT_BIN_COUNT, help="histogram bins")
    add_common(p_plot, fmt=None)

    return parser


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent or Path("."), prefix=".fairdist-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def _workers(value: int | None) -> int:
    if value is None:
        return default_workers()
    if value < 1:
        raise ValueError(f"--threads must be >= 1, got {value}")
    return value


def _cmd_count(args) -> str:
    return f"{total_count(args.n)}\n"


def _cmd_pmf(args) -> str:
    stratum = stratum_from_ratios(args.n, args.ir, args.gr)
    pmf = stratum_pmf_fast(args.measure, stratum)
    if args.format == "json":
        return exports.to_json(exports.pmf_payload(pmf, stratum, args.measure))
    buffer = io.StringIO()
    exports.write_pmf_csv(pmf, buffer)
    return buffer.getvalue()


def _cmd_sweep(args) -> str:
    fixed = args.gr if args.vary == "ir" else args.ir
    if fixed is None:
        flag = "--gr" if args.vary == "ir" else "--ir"
        raise ValueError(f"{flag} is required to fix the other ratio when varying {args.vary}")
    curve = sweep_curve(
        args.measure, args.n, args.vary, args.grid, fixed,
        args.statistic, args.denominator, _workers(args.threads),
    )
    if args.format == "json":
        return exports.to_json(exports.sweep_payload(curve))
    buffer = io.StringIO()
    exports.write_sweep_csv(curve, buffer)
    return buffer.getvalue()


def _cmd_heatmap(args) -> str:
    stratum = None
    if (args.ir is None) != (args.gr is None):
        raise ValueError("stratified heatmaps need both --ir and --gr")
    if args.ir is not None:
        stratum = stratum_from_ratios(args.n, args.ir, args.gr)
    perf_bins = args.perf_bins if args.perf_bins is not None else args.bins
    heat = joint_heatmap(
        args.measure, args.perf, args.n, args.bins, perf_bins,
        workers=_workers(args.threads), stratum=stratum,
    )
    if args.format == "json":
        return exports.to_json(exports.heatmap_payload(heat))
    buffer = io.StringIO()
    exports.write_heatmap_csv(heat, buffer)
    return buffer.getvalue()


def _cmd_properties(args) -> str:
    if args.grid is None and (args.ir_grid is None or args.gr_grid is None):
        raise ValueError("give --grid, or both --ir-grid and --gr-grid")
    ir_grid = args.ir_grid if args.ir_grid is not None else args.grid
    gr_grid = args.gr_grid if args.gr_grid is not None else args.grid
    grid = RatioGrid(args.n, ir_grid, gr_grid)
    defaults = Thresholds()
    thresholds = Thresholds(
        immunity_tv=args.immunity_tv if args.immunity_tv is not None else defaults.immunity_tv,
        shape_tv=args.shape_tv if args.shape_tv is not None else defaults.shape_tv,
        shape_bins=args.shape_bins if args.shape_bins is not None else defaults.shape_bins,
        resolution_ratio=args.resolution_ratio
        if args.resolution_ratio is not None
        else defaults.resolution_ratio,
        perfect_fairness_ratio=args.pf_ratio
        if args.pf_ratio is not None
        else defaults.perfect_fairness_ratio,
    )
    report = property_report(grid, thresholds, _workers(args.threads))
    if args.format == "json":
        return exports.to_json(exports.report_payload(report))
    return exports.render_report_table(report)


def _cmd_measure(args) -> str:
    if args.input == "-":
        lines = sys.stdin.read().splitlines()
    else:
        lines = Path(args.input).read_text().splitlines()
    out_lines = []
    for index, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"record {index}: invalid JSON ({exc})") from None
        if not isinstance(record, dict):
            raise ValueError(f"record {index}: expected a JSON object")
        try:
            counts = tuple(int(record[fieldname]) for fieldname in BATCH_FIELDS)
        except KeyError as exc:
            raise ValueError(f"record {index}: missing count {exc.args[0]!r}") from None
        except (TypeError, ValueError):
            raise ValueError(f"record {index}: counts must be integers") from None
        try:
            pair = ConfusionPair.from_tuple(counts)
        except ValueError as exc:
            raise ValueError(f"record {index}: {exc}") from None
        result: dict = {}
        if "id" in record:
            result["id"] = record["id"]
        for measure in MeasureId:
            value = measure_value(measure, pair)
            result[measure.value] = "undefined" if value is None else format_ratio(value)
        out_lines.append(json.dumps(result))
    return "\n".join(out_lines) + ("\n" if out_lines else "")


def _cmd_plot(args) -> str:
    path = Path(args.input)
    text = path.read_text()
    if args.kind == "histogram":
        if path.suffix.lower() == ".csv":
            pmf, meta = exports.read_pmf_csv(io.StringIO(text))
        else:
            pmf, meta = exports.read_pmf_payload(_json_object(text))
        title = "measure value histogram"
        if meta:
            title = (
                f"{meta['measure']}  n={meta['n']}  "
                f"ir={meta['p']}/{meta['n']}  gr={meta['n_p']}/{meta['n']}"
            )
        return svg.render_histogram(pmf, title, args.bins)
    if args.kind == "curve":
        data = exports.read_sweep_payload(_json_object(text))
        title = f"{data['measure']}  {data['statistic']}  n={data['n']}"
        return svg.render_curve(data["points"], title, data["vary"], data["statistic"])
    if path.suffix.lower() == ".csv":
        data = exports.read_heatmap_csv(io.StringIO(text))
    else:
        data = exports.read_heatmap_payload(_json_object(text))
    label = data["measure"] or "fairness"
    title = f"{label} vs {data['perf'] or 'performance'}  n={data['n']}"
    return svg.render_heatmap(data, title)


def _json_object(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise exports.SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise exports.SchemaError("expected a JSON object")
    return data


_DISPATCH = {
    "count": _cmd_count,
    "pmf": _cmd_pmf,
    "sweep": _cmd_sweep,
    "heatmap": _cmd_heatmap,
    "properties": _cmd_properties,
    "measure": _cmd_measure,
    "plot": _cmd_plot,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = _DISPATCH[args.command](args)
        _write_output(text, getattr(args, "out", None))
    except InexactRatioError as exc:
        print(f"fairdist: inexact ratio: {exc}", file=sys.stderr)
        return EXIT_INEXACT
    except LimitError as exc:
        print(f"fairdist: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except OSError as exc:
        print(f"fairdist: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"fairdist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
