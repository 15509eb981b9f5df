"""File formats for analysis artifacts.

Exact pmfs export losslessly (value numerators/denominators and counts);
binning stays a presentation step.  All writers are deterministic: the
same inputs produce byte-identical documents.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, TextIO

from .core import MeasureId, Stratum, format_ratio, parse_ratio
from .distribution import Heatmap2D, Pmf, SweepCurve
from .properties import PropertyId, PropertyReport, Thresholds

UNDEFINED_TOKEN = "UNDEFINED"


class SchemaError(ValueError):
    """An artifact does not conform to the expected export schema."""


def _require(data: dict, fieldname: str, kind: type | tuple[type, ...]) -> Any:
    if fieldname not in data:
        raise SchemaError(f"missing field {fieldname!r}")
    value = data[fieldname]
    if not isinstance(value, kind):
        raise SchemaError(f"field {fieldname!r} has unexpected type {type(value).__name__}")
    return value


# --- exact pmf -----------------------------------------------------------

def pmf_payload(pmf: Pmf, stratum: Stratum, measure: MeasureId) -> dict:
    return {
        "n": stratum.n,
        "p": stratum.p,
        "n_p": stratum.n_p,
        "measure": measure.value,
        "total": pmf.total,
        "undefined_count": pmf.undefined_count,
        "entries": [
            {"num": v.numerator, "den": v.denominator, "count": c}
            for v, c in pmf.sorted_entries()
        ],
    }


def read_pmf_payload(data: dict) -> tuple[Pmf, dict]:
    for fieldname in ("n", "p", "n_p", "total", "undefined_count"):
        _require(data, fieldname, int)
    measure = _require(data, "measure", str)
    entries: dict[Fraction, int] = {}
    for i, entry in enumerate(_require(data, "entries", list)):
        if not isinstance(entry, dict):
            raise SchemaError(f"entries[{i}] is not an object")
        num = _require(entry, "num", int)
        den = _require(entry, "den", int)
        count = _require(entry, "count", int)
        if den <= 0:
            raise SchemaError(f"entries[{i}].den must be positive")
        entries[Fraction(num, den)] = count
    pmf = Pmf(entries, data["undefined_count"], data["total"]).check()
    meta = {"n": data["n"], "p": data["p"], "n_p": data["n_p"], "measure": measure}
    return pmf, meta


def write_pmf_csv(pmf: Pmf, fh: TextIO) -> None:
    fh.write("value_num,value_den,count\n")
    for v, c in pmf.sorted_entries():
        fh.write(f"{v.numerator},{v.denominator},{c}\n")
    fh.write(f"{UNDEFINED_TOKEN},,{pmf.undefined_count}\n")


def read_pmf_csv(fh: TextIO) -> tuple[Pmf, dict]:
    header = fh.readline().strip()
    if header != "value_num,value_den,count":
        raise SchemaError("missing field 'value_num,value_den,count' header")
    entries: dict[Fraction, int] = {}
    undefined = 0
    for line in fh:
        line = line.strip()
        if not line:
            continue
        num_s, den_s, count_s = line.split(",")
        if num_s == UNDEFINED_TOKEN:
            undefined = int(count_s)
        else:
            entries[Fraction(int(num_s), int(den_s))] = int(count_s)
    total = sum(entries.values()) + undefined
    return Pmf(entries, undefined, total), {}


# --- sweep curves --------------------------------------------------------

def _value_json(value: Fraction | int):
    return format_ratio(value) if isinstance(value, Fraction) else value


def sweep_payload(curve: SweepCurve) -> dict:
    return {
        "measure": curve.measure.value,
        "n": curve.n,
        "vary": curve.varied,
        "fixed": format_ratio(curve.fixed),
        "statistic": curve.statistic,
        "denominator": curve.denominator,
        "points": [
            {"ratio": format_ratio(r), "value": _value_json(v)} for r, v in curve.points
        ],
    }


def read_sweep_payload(data: dict) -> dict:
    _require(data, "measure", str)
    _require(data, "n", int)
    vary = _require(data, "vary", str)
    if vary not in ("ir", "gr"):
        raise SchemaError("field 'vary' must be 'ir' or 'gr'")
    _require(data, "statistic", str)
    points = []
    for i, pt in enumerate(_require(data, "points", list)):
        if not isinstance(pt, dict):
            raise SchemaError(f"points[{i}] is not an object")
        ratio = parse_ratio(_require(pt, "ratio", str))
        raw = _require(pt, "value", (str, int))
        value = parse_ratio(raw) if isinstance(raw, str) else Fraction(raw)
        points.append((ratio, value))
    return {**{k: data[k] for k in ("measure", "n", "vary", "statistic")},
            "fixed": data.get("fixed"), "points": points}


def write_sweep_csv(curve: SweepCurve, fh: TextIO) -> None:
    fh.write("ratio,value\n")
    for r, v in curve.points:
        fh.write(f"{format_ratio(r)},{_value_json(v)}\n")


# --- heatmaps ------------------------------------------------------------

def heatmap_payload(h: Heatmap2D) -> dict:
    return {
        "measure": h.measure.value,
        "perf": h.perf,
        "n": h.n,
        "fairness_bins": h.fairness_bins,
        "perf_bins": h.perf_bins,
        "cells": [list(row) for row in h.cells],
        "fairness_undefined": h.fairness_undefined,
        "perf_undefined": h.perf_undefined,
        "total": h.total,
        "stratum": None if h.stratum is None else {"p": h.stratum.p, "n_p": h.stratum.n_p},
    }


def read_heatmap_payload(data: dict) -> dict:
    for fieldname in ("n", "fairness_bins", "perf_bins", "fairness_undefined", "perf_undefined", "total"):
        _require(data, fieldname, int)
    _require(data, "measure", str)
    _require(data, "perf", str)
    cells = _require(data, "cells", list)
    if len(cells) != data["fairness_bins"]:
        raise SchemaError("field 'cells' row count does not match fairness_bins")
    for i, row in enumerate(cells):
        if not isinstance(row, list) or len(row) != data["perf_bins"]:
            raise SchemaError(f"cells[{i}] does not match perf_bins")
    return data


def write_heatmap_csv(h: Heatmap2D, fh: TextIO) -> None:
    fh.write("fairness_bin,perf_bin,count\n")
    for i, row in enumerate(h.cells):
        for j, count in enumerate(row):
            fh.write(f"{i},{j},{count}\n")
    fh.write(f"{UNDEFINED_TOKEN},,{h.fairness_undefined}\n")
    fh.write(f",{UNDEFINED_TOKEN},{h.perf_undefined}\n")


def read_heatmap_csv(fh: TextIO) -> dict:
    header = fh.readline().strip()
    if header != "fairness_bin,perf_bin,count":
        raise SchemaError("missing field 'fairness_bin,perf_bin,count' header")
    cells: dict[tuple[int, int], int] = {}
    fairness_undefined = perf_undefined = 0
    for line in fh:
        line = line.strip()
        if not line:
            continue
        f_s, p_s, count_s = line.split(",")
        if f_s == UNDEFINED_TOKEN:
            fairness_undefined = int(count_s)
        elif p_s == UNDEFINED_TOKEN:
            perf_undefined = int(count_s)
        else:
            cells[(int(f_s), int(p_s))] = int(count_s)
    if not cells:
        raise SchemaError("missing field 'cells': no cell rows present")
    f_bins = max(i for i, _ in cells) + 1
    p_bins = max(j for _, j in cells) + 1
    grid = [[cells.get((i, j), 0) for j in range(p_bins)] for i in range(f_bins)]
    total = sum(cells.values()) + fairness_undefined + perf_undefined
    return {
        "measure": "", "perf": "", "n": 0,
        "fairness_bins": f_bins, "perf_bins": p_bins, "cells": grid,
        "fairness_undefined": fairness_undefined, "perf_undefined": perf_undefined,
        "total": total, "stratum": None,
    }


# --- property reports ----------------------------------------------------

def thresholds_payload(t: Thresholds) -> dict:
    return {
        "immunity_tv": format_ratio(t.immunity_tv),
        "shape_tv": format_ratio(t.shape_tv),
        "shape_bins": t.shape_bins,
        "resolution_ratio": format_ratio(t.resolution_ratio),
        "perfect_fairness_ratio": format_ratio(t.perfect_fairness_ratio),
    }


def report_payload(report: PropertyReport) -> dict:
    return {
        "n": report.grid.n,
        "ir_grid": [format_ratio(r) for r in report.grid.ir_grid],
        "gr_grid": [format_ratio(r) for r in report.grid.gr_grid],
        "config": thresholds_payload(report.thresholds),
        "cells": [
            {
                "measure": c.measure.value,
                "property": c.property.value,
                "statistic": c.statistic,
                "threshold": c.threshold,
                "verdict": c.verdict,
                "witnesses": list(c.witnesses),
                "detail": c.detail,
            }
            for c in report.cells
        ],
    }


_VERDICT_SYMBOL = {"holds": "yes", "fails": "no", "holds-with-caveat": "yes*"}

_MEASURE_SHORT = {
    MeasureId.ACCURACY_EQUALITY: "AccEq",
    MeasureId.STATISTICAL_PARITY: "StatPar",
    MeasureId.EQUAL_OPPORTUNITY: "EqOpp",
    MeasureId.PREDICTIVE_EQUALITY: "PredEq",
    MeasureId.POSITIVE_PREDICTIVE_PARITY: "PosPredPar",
    MeasureId.NEGATIVE_PREDICTIVE_PARITY: "NegPredPar",
}


def render_report_table(report: PropertyReport) -> str:
    """Human-readable grid of verdicts, one row per property.

    A trailing '*' marks holds-with-caveat (undefined values appear at
    extreme group ratios but the histogram shape is stable); the
    undefined-values row reports condition classes instead of verdicts.
    """
    measures = list(MeasureId)
    headers = ["property"] + [_MEASURE_SHORT[m] for m in measures]
    rows = [headers]
    for prop in PropertyId:
        row = [prop.value]
        for m in measures:
            cell = report.cell(prop, m)
            row.append(cell.statistic if cell.verdict == "descriptive" else _VERDICT_SYMBOL[cell.verdict])
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(col.ljust(w) for col, w in zip(row, widths)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    lines.append("")
    lines.append(
        f"grid: n={report.grid.n}, "
        f"ir={{{', '.join(format_ratio(r) for r in report.grid.ir_grid)}}}, "
        f"gr={{{', '.join(format_ratio(r) for r in report.grid.gr_grid)}}}"
    )
    lines.append("thresholds: " + json.dumps(thresholds_payload(report.thresholds)))
    return "\n".join(lines) + "\n"


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"
