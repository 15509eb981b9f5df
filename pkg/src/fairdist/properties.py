"""Machine-checkable verdicts for the eight dataset-independent
properties of group fairness measures, over a grid of (IR, GR) points.

Exact-equality properties (the three symmetry checks) compare pmfs with
no tolerance; the immunity, resolution and perfect-fairness-stability
properties are qualitative in origin, so their thresholds are explicit
configuration recorded in every report.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal

from .core import MeasureId, Stratum, format_ratio, stratum_from_ratios
from .distribution import Pmf, perfect_fairness_prob, stratum_pmf_fast, undefined_prob
from .parallel import pmap

Verdict = Literal["holds", "fails", "holds-with-caveat", "descriptive"]


class PropertyId(enum.Enum):
    IMMUNITY_IR = "immunity-ir"
    IMMUNITY_GR = "immunity-gr"
    RESOLUTION_STABILITY = "resolution-stability"
    FAIRNESS_SYMMETRY = "fairness-symmetry"
    IR_SYMMETRY = "ir-symmetry"
    GR_SYMMETRY = "gr-symmetry"
    PERFECT_FAIRNESS_STABILITY = "perfect-fairness-stability"
    UNDEFINED_VALUES = "undefined-values"


PROPERTIES: tuple[PropertyId, ...] = tuple(PropertyId)

# Table-row condition classes for the undefined-values property: the
# stratum regions where each measure's zero-denominator case concentrates
UNDEFINED_CONDITION = {
    MeasureId.ACCURACY_EQUALITY: "n_p=0 or n_up=0",
    MeasureId.STATISTICAL_PARITY: "n_p=0 or n_up=0",
    MeasureId.EQUAL_OPPORTUNITY: "low/high GR, low IR",
    MeasureId.PREDICTIVE_EQUALITY: "low/high GR, high IR",
    MeasureId.POSITIVE_PREDICTIVE_PARITY: "low/high GR",
    MeasureId.NEGATIVE_PREDICTIVE_PARITY: "low/high GR",
}

UNDEFINED_GROUP_CONDITION = {
    MeasureId.ACCURACY_EQUALITY: "a group is empty",
    MeasureId.STATISTICAL_PARITY: "a group is empty",
    MeasureId.EQUAL_OPPORTUNITY: "a group has no actual positives (tp+fn=0)",
    MeasureId.PREDICTIVE_EQUALITY: "a group has no actual negatives (fp+tn=0)",
    MeasureId.POSITIVE_PREDICTIVE_PARITY: "a group has no predicted positives (tp+fp=0)",
    MeasureId.NEGATIVE_PREDICTIVE_PARITY: "a group has no predicted negatives (tn+fn=0)",
}


@dataclass(frozen=True)
class Thresholds:
    """Operational cutoffs for the qualitative properties.

    `immunity_tv` bounds the exact total variation distance for the
    strict immunity checks.  The group-ratio caveat ("undefined values
    appear but the shape stays put") compares binned defined-only
    distributions instead, because exact TV on a discrete lattice mostly
    measures support mismatch: distributions whose histograms coincide
    can sit at exact TV near 1 merely because their value grids differ.
    `perfect_fairness_ratio` must tolerate the mild variation the two
    stable measures show on extreme-ratio grids (max/min 3.23 at n=24,
    3.96 at n=56) while rejecting the 5x-31x swings of the other four.
    """

    immunity_tv: Fraction = Fraction(1, 100)
    shape_tv: Fraction = Fraction(2, 5)
    shape_bins: int = 41
    resolution_ratio: Fraction = Fraction(1, 2)
    perfect_fairness_ratio: Fraction = Fraction(9, 2)


@dataclass(frozen=True)
class RatioGrid:
    """IR x GR evaluation grid for one dataset size.

    Grids are normalized to sorted, de-duplicated axes, so reports do not
    depend on the order points were supplied in.
    """

    n: int
    ir_grid: tuple[Fraction, ...]
    gr_grid: tuple[Fraction, ...]

    def __init__(self, n: int, ir_grid: Iterable[Fraction], gr_grid: Iterable[Fraction]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "ir_grid", tuple(sorted(set(ir_grid))))
        object.__setattr__(self, "gr_grid", tuple(sorted(set(gr_grid))))
        if not self.ir_grid or not self.gr_grid:
            raise ValueError("grids must be non-empty")
        for ir in self.ir_grid:
            for gr in self.gr_grid:
                stratum_from_ratios(n, ir, gr)  # raises on inexact points

    @classmethod
    def square(cls, n: int, ratios: Iterable[Fraction]) -> "RatioGrid":
        values = list(ratios)
        return cls(n, values, values)

    def points(self) -> list[tuple[Fraction, Fraction]]:
        return [(ir, gr) for ir in self.ir_grid for gr in self.gr_grid]

    def stratum(self, ir: Fraction, gr: Fraction) -> Stratum:
        return stratum_from_ratios(self.n, ir, gr)

    def closed_under_reflection(self, axis: Literal["ir", "gr"]) -> bool:
        values = set(self.ir_grid if axis == "ir" else self.gr_grid)
        return all(1 - v in values for v in values)


@dataclass
class PropertyVerdict:
    property: PropertyId
    measure: MeasureId
    statistic: str
    threshold: str | None
    verdict: Verdict
    witnesses: list[str] = field(default_factory=list)
    detail: dict = field(default_factory=dict)


def _point_label(ir: Fraction, gr: Fraction) -> str:
    return f"ir={format_ratio(ir)}, gr={format_ratio(gr)}"


def tv_distance(a: Pmf, b: Pmf, defined_only: bool = False) -> Fraction:
    """Total variation distance between two pmfs, exactly.

    By default the undefined bucket participates as one extra atom; with
    `defined_only` both distributions are renormalized over their defined
    values first (requires defined mass on both sides).
    """
    if a.total == 0 or b.total == 0:
        raise ValueError("cannot compare an empty pmf")
    if defined_only:
        den_a, den_b = a.defined_count(), b.defined_count()
        if den_a == 0 or den_b == 0:
            raise ValueError("defined-only comparison requires defined values on both sides")
    else:
        den_a, den_b = a.total, b.total
    distance = Fraction(0)
    for v in set(a.entries) | set(b.entries):
        distance += abs(Fraction(a.count_at(v), den_a) - Fraction(b.count_at(v), den_b))
    if not defined_only:
        distance += abs(Fraction(a.undefined_count, den_a) - Fraction(b.undefined_count, den_b))
    return distance / 2


def binned_shape_tv(a: Pmf, b: Pmf, bins: int) -> Fraction:
    """Exact TV between the binned, defined-only renormalizations of two
    pmfs: the histogram-shape comparison behind the immunity caveat."""
    from .distribution import bin_histogram

    den_a, den_b = a.defined_count(), b.defined_count()
    if den_a == 0 or den_b == 0:
        raise ValueError("shape comparison requires defined values on both sides")
    ha, hb = bin_histogram(a, bins), bin_histogram(b, bins)
    distance = sum(
        abs(Fraction(ca, den_a) - Fraction(cb, den_b)) for ca, cb in zip(ha.counts, hb.counts)
    )
    return distance / 2


GridPmfs = dict[tuple[Fraction, Fraction], Pmf]


def _grid_pmf_task(args: tuple[MeasureId, int, Fraction, Fraction]) -> tuple[tuple[Fraction, Fraction], Pmf]:
    measure, n, ir, gr = args
    return (ir, gr), stratum_pmf_fast(measure, stratum_from_ratios(n, ir, gr))


def grid_pmfs(measure: MeasureId, grid: RatioGrid, workers: int = 1) -> GridPmfs:
    """Fast-path pmfs for every grid point, computed once and shared."""
    tasks = [(measure, grid.n, ir, gr) for ir, gr in grid.points()]
    return dict(pmap(_grid_pmf_task, tasks, workers))


def _is_symmetric(pmf: Pmf) -> bool:
    return all(pmf.count_at(-v) == c for v, c in pmf.entries.items())


def _pmfs_equal(a: Pmf, b: Pmf) -> bool:
    return a.entries == b.entries and a.undefined_count == b.undefined_count and a.total == b.total


def _immunity(
    prop: PropertyId,
    measure: MeasureId,
    grid: RatioGrid,
    pmfs: GridPmfs,
    thresholds: Thresholds,
) -> PropertyVerdict:
    varied_axis = "ir" if prop is PropertyId.IMMUNITY_IR else "gr"
    fixed_values = grid.gr_grid if varied_axis == "ir" else grid.ir_grid
    varied_values = grid.ir_grid if varied_axis == "ir" else grid.gr_grid

    def point(fixed: Fraction, varied: Fraction) -> tuple[Fraction, Fraction]:
        return (varied, fixed) if varied_axis == "ir" else (fixed, varied)

    def axis_pairs():
        for fixed in fixed_values:
            for i, v1 in enumerate(varied_values):
                for v2 in varied_values[i + 1 :]:
                    yield point(fixed, v1), point(fixed, v2)

    strict_tv = Fraction(0)
    strict_pair = None
    for p1, p2 in axis_pairs():
        tv = tv_distance(pmfs[p1], pmfs[p2])
        if tv > strict_tv:
            strict_tv, strict_pair = tv, (p1, p2)
    detail = {"max_tv": format_ratio(strict_tv)}
    threshold = format_ratio(thresholds.immunity_tv)
    if strict_tv <= thresholds.immunity_tv:
        return PropertyVerdict(prop, measure, format_ratio(strict_tv), threshold, "holds", [], detail)
    witnesses = [_point_label(*p) for p in strict_pair] if strict_pair else []
    if prop is PropertyId.IMMUNITY_GR:
        # caveat: changing GR introduces undefined values while the binned
        # defined-only distribution keeps its shape
        undefined_varies = any(
            undefined_prob(pmfs[a]) != undefined_prob(pmfs[b]) for a, b in axis_pairs()
        )
        shape = Fraction(0)
        comparable = False
        for a, b in axis_pairs():
            if pmfs[a].defined_count() == 0 or pmfs[b].defined_count() == 0:
                continue
            comparable = True
            shape = max(shape, binned_shape_tv(pmfs[a], pmfs[b], thresholds.shape_bins))
        detail["undefined_varies"] = undefined_varies
        detail["max_shape_tv"] = format_ratio(shape) if comparable else None
        if undefined_varies and comparable and shape <= thresholds.shape_tv:
            return PropertyVerdict(
                prop, measure, format_ratio(strict_tv), threshold, "holds-with-caveat", witnesses, detail
            )
    return PropertyVerdict(prop, measure, format_ratio(strict_tv), threshold, "fails", witnesses, detail)


def _resolution_stability(
    measure: MeasureId, grid: RatioGrid, pmfs: GridPmfs, thresholds: Thresholds
) -> PropertyVerdict:
    counts = {point: pmfs[point].unique_defined_values() for point in grid.points()}
    low = min(counts.values())
    high = max(counts.values())
    detail = {
        "unique_values": {_point_label(*pt): c for pt, c in counts.items()},
        "min": low,
        "max": high,
    }
    statistic = Fraction(low, high) if high > 0 else Fraction(0)
    threshold = format_ratio(thresholds.resolution_ratio)
    if high > 0 and statistic >= thresholds.resolution_ratio:
        return PropertyVerdict(
            PropertyId.RESOLUTION_STABILITY, measure, format_ratio(statistic), threshold, "holds", [], detail
        )
    witnesses = [_point_label(*pt) for pt, c in counts.items() if c == low]
    return PropertyVerdict(
        PropertyId.RESOLUTION_STABILITY, measure, format_ratio(statistic), threshold, "fails", witnesses, detail
    )


def _fairness_symmetry(measure: MeasureId, grid: RatioGrid, pmfs: GridPmfs) -> PropertyVerdict:
    witnesses = [_point_label(*pt) for pt in grid.points() if not _is_symmetric(pmfs[pt])]
    verdict: Verdict = "holds" if not witnesses else "fails"
    return PropertyVerdict(
        PropertyId.FAIRNESS_SYMMETRY, measure, str(len(witnesses)), None, verdict, witnesses,
        {"asymmetric_points": len(witnesses)},
    )


def _axis_symmetry(
    prop: PropertyId, measure: MeasureId, grid: RatioGrid, pmfs: GridPmfs
) -> PropertyVerdict:
    axis: Literal["ir", "gr"] = "ir" if prop is PropertyId.IR_SYMMETRY else "gr"
    if not grid.closed_under_reflection(axis):
        raise ValueError(f"{axis} grid is not closed under r -> 1-r, required by {prop.value}")
    mirrored = grid.ir_grid if axis == "ir" else grid.gr_grid
    fixed_values = grid.gr_grid if axis == "ir" else grid.ir_grid
    witnesses: list[str] = []
    for fixed in fixed_values:
        for r in mirrored:
            if r > 1 - r:
                continue  # each counterpart pair once; r == 1-r is trivially equal
            if axis == "ir":
                a, b = (r, fixed), (1 - r, fixed)
            else:
                a, b = (fixed, r), (fixed, 1 - r)
            if not _pmfs_equal(pmfs[a], pmfs[b]):
                witnesses.extend([_point_label(*a), _point_label(*b)])
            if prop is PropertyId.GR_SYMMETRY:
                _check_gr_mirror_consistency(pmfs[a], pmfs[b], a, b)
    verdict: Verdict = "holds" if not witnesses else "fails"
    return PropertyVerdict(prop, measure, str(len(witnesses) // 2), None, verdict, witnesses, {})


def _check_gr_mirror_consistency(
    pmf_a: Pmf, pmf_b: Pmf, pt_a: tuple[Fraction, Fraction], pt_b: tuple[Fraction, Fraction]
) -> None:
    """The group-swap bijection makes pmf(GR=1-g) the value-negation of
    pmf(GR=g), so counterpart equality must coincide with symmetry at the
    point; a violation indicates a pmf computation bug."""
    equal = _pmfs_equal(pmf_a, pmf_b)
    symmetric = _is_symmetric(pmf_a)
    if equal != symmetric:
        raise RuntimeError(
            "GR mirror consistency violated between "
            f"{_point_label(*pt_a)} and {_point_label(*pt_b)}"
        )


def _perfect_fairness_stability(
    measure: MeasureId, grid: RatioGrid, pmfs: GridPmfs, thresholds: Thresholds
) -> PropertyVerdict:
    probs = {pt: perfect_fairness_prob(pmfs[pt]) for pt in grid.points()}
    high = max(probs.values())
    low = min(probs.values())
    detail = {"perfect_fairness_prob": {_point_label(*pt): format_ratio(v) for pt, v in probs.items()}}
    threshold = format_ratio(thresholds.perfect_fairness_ratio)
    prop = PropertyId.PERFECT_FAIRNESS_STABILITY
    if high == 0:
        return PropertyVerdict(prop, measure, "0/1", threshold, "holds", [], detail)
    witnesses = [_point_label(*pt) for pt in grid.points() if probs[pt] in (low, high)]
    if low == 0:
        return PropertyVerdict(prop, measure, "infinite", threshold, "fails", witnesses, detail)
    statistic = high / low
    verdict: Verdict = "holds" if statistic <= thresholds.perfect_fairness_ratio else "fails"
    return PropertyVerdict(
        prop, measure, format_ratio(statistic), threshold, verdict,
        witnesses if verdict == "fails" else [], detail,
    )


def _undefined_values(measure: MeasureId, grid: RatioGrid, pmfs: GridPmfs) -> PropertyVerdict:
    probs = {_point_label(*pt): format_ratio(undefined_prob(pmfs[pt])) for pt in grid.points()}
    detail = {
        "undefined_prob": probs,
        "group_condition": UNDEFINED_GROUP_CONDITION[measure],
    }
    return PropertyVerdict(
        PropertyId.UNDEFINED_VALUES, measure, UNDEFINED_CONDITION[measure], None, "descriptive", [], detail
    )


def evaluate_property(
    prop: PropertyId,
    measure: MeasureId,
    grid: RatioGrid,
    thresholds: Thresholds = Thresholds(),
    pmfs: GridPmfs | None = None,
    workers: int = 1,
) -> PropertyVerdict:
    """Verdict for one (property, measure) cell on the grid."""
    if pmfs is None:
        pmfs = grid_pmfs(measure, grid, workers)
    if prop in (PropertyId.IMMUNITY_IR, PropertyId.IMMUNITY_GR):
        return _immunity(prop, measure, grid, pmfs, thresholds)
    if prop is PropertyId.RESOLUTION_STABILITY:
        return _resolution_stability(measure, grid, pmfs, thresholds)
    if prop is PropertyId.FAIRNESS_SYMMETRY:
        return _fairness_symmetry(measure, grid, pmfs)
    if prop in (PropertyId.IR_SYMMETRY, PropertyId.GR_SYMMETRY):
        return _axis_symmetry(prop, measure, grid, pmfs)
    if prop is PropertyId.PERFECT_FAIRNESS_STABILITY:
        return _perfect_fairness_stability(measure, grid, pmfs, thresholds)
    return _undefined_values(measure, grid, pmfs)


@dataclass
class PropertyReport:
    grid: RatioGrid
    thresholds: Thresholds
    cells: list[PropertyVerdict]

    def cell(self, prop: PropertyId, measure: MeasureId) -> PropertyVerdict:
        for c in self.cells:
            if c.property is prop and c.measure is measure:
                return c
        raise KeyError((prop, measure))

    def verdict_table(self) -> dict[PropertyId, dict[MeasureId, str]]:
        table: dict[PropertyId, dict[MeasureId, str]] = {}
        for c in self.cells:
            table.setdefault(c.property, {})[c.measure] = c.verdict
        return table


def property_report(
    grid: RatioGrid, thresholds: Thresholds = Thresholds(), workers: int = 1
) -> PropertyReport:
    """Full 8-property x 6-measure report with auditable statistics."""
    for axis, prop in (("ir", PropertyId.IR_SYMMETRY), ("gr", PropertyId.GR_SYMMETRY)):
        if not grid.closed_under_reflection(axis):
            raise ValueError(f"{axis} grid is not closed under r -> 1-r, required by {prop.value}")
    tasks = [(measure, grid.n, ir, gr) for measure in MeasureId for ir, gr in grid.points()]
    results = pmap(_grid_pmf_task, tasks, workers)
    per_measure: dict[MeasureId, GridPmfs] = {m: {} for m in MeasureId}
    for (measure, _, ir, gr), (point, pmf) in zip(tasks, results):
        per_measure[measure][point] = pmf
    cells = [
        evaluate_property(prop, measure, grid, thresholds, per_measure[measure])
        for prop in PropertyId
        for measure in MeasureId
    ]
    return PropertyReport(grid, thresholds, cells)
