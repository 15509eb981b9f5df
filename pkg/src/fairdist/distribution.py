"""Exact probability mass functions of measure values per stratum, the
derived perfect-fairness / undefined probabilities, sweep curves, binned
histograms, and fairness-vs-performance heatmaps.

All pmfs are exact value->count maps with an explicit undefined bucket;
probabilities are Fractions whose denominator, by default, includes the
undefined pairs so that defined-value, perfect-fairness and undefined
probabilities share a common footing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Literal, Sequence

from .core import GroupCounts, LimitError, MeasureId, Stratum, stratum_from_ratios
from .enumeration import enumerate_all, enumerate_stratum, stratum_cells, stratum_count, total_count
from .measures import group_statistic, measure_value
from .parallel import pmap

DEFAULT_BIN_COUNT = 41
DEFAULT_HEATMAP_N = 32
# joint_heatmap streams every pair; refuse enumerations past this budget
ENUMERATION_LIMIT = 10_000_000_000

SweepStatistic = Literal["perfect-fairness", "undefined", "unique-values"]
SWEEP_STATISTICS = ("perfect-fairness", "undefined", "unique-values")


@dataclass
class Pmf:
    """Exact distribution of a measure over some set of confusion pairs."""

    entries: dict[Fraction, int]
    undefined_count: int
    total: int

    def defined_count(self) -> int:
        return self.total - self.undefined_count

    def unique_defined_values(self) -> int:
        return len(self.entries)

    def sorted_entries(self) -> list[tuple[Fraction, int]]:
        return sorted(self.entries.items())

    def count_at(self, value: Fraction) -> int:
        return self.entries.get(value, 0)

    def check(self) -> "Pmf":
        if sum(self.entries.values()) + self.undefined_count != self.total:
            raise ValueError("pmf counts do not sum to total")
        if any(c <= 0 for c in self.entries.values()):
            raise ValueError("pmf entries must hold positive counts")
        if any(not -1 <= v <= 1 for v in self.entries):
            raise ValueError("pmf values must lie in [-1, 1]")
        return self


def merge_pmfs(parts: Iterable[Pmf]) -> Pmf:
    """Pointwise sum of partial pmfs (associative and commutative)."""
    entries: dict[Fraction, int] = {}
    undefined = 0
    total = 0
    for part in parts:
        for v, c in part.entries.items():
            entries[v] = entries.get(v, 0) + c
        undefined += part.undefined_count
        total += part.total
    return Pmf(entries, undefined, total)


@lru_cache(maxsize=None)
def _group_statistic_items(
    measure: MeasureId, positives: int, negatives: int
) -> tuple[tuple[tuple[Fraction, int], ...], int, int]:
    """Cached per-group distribution over the (positives+1)*(negatives+1)
    tuples {tp in [0, positives]} x {fp in [0, negatives]}."""
    counts: dict[Fraction, int] = {}
    undefined = 0
    for tp in range(positives + 1):
        fn = positives - tp
        for fp in range(negatives + 1):
            v = group_statistic(measure, GroupCounts(tp, fn, fp, negatives - fp))
            if v is None:
                undefined += 1
            else:
                counts[v] = counts.get(v, 0) + 1
    total = (positives + 1) * (negatives + 1)
    return tuple(sorted(counts.items())), undefined, total


def group_statistic_pmf(measure: MeasureId, positives: int, negatives: int) -> Pmf:
    """Exact pmf of the per-group statistic for one (P_g, N_g) cell."""
    if positives < 0 or negatives < 0:
        raise ValueError("cell sizes must be non-negative")
    items, undefined, total = _group_statistic_items(measure, positives, negatives)
    return Pmf(dict(items), undefined, total)


def stratum_pmf_fast(measure: MeasureId, s: Stratum) -> Pmf:
    """Exact measure pmf over a stratum via per-cell difference-convolution.

    Within a cell (fixed protected positives) the two groups' statistics
    are independent, so the difference distribution is the convolution of
    the per-group pmfs; cells are then summed.  Any pair with an
    undefined side lands in the undefined bucket.
    """
    entries: dict[Fraction, int] = {}
    undefined = 0
    total = 0
    for cell in stratum_cells(s):
        items_p, und_p, tot_p = _group_statistic_items(measure, cell.p_pos, cell.p_neg)
        items_up, und_up, tot_up = _group_statistic_items(measure, cell.u_pos, cell.u_neg)
        total += tot_p * tot_up
        undefined += tot_p * tot_up - (tot_p - und_p) * (tot_up - und_up)
        for v_p, c_p in items_p:
            for v_up, c_up in items_up:
                key = v_p - v_up
                entries[key] = entries.get(key, 0) + c_p * c_up
    return Pmf(entries, undefined, total)


def stratum_pmf_bruteforce(
    measure: MeasureId, s: Stratum, workers: int = 1
) -> Pmf:
    """Same contract as stratum_pmf_fast, by direct enumeration.

    Serves as the independent oracle for the convolution path; chunks by
    protected-positive count when given multiple workers.
    """
    cells = stratum_cells(s)
    if workers <= 1 or len(cells) <= 1:
        return _bruteforce_chunk((measure, s, None))
    chunks = [(measure, s, (cell.p_pos,)) for cell in cells]
    return merge_pmfs(pmap(_bruteforce_chunk, chunks, workers))


def _bruteforce_chunk(args: tuple[MeasureId, Stratum, tuple[int, ...] | None]) -> Pmf:
    measure, s, p_pos_values = args
    entries: dict[Fraction, int] = {}
    undefined = 0
    total = 0
    for pair in enumerate_stratum(s, p_pos_values):
        total += 1
        v = measure_value(measure, pair)
        if v is None:
            undefined += 1
        else:
            entries[v] = entries.get(v, 0) + 1
    return Pmf(entries, undefined, total)


def perfect_fairness_prob(pmf: Pmf, defined_only: bool = False) -> Fraction:
    """Probability of the value exactly 0; denominator includes undefined
    pairs unless `defined_only` renormalizes to defined values."""
    if pmf.total == 0:
        raise ValueError("pmf is empty")
    denominator = pmf.defined_count() if defined_only else pmf.total
    if denominator == 0:
        raise ValueError("pmf has no defined values to renormalize over")
    return Fraction(pmf.count_at(Fraction(0)), denominator)


def undefined_prob(pmf: Pmf) -> Fraction:
    if pmf.total == 0:
        raise ValueError("pmf is empty")
    return Fraction(pmf.undefined_count, pmf.total)


def fairness_bin_index(value: Fraction, bin_count: int) -> int:
    """Equal-width bin over [-1, 1]: floor((v+1)/width), right edge clamped."""
    num, den = value.numerator, value.denominator
    index = ((num + den) * bin_count) // (2 * den)
    return min(index, bin_count - 1)


def perf_bin_index(value: Fraction, bin_count: int, *, take_sqrt: bool = False) -> int:
    """Equal-width bin over [0, 1].

    Exact integer arithmetic for rational values; for g-mean the square
    root of the radicand is applied here in double precision, with ties
    at bin edges resolving to the lower bin (except the clamped right
    edge, which stays in the last bin).
    """
    if take_sqrt:
        real = math.sqrt(value)
        if real <= 0:
            return 0
        return min(math.ceil(real * bin_count) - 1, bin_count - 1)
    index = (value.numerator * bin_count) // value.denominator
    return min(index, bin_count - 1)


@dataclass
class BinnedHistogram:
    """Presentation-only equal-width binning of an exact pmf over [-1, 1].

    An odd bin count keeps 0 interior to the central bin, so perfect
    fairness is never split across an edge.
    """

    bin_count: int
    counts: list[int]
    undefined_count: int

    @property
    def bin_edges(self) -> list[Fraction]:
        width = Fraction(2, self.bin_count)
        return [Fraction(-1) + k * width for k in range(self.bin_count + 1)]


def bin_histogram(pmf: Pmf, bin_count: int = DEFAULT_BIN_COUNT) -> BinnedHistogram:
    if bin_count < 1 or bin_count % 2 == 0:
        raise ValueError(f"bin count must be a positive odd integer, got {bin_count}")
    counts = [0] * bin_count
    for value, count in pmf.entries.items():
        counts[fairness_bin_index(value, bin_count)] += count
    return BinnedHistogram(bin_count, counts, pmf.undefined_count)


@dataclass
class SweepCurve:
    """One statistic of the per-stratum pmf along an IR or GR grid."""

    measure: MeasureId
    n: int
    varied: Literal["ir", "gr"]
    fixed: Fraction
    statistic: SweepStatistic
    denominator: Literal["all", "defined"]
    points: list[tuple[Fraction, Fraction | int]]


def _sweep_point(
    args: tuple[MeasureId, int, str, Fraction, Fraction, str, str]
) -> tuple[Fraction, Fraction | int]:
    measure, n, varied, ratio, fixed, statistic, denominator = args
    if varied == "ir":
        s = stratum_from_ratios(n, ratio, fixed)
    else:
        s = stratum_from_ratios(n, fixed, ratio)
    pmf = stratum_pmf_fast(measure, s)
    if statistic == "perfect-fairness":
        return ratio, perfect_fairness_prob(pmf, defined_only=(denominator == "defined"))
    if statistic == "undefined":
        return ratio, undefined_prob(pmf)
    return ratio, pmf.unique_defined_values()


def sweep_curve(
    measure: MeasureId,
    n: int,
    varied: Literal["ir", "gr"],
    grid: Sequence[Fraction],
    fixed_other: Fraction,
    statistic: SweepStatistic,
    denominator: Literal["all", "defined"] = "all",
    workers: int = 1,
) -> SweepCurve:
    """Requested statistic of stratum_pmf_fast at every grid point."""
    if varied not in ("ir", "gr"):
        raise ValueError(f"varied axis must be 'ir' or 'gr', got {varied!r}")
    if statistic not in SWEEP_STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}; expected one of: {', '.join(SWEEP_STATISTICS)}")
    # fail on any inexact point before computing anything
    for ratio in list(grid) + [fixed_other]:
        if varied == "ir":
            stratum_from_ratios(n, ratio, fixed_other)
        else:
            stratum_from_ratios(n, fixed_other, ratio)
    tasks = [(measure, n, varied, ratio, fixed_other, statistic, denominator) for ratio in grid]
    points = pmap(_sweep_point, tasks, workers)
    return SweepCurve(measure, n, varied, fixed_other, statistic, denominator, points)


@dataclass
class Heatmap2D:
    """Joint binning of a fairness measure against a performance measure.

    `cells[i][j]` counts pairs in fairness bin i and performance bin j;
    pairs undefined on an axis accumulate in that axis's marginal, the
    performance axis taking precedence when both are undefined.
    """

    measure: MeasureId
    perf: str
    n: int
    fairness_bins: int
    perf_bins: int
    cells: list[list[int]]
    fairness_undefined: int
    perf_undefined: int
    total: int
    stratum: Stratum | None = None

    def check(self) -> "Heatmap2D":
        accounted = sum(sum(row) for row in self.cells)
        accounted += self.fairness_undefined + self.perf_undefined
        if accounted != self.total:
            raise ValueError("heatmap cells and marginals do not sum to the pair total")
        return self


# integer-only per-group statistic numerator/denominator, keyed by token;
# must agree with measures.group_statistic (tested exhaustively)
def _stat_ints(token: str, tp: int, fn: int, fp: int, tn: int) -> tuple[int, int]:
    if token == "accuracy-equality":
        return tp + tn, tp + fn + fp + tn
    if token == "statistical-parity":
        return tp + fp, tp + fn + fp + tn
    if token == "equal-opportunity":
        return tp, tp + fn
    if token == "predictive-equality":
        return fp, fp + tn
    if token == "positive-predictive-parity":
        return tp, tp + fp
    return tn, tn + fn  # negative-predictive-parity


def _heatmap_chunk(
    args: tuple[str, str, int, int, int, tuple[int, int], tuple[int, int] | None]
) -> tuple[list[int], int, int, int]:
    token, perf, n, f_bins, p_bins, head_range, stratum_key = args
    flat = [0] * (f_bins * p_bins)
    fair_undef = 0
    perf_undef = 0
    seen = 0
    if stratum_key is None:
        stream = enumerate_all(n, range(head_range[0], head_range[1]))
    else:
        p, n_p = stratum_key
        stream = enumerate_stratum(
            Stratum(n, p, n_p), range(head_range[0], head_range[1])
        )
    gmean = perf == "g-mean"
    for pair in stream:
        seen += 1
        tp_p, fn_p, fp_p, tn_p = pair.protected
        tp_u, fn_u, fp_u, tn_u = pair.unprotected
        # performance axis first: this marginal wins when both are undefined
        if gmean:
            pos = tp_p + fn_p + tp_u + fn_u
            neg = fp_p + tn_p + fp_u + tn_u
            if pos == 0 or neg == 0:
                perf_undef += 1
                continue
            radicand = ((tp_p + tp_u) * (tn_p + tn_u)) / (pos * neg)
            real = math.sqrt(radicand)
            p_idx = 0 if real <= 0 else min(math.ceil(real * p_bins) - 1, p_bins - 1)
        else:
            correct = tp_p + tn_p + tp_u + tn_u
            p_idx = min((correct * p_bins) // n, p_bins - 1)
        a, b = _stat_ints(token, tp_p, fn_p, fp_p, tn_p)
        c, d = _stat_ints(token, tp_u, fn_u, fp_u, tn_u)
        if b == 0 or d == 0:
            fair_undef += 1
            continue
        num = a * d - c * b
        den = b * d
        f_idx = min(((num + den) * f_bins) // (2 * den), f_bins - 1)
        flat[f_idx * p_bins + p_idx] += 1
    return flat, fair_undef, perf_undef, seen


def joint_heatmap(
    measure: MeasureId,
    perf: str,
    n: int = DEFAULT_HEATMAP_N,
    fairness_bins: int = DEFAULT_BIN_COUNT,
    perf_bins: int = DEFAULT_BIN_COUNT,
    workers: int = 1,
    stratum: Stratum | None = None,
) -> Heatmap2D:
    """Stream every confusion pair of size n (or of one stratum) and bin
    (fairness value, performance value) jointly."""
    if perf not in ("accuracy", "g-mean"):
        raise ValueError(f"unknown performance measure {perf!r}")
    if fairness_bins < 1 or fairness_bins % 2 == 0:
        raise ValueError(f"fairness bin count must be a positive odd integer, got {fairness_bins}")
    if perf_bins < 1:
        raise ValueError(f"performance bin count must be positive, got {perf_bins}")
    if n < 1:
        raise ValueError(f"dataset size must be positive, got {n}")
    expected = stratum_count(stratum) if stratum is not None else total_count(n)
    if expected > ENUMERATION_LIMIT:
        raise LimitError(
            f"enumerating {expected} confusion pairs exceeds the supported budget "
            f"({ENUMERATION_LIMIT}); use a smaller n (default n={DEFAULT_HEATMAP_N})"
        )
    if stratum is not None and stratum.n != n:
        raise ValueError("stratum dataset size must match n")
    if stratum is None:
        heads = n + 1
        stratum_key = None
    else:
        heads = min(stratum.p, stratum.n_p) + 1
        stratum_key = (stratum.p, stratum.n_p)
    bounds = _chunk_bounds(heads, workers)
    tasks = [
        (measure.value, perf, n, fairness_bins, perf_bins, (lo, hi), stratum_key)
        for lo, hi in bounds
    ]
    parts = pmap(_heatmap_chunk, tasks, workers)
    cells = [[0] * perf_bins for _ in range(fairness_bins)]
    fair_undef = 0
    perf_undef = 0
    seen = 0
    for flat, fu, pu, chunk_seen in parts:
        fair_undef += fu
        perf_undef += pu
        seen += chunk_seen
        for i in range(fairness_bins):
            row = cells[i]
            base = i * perf_bins
            for j in range(perf_bins):
                row[j] += flat[base + j]
    result = Heatmap2D(
        measure, perf, n, fairness_bins, perf_bins, cells, fair_undef, perf_undef, seen, stratum
    )
    if seen != expected:
        raise RuntimeError("heatmap stream did not cover the expected pair count")
    return result.check()


def _chunk_bounds(heads: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, heads) into contiguous chunks, a few per worker."""
    if workers <= 1 or heads <= 1:
        return [(0, heads)]
    chunks = min(heads, workers * 4)
    step = heads / chunks
    bounds = [(round(i * step), round((i + 1) * step)) for i in range(chunks)]
    return [(lo, hi) for lo, hi in bounds if hi > lo]
