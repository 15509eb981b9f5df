"""The six group fairness measures plus the two predictive-performance
measures used by the fairness/performance heatmaps.

Each fairness measure is the difference between a per-group statistic
evaluated on the protected and the unprotected confusion matrix.  A
measure is undefined (None) whenever the statistic's denominator is zero
in either group.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .core import ConfusionPair, GroupCounts, MeasureId, MeasureValue

# numerator/denominator selectors per measure, over one group's counts
_GROUP_STATISTIC: dict[MeasureId, tuple[Callable[[GroupCounts], int], Callable[[GroupCounts], int]]] = {
    MeasureId.ACCURACY_EQUALITY: (lambda g: g.tp + g.tn, lambda g: g.total),
    MeasureId.STATISTICAL_PARITY: (lambda g: g.tp + g.fp, lambda g: g.total),
    MeasureId.EQUAL_OPPORTUNITY: (lambda g: g.tp, lambda g: g.tp + g.fn),
    MeasureId.PREDICTIVE_EQUALITY: (lambda g: g.fp, lambda g: g.fp + g.tn),
    MeasureId.POSITIVE_PREDICTIVE_PARITY: (lambda g: g.tp, lambda g: g.tp + g.fp),
    MeasureId.NEGATIVE_PREDICTIVE_PARITY: (lambda g: g.tn, lambda g: g.tn + g.fn),
}


def group_statistic(measure: MeasureId, g: GroupCounts) -> MeasureValue:
    """Per-group fraction of the measure; None when its denominator is zero."""
    num_of, den_of = _GROUP_STATISTIC[measure]
    den = den_of(g)
    if den == 0:
        return None
    return Fraction(num_of(g), den)


def measure_value(measure: MeasureId, pair: ConfusionPair) -> MeasureValue:
    """Protected-minus-unprotected statistic difference, in [-1, 1]."""
    stat_p = group_statistic(measure, pair.protected)
    if stat_p is None:
        return None
    stat_up = group_statistic(measure, pair.unprotected)
    if stat_up is None:
        return None
    return stat_p - stat_up


def accuracy(pair: ConfusionPair) -> MeasureValue:
    """Pooled accuracy (TP + TN) / n; None for an empty dataset."""
    n = pair.n
    if n == 0:
        return None
    correct = pair.protected.tp + pair.protected.tn + pair.unprotected.tp + pair.unprotected.tn
    return Fraction(correct, n)


def gmean_squared(pair: ConfusionPair) -> MeasureValue:
    """Exact square of the pooled G-mean: TPR * TNR of the combined matrix.

    Keeping the radicand rational defers the (irrational) square root to
    bin-assignment and export time.  None when the pooled matrix has no
    positives or no negatives.
    """
    p = pair.positives
    n_neg = pair.negatives
    if p == 0 or n_neg == 0:
        return None
    tp = pair.protected.tp + pair.unprotected.tp
    tn = pair.protected.tn + pair.unprotected.tn
    return Fraction(tp, p) * Fraction(tn, n_neg)


PERF_MEASURES = ("accuracy", "g-mean")


def perf_value(perf: str, pair: ConfusionPair) -> MeasureValue:
    """Exact performance value: accuracy itself, or the g-mean radicand."""
    if perf == "accuracy":
        return accuracy(pair)
    if perf == "g-mean":
        return gmean_squared(pair)
    raise ValueError(f"unknown performance measure {perf!r}; expected one of: {', '.join(PERF_MEASURES)}")


def swap_classes_for_separation(g: GroupCounts) -> GroupCounts:
    """Relabeling under which Equal Opportunity evaluates to Predictive
    Equality of the original counts: (tp, fn, fp, tn) -> (fp, tn, tp, fn)."""
    return GroupCounts(tp=g.fp, fn=g.tn, fp=g.tp, tn=g.fn)


def swap_classes_for_sufficiency(g: GroupCounts) -> GroupCounts:
    """Positive/negative class swap under which Negative Predictive Parity
    evaluates to Positive Predictive Parity: (tp, fn, fp, tn) -> (tn, fp, fn, tp)."""
    return GroupCounts(tp=g.tn, fn=g.fp, fp=g.fn, tn=g.tp)


def map_pair(pair: ConfusionPair, fn: Callable[[GroupCounts], GroupCounts]) -> ConfusionPair:
    return ConfusionPair(fn(pair.protected), fn(pair.unprotected))
