"""Exact distributions of group fairness measures over confusion pairs."""

from .core import (
    ConfusionPair,
    GroupCounts,
    InexactRatioError,
    LimitError,
    MeasureId,
    MeasureValue,
    Stratum,
    format_ratio,
    parse_ratio,
    rational,
    stratum_from_ratios,
)
from .distribution import (
    BinnedHistogram,
    Heatmap2D,
    Pmf,
    SweepCurve,
    bin_histogram,
    group_statistic_pmf,
    joint_heatmap,
    perfect_fairness_prob,
    stratum_pmf_bruteforce,
    stratum_pmf_fast,
    sweep_curve,
    undefined_prob,
)
from .enumeration import enumerate_all, enumerate_stratum, stratum_count, total_count
from .measures import accuracy, gmean_squared, group_statistic, measure_value
from .properties import (
    PropertyId,
    PropertyReport,
    PropertyVerdict,
    RatioGrid,
    Thresholds,
    evaluate_property,
    property_report,
    tv_distance,
)

__version__ = "0.1.0"
