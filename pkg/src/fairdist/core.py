"""Exact-arithmetic vocabulary shared by the whole package.

Measure values and probabilities are `fractions.Fraction` throughout; a
fairness value that cannot be evaluated (zero denominator in a per-group
statistic) is represented as ``None``, never as a sentinel number.
Counts are plain Python integers, which are exact at any size.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

#: A fairness/performance value: an exact rational, or None when the
#: defining denominator is zero.
MeasureValue = Optional[Fraction]


class InexactRatioError(ValueError):
    """A ratio does not yield an integer count for the requested n."""


class LimitError(ValueError):
    """A requested computation exceeds the configured enumeration limit."""


def rational(num: int, den: int) -> Fraction:
    """Exact reduced fraction with positive denominator.

    Raises ZeroDivisionError for a zero denominator.
    """
    return Fraction(num, den)


def parse_ratio(text: str) -> Fraction:
    """Parse a ratio from a "num/den" or decimal string, exactly.

    "1/28" and "0.25" are both accepted; decimal strings convert to the
    exact decimal value (0.1 becomes 1/10, not the binary float).
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a valid ratio: {text!r}") from exc


def format_ratio(value: Fraction) -> str:
    """Render a Fraction as "num/den" (denominator kept even when 1)."""
    return f"{value.numerator}/{value.denominator}"


class MeasureId(enum.Enum):
    """The six difference-based group fairness measures."""

    ACCURACY_EQUALITY = "accuracy-equality"
    STATISTICAL_PARITY = "statistical-parity"
    EQUAL_OPPORTUNITY = "equal-opportunity"
    PREDICTIVE_EQUALITY = "predictive-equality"
    POSITIVE_PREDICTIVE_PARITY = "positive-predictive-parity"
    NEGATIVE_PREDICTIVE_PARITY = "negative-predictive-parity"

    @classmethod
    def from_token(cls, token: str) -> "MeasureId":
        try:
            return cls(token)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown measure {token!r}; expected one of: {valid}") from None


MEASURES: tuple[MeasureId, ...] = tuple(MeasureId)


class GroupCounts(NamedTuple):
    """One group's confusion quadruple."""

    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def validate(self) -> "GroupCounts":
        if any(c < 0 for c in self):
            raise ValueError(f"confusion counts must be non-negative, got {tuple(self)}")
        return self


class ConfusionPair(NamedTuple):
    """Per-group confusion matrices for the protected and unprotected group."""

    protected: GroupCounts
    unprotected: GroupCounts

    @property
    def n(self) -> int:
        return self.protected.total + self.unprotected.total

    @property
    def positives(self) -> int:
        return self.protected.positives + self.unprotected.positives

    @property
    def negatives(self) -> int:
        return self.protected.negatives + self.unprotected.negatives

    def swap_groups(self) -> "ConfusionPair":
        return ConfusionPair(self.unprotected, self.protected)

    def as_tuple(self) -> tuple[int, ...]:
        """Flat 8-tuple (tp_p, fn_p, fp_p, tn_p, tp_up, fn_up, fp_up, tn_up)."""
        return tuple(self.protected) + tuple(self.unprotected)

    @classmethod
    def from_tuple(cls, counts: tuple[int, ...]) -> "ConfusionPair":
        if len(counts) != 8:
            raise ValueError(f"expected 8 confusion counts, got {len(counts)}")
        return cls(GroupCounts(*counts[:4]).validate(), GroupCounts(*counts[4:]).validate())


@dataclass(frozen=True)
class Stratum:
    """All confusion pairs sharing a dataset size, positive count and
    protected-group size; one (IR, GR) grid point."""

    n: int
    p: int
    n_p: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dataset size must be positive, got n={self.n}")
        if not 0 <= self.p <= self.n:
            raise ValueError(f"positives must satisfy 0 <= p <= n, got p={self.p}, n={self.n}")
        if not 0 <= self.n_p <= self.n:
            raise ValueError(
                f"protected size must satisfy 0 <= n_p <= n, got n_p={self.n_p}, n={self.n}"
            )

    @property
    def negatives(self) -> int:
        return self.n - self.p

    @property
    def n_up(self) -> int:
        return self.n - self.n_p

    @property
    def ir(self) -> Fraction:
        return Fraction(self.p, self.n)

    @property
    def gr(self) -> Fraction:
        return Fraction(self.n_p, self.n)

    def contains(self, pair: ConfusionPair) -> bool:
        return (
            pair.n == self.n
            and pair.positives == self.p
            and pair.protected.total == self.n_p
        )


def stratum_from_ratios(n: int, ir: Fraction, gr: Fraction) -> Stratum:
    """Stratum for exact ratios: p = ir*n and n_p = gr*n must be integers."""
    if not 0 <= ir <= 1:
        raise ValueError(f"IR must lie in [0, 1], got {ir}")
    if not 0 <= gr <= 1:
        raise ValueError(f"GR must lie in [0, 1], got {gr}")
    p = ir * n
    if p.denominator != 1:
        raise InexactRatioError(f"IR {format_ratio(ir)} does not divide n={n} into a whole count")
    n_p = gr * n
    if n_p.denominator != 1:
        raise InexactRatioError(f"GR {format_ratio(gr)} does not divide n={n} into a whole count")
    return Stratum(n=n, p=int(p), n_p=int(n_p))
