"""Controlled-ratio subsampling with exact cell arithmetic."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pandas as pd

from .data import positive_mask, protected_mask

CELL_NAMES = ("protected-positive", "protected-negative", "unprotected-positive", "unprotected-negative")


@dataclass(frozen=True)
class CellCounts:
    protected_positive: int
    protected_negative: int
    unprotected_positive: int
    unprotected_negative: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (
            self.protected_positive,
            self.protected_negative,
            self.unprotected_positive,
            self.unprotected_negative,
        )

    @property
    def total(self) -> int:
        return sum(self.as_tuple())


def cell_counts(n: int, ir: Fraction, gr: Fraction) -> CellCounts:
    """Class x group cell sizes for a subset of n rows.

    The class split (IR) and group split (GR) must divide n exactly; the
    protected-positive interaction cell takes the floor of IR*GR*n, the
    remaining cells absorb the residual, so both marginals stay exact.
    """
    positives = ir * n
    protected = gr * n
    if positives.denominator != 1:
        raise ValueError(f"IR {ir} does not divide n={n} into a whole class count")
    if protected.denominator != 1:
        raise ValueError(f"GR {gr} does not divide n={n} into a whole group count")
    p, n_p = int(positives), int(protected)
    pp = int(ir * gr * n)  # floor
    counts = CellCounts(
        protected_positive=pp,
        protected_negative=n_p - pp,
        unprotected_positive=p - pp,
        unprotected_negative=(n - p) - (n_p - pp),
    )
    if min(counts.as_tuple()) < 0 or counts.total != n:
        raise ValueError(f"infeasible cell split for n={n}, IR={ir}, GR={gr}")
    return counts


def sample_controlled_subset(
    source: pd.DataFrame, n: int, ir: Fraction, gr: Fraction, rng: np.random.Generator
) -> tuple[pd.DataFrame, CellCounts]:
    """Subset of exactly n rows realizing the requested cell counts.

    Raises when the source cannot fill a cell, naming that cell.
    """
    counts = cell_counts(n, ir, gr)
    positive = positive_mask(source)
    protected = protected_mask(source)
    pools = {
        "protected-positive": source.index[protected & positive],
        "protected-negative": source.index[protected & ~positive],
        "unprotected-positive": source.index[~protected & positive],
        "unprotected-negative": source.index[~protected & ~positive],
    }
    chosen = []
    for cell_name, need in zip(CELL_NAMES, counts.as_tuple()):
        pool = pools[cell_name]
        if len(pool) < need:
            raise ValueError(
                f"source data cannot fill the {cell_name} cell: need {need} rows, have {len(pool)}"
            )
        chosen.append(rng.choice(pool.to_numpy(), size=need, replace=False))
    picked = np.concatenate(chosen)
    subset = source.loc[picked].reset_index(drop=True)
    return subset, counts


def cell_labels(df: pd.DataFrame) -> pd.Series:
    """Class x group stratification label for holdout splitting."""
    positive = positive_mask(df)
    protected = protected_mask(df)
    return (positive.astype(int) * 2 + protected.astype(int)).rename("cell")
