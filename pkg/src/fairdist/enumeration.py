"""Counting and streaming generation of confusion pairs.

The full space for a dataset size n is the set of 8-tuples of
non-negative integers summing to n (stars and bars: C(n+7, 7) tuples).
A stratum fixes the positive count P and the protected-group size n_p;
its pairs are generated directly from a 5-dimensional decomposition
rather than by filtering the full space.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

from .core import ConfusionPair, GroupCounts, Stratum

K_CELLS = 8  # entries of a confusion pair


def total_count(n: int) -> int:
    """Number of confusion pairs of size n: C(n+7, 7)."""
    if n < 0:
        raise ValueError(f"dataset size must be non-negative, got {n}")
    return comb(n + K_CELLS - 1, K_CELLS - 1)


@dataclass(frozen=True)
class StratumCell:
    """One admissible protected-positive count and its derived cell sizes."""

    p_pos: int  # protected positives (P_p)
    p_neg: int  # protected negatives (N_p)
    u_pos: int  # unprotected positives (P_up)
    u_neg: int  # unprotected negatives (N_up)

    @property
    def count(self) -> int:
        return (self.p_pos + 1) * (self.p_neg + 1) * (self.u_pos + 1) * (self.u_neg + 1)


def stratum_cells(s: Stratum, p_pos_values: Iterable[int] | None = None) -> list[StratumCell]:
    """Admissible protected-positive counts with derived cell sizes.

    P_p ranges over [max(0, P + n_p - n), min(P, n_p)]; every derived
    cell size is non-negative exactly on that range.  `p_pos_values`
    restricts to a sub-range for chunked parallel consumption.
    """
    lo = max(0, s.p + s.n_p - s.n)
    hi = min(s.p, s.n_p)
    values: Sequence[int] = range(lo, hi + 1) if p_pos_values is None else sorted(
        v for v in p_pos_values if lo <= v <= hi
    )
    return [
        StratumCell(
            p_pos=p_pos,
            p_neg=s.n_p - p_pos,
            u_pos=s.p - p_pos,
            u_neg=s.n - s.p - s.n_p + p_pos,
        )
        for p_pos in values
    ]


def stratum_count(s: Stratum) -> int:
    """Exact number of confusion pairs with the stratum's n, P and n_p."""
    return sum(cell.count for cell in stratum_cells(s))


def iter_compositions(total: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-tuples of non-negative integers summing to `total`, in
    lexicographic order, with constant memory."""
    if k == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in iter_compositions(total - head, k - 1):
            yield (head,) + tail


def enumerate_all(n: int, first_entry: range | None = None) -> Iterator[ConfusionPair]:
    """Every confusion pair of size n exactly once, lexicographic in the
    flat tuple (tp_p, fn_p, fp_p, tn_p, tp_up, fn_up, fp_up, tn_up).

    `first_entry` restricts tp_p to a sub-range, which partitions the
    stream into independently consumable chunks.
    """
    if n < 0:
        raise ValueError(f"dataset size must be non-negative, got {n}")
    heads = range(n + 1) if first_entry is None else first_entry
    for tp_p in heads:
        if not 0 <= tp_p <= n:
            continue
        for rest in iter_compositions(n - tp_p, K_CELLS - 1):
            yield ConfusionPair(
                GroupCounts(tp_p, rest[0], rest[1], rest[2]),
                GroupCounts(rest[3], rest[4], rest[5], rest[6]),
            )


def enumerate_stratum(s: Stratum, p_pos_values: Iterable[int] | None = None) -> Iterator[ConfusionPair]:
    """Every confusion pair of the stratum exactly once, generated from
    the cell decomposition (no filtering of the full space).

    Order: ascending protected positives, then tp_p, fp_p, tp_up, fp_up.
    `p_pos_values` restricts to a chunk of cells.
    """
    for cell in stratum_cells(s, p_pos_values):
        for tp_p in range(cell.p_pos + 1):
            fn_p = cell.p_pos - tp_p
            for fp_p in range(cell.p_neg + 1):
                protected = GroupCounts(tp_p, fn_p, fp_p, cell.p_neg - fp_p)
                for tp_up in range(cell.u_pos + 1):
                    fn_up = cell.u_pos - tp_up
                    for fp_up in range(cell.u_neg + 1):
                        yield ConfusionPair(
                            protected,
                            GroupCounts(tp_up, fn_up, fp_up, cell.u_neg - fp_up),
                        )
