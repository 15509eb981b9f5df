"""Independent brute-force oracles used by the tests.

Everything here is written directly from the measure definitions and
stars-and-bars enumeration, on purpose not reusing the package's
decomposition or convolution code paths.
"""
from fractions import Fraction
from typing import Iterator, Optional

FLAT_FIELDS = ("tp_p", "fn_p", "fp_p", "tn_p", "tp_up", "fn_up", "fp_up", "tn_up")


def compositions(total: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in compositions(total - head, k - 1):
            yield (head,) + tail


def brute_pairs(n: int) -> Iterator[tuple[int, ...]]:
    """All flat 8-tuples summing to n."""
    yield from compositions(n, 8)


def oracle_stat(token: str, tp: int, fn: int, fp: int, tn: int) -> Optional[Fraction]:
    if token == "accuracy-equality":
        num, den = tp + tn, tp + fn + fp + tn
    elif token == "statistical-parity":
        num, den = tp + fp, tp + fn + fp + tn
    elif token == "equal-opportunity":
        num, den = tp, tp + fn
    elif token == "predictive-equality":
        num, den = fp, fp + tn
    elif token == "positive-predictive-parity":
        num, den = tp, tp + fp
    elif token == "negative-predictive-parity":
        num, den = tn, tn + fn
    else:
        raise ValueError(token)
    return None if den == 0 else Fraction(num, den)


def oracle_value(token: str, flat: tuple[int, ...]) -> Optional[Fraction]:
    stat_p = oracle_stat(token, *flat[:4])
    stat_up = oracle_stat(token, *flat[4:])
    if stat_p is None or stat_up is None:
        return None
    return stat_p - stat_up


def stratum_key(flat: tuple[int, ...]) -> tuple[int, int]:
    """(actual positives, protected size) of a flat tuple."""
    positives = flat[0] + flat[1] + flat[4] + flat[5]
    protected = sum(flat[:4])
    return positives, protected


def bucket_by_stratum(n: int) -> dict[tuple[int, int], list[tuple[int, ...]]]:
    buckets: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for flat in brute_pairs(n):
        buckets.setdefault(stratum_key(flat), []).append(flat)
    return buckets


def oracle_pmf(token: str, flats) -> tuple[dict[Fraction, int], int, int]:
    entries: dict[Fraction, int] = {}
    undefined = 0
    total = 0
    for flat in flats:
        total += 1
        v = oracle_value(token, flat)
        if v is None:
            undefined += 1
        else:
            entries[v] = entries.get(v, 0) + 1
    return entries, undefined, total
