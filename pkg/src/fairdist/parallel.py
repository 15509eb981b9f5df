"""Deterministic worker-pool helper.

Results are collected in input order, so any aggregation downstream is
schedule-independent; a run with one worker and a run with many produce
identical outputs.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_WORKERS = "FAIRDIST_THREADS"


def default_workers() -> int:
    """Worker count from FAIRDIST_THREADS, else all cores."""
    env = os.environ.get(ENV_WORKERS)
    if env is not None and env.strip():
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{ENV_WORKERS} must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{ENV_WORKERS} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Map preserving input order, optionally across processes."""
    work = list(items)
    if workers <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ProcessPoolExecutor(max_workers=min(workers, len(work))) as pool:
        return list(pool.map(fn, work))
