"""Fairness scoring through the primary engine's `measure` subcommand.

The harness never evaluates the fairness formulas itself: confusion
counts go out as JSON lines over a pipe and exact "num/den" strings (or
the token "undefined") come back.
"""
from __future__ import annotations

import json
import os
import subprocess

COUNT_FIELDS = ("tp_p", "fn_p", "fp_p", "tn_p", "tp_up", "fn_up", "fp_up", "tn_up")

MEASURE_TOKENS = (
    "accuracy-equality",
    "statistical-parity",
    "equal-opportunity",
    "predictive-equality",
    "positive-predictive-parity",
    "negative-predictive-parity",
)


class MeasureEngine:
    """Thin client for `fairdist measure` (override via FAIRDIST_BIN)."""

    def __init__(self, binary: str | None = None):
        self.binary = binary or os.environ.get("FAIRDIST_BIN", "fairdist")

    def score(self, batch: list[dict]) -> list[dict]:
        """One result object per record, order preserved."""
        if not batch:
            return []
        payload = "\n".join(json.dumps(record) for record in batch) + "\n"
        proc = subprocess.run(
            [self.binary, "measure"],
            input=payload,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            raise RuntimeError(
                f"{self.binary} measure failed with exit {proc.returncode}: {proc.stderr.strip()}"
            )
        results = [json.loads(line) for line in proc.stdout.splitlines() if line.strip()]
        if len(results) != len(batch):
            raise RuntimeError(
                f"engine returned {len(results)} results for {len(batch)} records"
            )
        return results


def confusion_record(tp_p, fn_p, fp_p, tn_p, tp_up, fn_up, fp_up, tn_up, ident=None) -> dict:
    record = dict(zip(COUNT_FIELDS, (int(tp_p), int(fn_p), int(fp_p), int(tn_p),
                                     int(tp_up), int(fn_up), int(fp_up), int(tn_up))))
    if ident is not None:
        record["id"] = ident
    return record
