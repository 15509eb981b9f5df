"""Aggregation of experiment results: mean/std tables, fairness-vs-ratio
plots with standard-deviation bands, and the stability-ordering summary."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from .engine import MEASURE_TOKENS

PERF_COLUMNS = ("roc_auc", "g_mean", "recall", "f1")


def fairness_to_float(value) -> float:
    """Exact "num/den" string to float; "undefined" and blanks to NaN."""
    if isinstance(value, float) and np.isnan(value):
        return np.nan
    if value is None or value == "" or value == "undefined":
        return np.nan
    return float(Fraction(str(value)))


def load_results(path) -> pd.DataFrame:
    df = pd.read_csv(path)
    for token in MEASURE_TOKENS:
        if token in df.columns:
            df[token] = df[token].map(fairness_to_float)
    df["ratio_value"] = df["ratio"].map(lambda r: float(Fraction(str(r))))
    return df


def performance_table(df: pd.DataFrame, metric: str) -> pd.DataFrame:
    """Rows = (axis, ratio), columns = classifiers, entries "mean (std)"."""
    if metric not in PERF_COLUMNS:
        raise ValueError(f"unknown metric {metric!r}; expected one of: {', '.join(PERF_COLUMNS)}")
    rows = []
    for (axis, ratio), chunk in df.groupby(["axis", "ratio_value"], sort=True):
        row: dict = {"axis": axis, "ratio": f"{ratio:g}"}
        for classifier, sub in chunk.groupby("classifier"):
            values = sub[metric].dropna()
            row[classifier] = (
                f"{values.mean():.3f} ({values.std(ddof=0):.3f})" if len(values) else "-"
            )
        rows.append(row)
    return pd.DataFrame(rows)


def fairness_summary(df: pd.DataFrame, axis: str) -> pd.DataFrame:
    """Mean and std of each fairness measure per (ratio, classifier)."""
    chunk = df[df["axis"] == axis]
    frames = []
    for token in MEASURE_TOKENS:
        grouped = chunk.groupby(["classifier", "ratio_value"])[token]
        summary = grouped.agg(mean="mean", std=lambda v: v.dropna().std(ddof=0)).reset_index()
        summary["measure"] = token
        frames.append(summary)
    return pd.concat(frames, ignore_index=True)


def stability_ordering(df: pd.DataFrame, axis: str = "ir") -> dict:
    """Figure-8 comparison: per classifier, the worst-case (max over
    ratio points) standard deviation of the two whole-matrix measures
    versus the two predictive-parity measures."""
    summary = fairness_summary(df, axis)
    stable = ("accuracy-equality", "statistical-parity")
    unstable = ("positive-predictive-parity", "negative-predictive-parity")
    verdicts = {}
    for classifier, chunk in summary.groupby("classifier"):
        ranges = {
            token: chunk[chunk["measure"] == token]["std"].max()
            for token in stable + unstable
        }
        worst_stable = max(ranges[t] for t in stable)
        best_unstable = min(ranges[t] for t in unstable)
        verdicts[classifier] = {
            "ranges": {k: (None if pd.isna(v) else float(v)) for k, v in ranges.items()},
            "stable_below_unstable": bool(worst_stable < best_unstable),
        }
    satisfied = sum(1 for v in verdicts.values() if v["stable_below_unstable"])
    return {"axis": axis, "per_classifier": verdicts, "classifiers_satisfying": satisfied}


def plot_fairness_curves(df: pd.DataFrame, axis: str, out_dir) -> list[Path]:
    """One figure per measure: mean lines with std bands per classifier."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = fairness_summary(df, axis)
    written = []
    for token in MEASURE_TOKENS:
        chunk = summary[summary["measure"] == token]
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for classifier, sub in chunk.groupby("classifier"):
            sub = sub.sort_values("ratio_value")
            mean = sub["mean"].to_numpy(dtype=float)
            std = sub["std"].fillna(0).to_numpy(dtype=float)
            x = sub["ratio_value"].to_numpy(dtype=float)
            ax.plot(x, mean, marker="o", markersize=3, label=classifier)
            ax.fill_between(x, mean - std, mean + std, alpha=0.2)
        ax.set_xlabel(axis.upper())
        ax.set_ylabel(token)
        ax.set_ylim(-1.05, 1.05)
        ax.axhline(0.0, color="grey", linewidth=0.6)
        ax.legend(fontsize=7)
        fig.tight_layout()
        path = out / f"fairness_{token}_{axis}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def aggregate_and_plot(results_path, out_dir) -> dict:
    """Tables, plots and the stability summary for a results file."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    df = load_results(results_path)
    for metric in PERF_COLUMNS:
        performance_table(df, metric).to_csv(out / f"table_{metric}.csv", index=False)
    summary: dict = {}
    for axis in sorted(df["axis"].unique()):
        plot_fairness_curves(df, axis, out)
        fairness_summary(df, axis).to_csv(out / f"fairness_summary_{axis}.csv", index=False)
        summary[axis] = stability_ordering(df, axis)
    (out / "stability.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary
