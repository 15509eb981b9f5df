"""Case-study acceptance criteria.

The sampler criterion runs unconditionally.  The two quantitative
criteria replicate the census experiment and therefore need the real
Adult CSV, which this sandbox cannot download (no network beyond the
package mirror): point ADULT_CSV at the file, or drop it at
casestudy/data/adult.csv, and they run in full; otherwise they skip
with that reason.
"""
import os
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from casestudy.config import SamplingSpec
from casestudy.data import load_adult, synthetic_adult
from casestudy.engine import MeasureEngine
from casestudy.pipeline import records_to_frame, run_experiment
from casestudy.aggregate import load_results, stability_ordering
from casestudy.sampling import sample_controlled_subset

F = Fraction

DATA_CANDIDATES = [
    os.environ.get("ADULT_CSV"),
    str(Path(__file__).resolve().parents[1] / "data" / "adult.csv"),
    str(Path(__file__).resolve().parents[1] / "data" / "adult.data"),
]

SKIP_REASON = (
    "UCI Adult dataset not available (this environment has no network beyond the "
    "package mirror); set ADULT_CSV or place casestudy/data/adult.csv to run"
)


def adult_path():
    for candidate in DATA_CANDIDATES:
        if candidate and Path(candidate).exists():
            return candidate
    return None


@contextmanager
def criterion(name):
    started = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[acceptance] FAIL  {name}  ({time.perf_counter() - started:.2f}s)")
        raise
    print(f"[acceptance] PASS  {name}  ({time.perf_counter() - started:.2f}s)")


def test_sampled_subset_cell_counts():
    with criterion("subset at (IR=0.1, GR=0.5, n=1100) realizes cells 55/55/495/495 exactly"):
        source = synthetic_adult(8000, seed=5)
        subset, counts = sample_controlled_subset(
            source, 1100, F(1, 10), F(1, 2), np.random.default_rng(1)
        )
        assert counts.as_tuple() == (55, 495, 55, 495)
        positive = subset["income"] == ">50K"
        protected = subset["sex"] == "Female"
        assert int((protected & positive).sum()) == 55
        assert int((~protected & positive).sum()) == 55
        assert int((protected & ~positive).sum()) == 495
        assert int((~protected & ~positive).sum()) == 495


def test_random_forest_reference_scores():
    path = adult_path()
    if path is None:
        pytest.skip(SKIP_REASON)
    with criterion("RandomForest at (IR=0.5, GR=0.5): mean ROC AUC and G-mean within 0.830 +/- 0.05 over 50 reps"):
        spec = SamplingSpec(grid=(F(1, 2),), classifiers=("RandomForest",))
        records, _ = run_experiment(load_adult(path), spec, axes=("ir",), engine=MeasureEngine())
        frame = records_to_frame(records)
        assert len(frame) == 50
        mean_auc = frame["roc_auc"].mean()
        mean_gmean = frame["g_mean"].mean()
        assert abs(mean_auc - 0.830) <= 0.05, f"mean ROC AUC {mean_auc:.3f}"
        assert abs(mean_gmean - 0.830) <= 0.05, f"mean G-mean {mean_gmean:.3f}"


def test_stability_ordering_over_ir_sweep(tmp_path):
    path = adult_path()
    if path is None:
        pytest.skip(SKIP_REASON)
    with criterion("IR sweep: AE/SP std ranges below PPP/NPP for at least 5 of 6 classifiers"):
        spec = SamplingSpec()  # full grid, all six classifiers, 50 reps
        records, _ = run_experiment(load_adult(path), spec, axes=("ir",), engine=MeasureEngine())
        frame = records_to_frame(records)
        results = tmp_path / "results.csv"
        frame.to_csv(results, index=False)
        verdict = stability_ordering(load_results(results), "ir")
        assert verdict["classifiers_satisfying"] >= 5, verdict
