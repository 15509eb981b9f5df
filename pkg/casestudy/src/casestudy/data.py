"""Census data loading and the synthetic stand-in used by the tests."""
from __future__ import annotations

import numpy as np
import pandas as pd

from .config import LABEL_COLUMN, POSITIVE_LABEL, PROTECTED_COLUMN, PROTECTED_VALUE

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]

CATEGORICAL_COLUMNS = [
    "workclass", "education", "marital-status", "occupation",
    "relationship", "race", "sex", "native-country",
]

NUMERIC_COLUMNS = [
    "age", "fnlwgt", "education-num", "capital-gain", "capital-loss",
    "hours-per-week",
]


def load_adult(path: str) -> pd.DataFrame:
    """Read an Adult CSV (with or without a header row), normalize it.

    Whitespace around tokens and the trailing period some label columns
    carry are stripped; rows with missing ('?') values are dropped.
    """
    first = pd.read_csv(path, nrows=1, header=None)
    has_header = str(first.iloc[0, 0]).strip().lower() == "age"
    if has_header:
        df = pd.read_csv(path, skipinitialspace=True)
        df.columns = [c.strip().replace("_", "-").replace(".", "-") for c in df.columns]
        rename = {"class": LABEL_COLUMN, "label": LABEL_COLUMN, "salary": LABEL_COLUMN}
        df = df.rename(columns=rename)
    else:
        df = pd.read_csv(path, header=None, names=ADULT_COLUMNS, skipinitialspace=True)
    missing = [c for c in ADULT_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"not an Adult-format CSV, missing columns: {', '.join(missing)}")
    for column in df.columns:
        if df[column].dtype == object:
            df[column] = df[column].str.strip()
    df[LABEL_COLUMN] = df[LABEL_COLUMN].str.rstrip(".")
    df = df.replace("?", np.nan).dropna().reset_index(drop=True)
    return df


def positive_mask(df: pd.DataFrame) -> pd.Series:
    return df[LABEL_COLUMN] == POSITIVE_LABEL


def protected_mask(df: pd.DataFrame) -> pd.Series:
    return df[PROTECTED_COLUMN] == PROTECTED_VALUE


def synthetic_adult(rows: int = 8000, seed: int = 0) -> pd.DataFrame:
    """Adult-shaped synthetic data with a learnable income signal.

    For harness tests only; quantitative case-study claims are about the
    real census data.  Cells (sex x income) are drawn near-balanced so
    controlled subsampling always finds enough rows.
    """
    rng = np.random.default_rng(seed)
    sex = rng.choice(["Female", "Male"], size=rows)
    age = rng.integers(17, 80, size=rows)
    education_num = rng.integers(1, 17, size=rows)
    hours = rng.integers(10, 80, size=rows)
    capital_gain = rng.choice([0, 0, 0, 2000, 5000, 15000], size=rows)
    score = (
        0.08 * (age - 40)
        + 0.55 * (education_num - 9)
        + 0.06 * (hours - 40)
        + 0.0004 * capital_gain
        + rng.normal(0, 2.2, size=rows)
    )
    threshold = np.quantile(score, 0.5)
    income = np.where(score > threshold, ">50K", "<=50K")
    frame = pd.DataFrame(
        {
            "age": age,
            "workclass": rng.choice(["Private", "Self-emp", "State-gov"], size=rows),
            "fnlwgt": rng.integers(20000, 400000, size=rows),
            "education": rng.choice(["Bachelors", "HS-grad", "Masters", "11th"], size=rows),
            "education-num": education_num,
            "marital-status": rng.choice(["Married", "Never-married", "Divorced"], size=rows),
            "occupation": rng.choice(["Tech", "Sales", "Craft", "Service"], size=rows),
            "relationship": rng.choice(["Husband", "Wife", "Own-child", "Unmarried"], size=rows),
            "race": rng.choice(["White", "Black", "Asian-Pac-Islander"], size=rows),
            "sex": sex,
            "capital-gain": capital_gain,
            "capital-loss": rng.choice([0, 0, 0, 1500], size=rows),
            "hours-per-week": hours,
            "native-country": rng.choice(["United-States", "Mexico", "India"], size=rows),
            "income": income,
        }
    )
    return frame
