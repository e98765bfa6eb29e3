"""Real-data pipeline: CSV ingestion, standardization, diagonalization and PSRFR ranking."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from scipy import stats as st

from .errors import (
    ConfigInvalid,
    DuplicateColumn,
    EmptyDataset,
    IoError,
    MissingColumn,
    ParseError,
    ZeroVariance,
)
from .estimators import psrfr_fit
from .numerics import DataMatrix, center_and_covariance, sym_eig_desc

logger = logging.getLogger(__name__)

MISSING_TOKENS = frozenset({"", "NA", "NaN", "nan", "?"})

WINE_ABBREVIATIONS = {
    "fixed acidity": "FA",
    "volatile acidity": "VA",
    "citric acid": "CA",
    "residual sugar": "RS",
    "chlorides": "CL",
    "free sulfur dioxide": "FSD",
    "total sulfur dioxide": "TSD",
    "density": "DS",
    "pH": "PH",
    "sulphates": "SP",
    "alcohol": "AH",
}


@dataclass(frozen=True, eq=False)
class Dataset:
    column_names: list[str]
    predictors: DataMatrix
    response: NDArray[np.float64]
    response_name: str
    dropped_rows: int = 0


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    eigenvalue_proportions: NDArray[np.float64]
    chosen_k: int
    importance: list[tuple[str, float]]
    rotation: NDArray[np.float64]
    eigenvalues: NDArray[np.float64]
    direction: NDArray[np.float64]


def abbreviate(name: str) -> str:
    return WINE_ABBREVIATIONS.get(name, name)


def _read_cells(path: Path, delimiter: str) -> pd.DataFrame:
    try:
        return pd.read_csv(
            path,
            sep=delimiter,
            header=None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except FileNotFoundError as exc:
        raise IoError(f"data file not found: {path}") from exc
    except pd.errors.EmptyDataError as exc:
        raise EmptyDataset(f"{path} has no header row") from exc
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def load_csv(
    path: str | Path,
    response_column: str,
    row_limit: Optional[int] = None,
    delimiter: str = ",",
) -> Dataset:
    """Load a headered numeric CSV; every column except the response becomes a predictor.

    ``row_limit`` keeps the first rows after the header. Rows with a missing cell are
    dropped and counted. ParseError rows are 1-based data rows (the header is row 0).
    """
    if row_limit is not None and row_limit < 0:
        raise ConfigInvalid(f"row limit must be nonnegative, got {row_limit}")
    source = Path(path)
    cells = _read_cells(source, delimiter)
    names = [str(name).strip() for name in cells.iloc[0].tolist()]
    seen: set[str] = set()
    for name in names:
        if name in seen:
            raise DuplicateColumn(f"column {name!r} appears more than once in {source}")
        seen.add(name)
    if response_column not in names:
        raise MissingColumn(f"response column {response_column!r} not found; columns are {names}")

    body = cells.iloc[1:].reset_index(drop=True)
    body.columns = names
    if row_limit is not None:
        body = body.iloc[:row_limit]
    if body.empty:
        raise EmptyDataset(f"{source} has no data rows")

    body = body.apply(lambda column: column.str.strip())
    missing = body.isin(MISSING_TOKENS)
    numeric = body.apply(pd.to_numeric, errors="coerce")
    unparsed = numeric.isna() & ~missing
    if unparsed.to_numpy().any():
        row, col = np.argwhere(unparsed.to_numpy())[0]
        raise ParseError(int(row) + 1, names[col], str(body.iat[row, col]))

    complete = ~missing.any(axis=1)
    dropped = int((~complete).sum())
    if dropped:
        logger.warning("dropped %d rows with missing values from %s", dropped, source)
    numeric = numeric[complete]
    if numeric.empty:
        raise EmptyDataset(f"{source} has no complete rows")

    predictor_names = [name for name in names if name != response_column]
    return Dataset(
        column_names=predictor_names,
        predictors=DataMatrix(numeric[predictor_names].to_numpy(dtype=float)),
        response=numeric[response_column].to_numpy(dtype=float),
        response_name=response_column,
        dropped_rows=dropped,
    )


def standardize(ds: Dataset) -> Dataset:
    values = ds.predictors.values
    scale = values.std(axis=0, ddof=1)
    for name, sd in zip(ds.column_names, scale):
        if sd == 0.0:
            raise ZeroVariance(name)
    scaled = (values - values.mean(axis=0)) / scale
    return replace(ds, predictors=DataMatrix(scaled))


def _chosen_k(proportions: NDArray[np.float64], threshold: float) -> int:
    if threshold >= 1.0:
        return proportions.size
    reached = np.cumsum(proportions) >= threshold
    return int(np.argmax(reached)) + 1 if reached.any() else proportions.size


def analyze(ds: Dataset, proportion_threshold: float = 0.99) -> AnalysisReport:
    """Standardize, rotate onto the covariance eigenvectors and fit PSRFR with k = p.

    Importance is |V b1|: the leading direction mapped back to the named predictors.
    """
    if not 0.0 < proportion_threshold <= 1.0:
        raise ConfigInvalid(f"proportion threshold must lie in (0, 1], got {proportion_threshold}")
    standardized = standardize(ds)
    moments = center_and_covariance(standardized.predictors)
    rotation = sym_eig_desc(moments.covariance).eigenvectors
    rotated = moments.centered @ rotation
    estimate = psrfr_fit(rotated, standardized.response, k=standardized.predictors.p)
    proportions = estimate.proportions()
    direction = rotation @ estimate.basis[:, 0]
    weights = np.abs(direction)
    order = np.argsort(-weights, kind="stable")
    logger.info("analyzed %d rows x %d predictors", standardized.predictors.n, standardized.predictors.p)
    return AnalysisReport(
        eigenvalue_proportions=proportions,
        chosen_k=_chosen_k(proportions, proportion_threshold),
        importance=[(ds.column_names[i], float(weights[i])) for i in order],
        rotation=rotation,
        eigenvalues=estimate.eigenvalues,
        direction=direction,
    )


def format_report(report: AnalysisReport) -> str:
    proportions = ", ".join(f"{value:.6g}" for value in report.eigenvalue_proportions)
    lines = [
        f"eigenvalue_proportions: [{proportions}]",
        f"chosen_k: {report.chosen_k}",
        "",
        "| rank | variable | abbreviation | importance |",
        "|---|---|---|---|",
    ]
    for rank, (name, weight) in enumerate(report.importance, start=1):
        lines.append(f"| {rank} | {name} | {abbreviate(name)} | {weight:.6g} |")
    return "\n".join(lines)


def qq_points(ds: Dataset) -> dict[str, tuple[NDArray[np.float64], NDArray[np.float64]]]:
    """Normal QQ pairs per standardized predictor, plotting positions (i - 0.5) / n."""
    values = standardize(ds).predictors.values
    n = values.shape[0]
    theoretical = st.norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    return {name: (theoretical, np.sort(values[:, j])) for j, name in enumerate(ds.column_names)}


def describe_predictors(ds: Dataset) -> pd.DataFrame:
    values = standardize(ds).predictors.values
    quartiles = np.percentile(values, [0, 25, 50, 75, 100], axis=0)
    return pd.DataFrame(
        {
            "variable": ds.column_names,
            "min": quartiles[0],
            "q1": quartiles[1],
            "median": quartiles[2],
            "q3": quartiles[3],
            "max": quartiles[4],
            "skewness": st.skew(values, axis=0),
            "excess_kurtosis": st.kurtosis(values, axis=0, fisher=True),
        }
    )


def _file_stem(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "column"


def write_qq_files(ds: Dataset, out_dir: str | Path) -> list[Path]:
    target = Path(out_dir)
    written = []
    try:
        target.mkdir(parents=True, exist_ok=True)
        for name, (theoretical, sample) in qq_points(ds).items():
            path = target / f"qq_{_file_stem(name)}.csv"
            pd.DataFrame({"theoretical": theoretical, "sample": sample}).to_csv(path, index=False, lineterminator="\n")
            written.append(path)
        summary = target / "summary.csv"
        describe_predictors(ds).to_csv(summary, index=False, lineterminator="\n")
        written.append(summary)
    except OSError as exc:
        raise IoError(f"cannot write QQ files to {target}: {exc}") from exc
    return written
