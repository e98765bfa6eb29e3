from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from .config import LOG_FILE, SEED, SLICES
from .distributions import POWER_EXPONENTIAL, STUDENT_T, DistributionSpec, SeededStream, describe, sample
from .errors import ConfigInvalid, IoError, PsrfrError
from .estimators import METHODS, fit_method
from .metrics import score
from .models import MODEL_IDS, ModelSpec, default_spec, generate
from .utils import utc_now

logger = logging.getLogger(__name__)

OK = "ok"

REPLICATE_COLUMNS = ["model", "dist", "nu", "beta", "n", "p", "k", "method", "rep", "status", "R", "cos1", "cos2"]
AGGREGATE_COLUMNS = [
    "model", "dist", "nu", "beta", "n", "p", "k", "method", "n_ok", "n_failed",
    "mean_R", "sd_R", "mean_cos1", "sd_cos1", "mean_cos2", "sd_cos2",
]


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    model_id: str
    distribution: DistributionSpec
    n: int
    k: int
    methods: tuple[str, ...]
    slices: int = SLICES
    replicates: int = 1000
    base_seed: int = SEED
    sigma_noise: Optional[float] = None

    @property
    def p(self) -> int:
        return self.distribution.p

    def model(self) -> ModelSpec:
        return default_spec(self.model_id, self.p, self.sigma_noise)

    def validate(self) -> None:
        if self.model_id not in MODEL_IDS:
            raise ConfigInvalid(f"unknown model {self.model_id!r}; expected one of {', '.join(MODEL_IDS)}")
        if self.replicates < 1:
            raise ConfigInvalid(f"replicates must be at least 1, got {self.replicates}")
        if not self.methods:
            raise ConfigInvalid("at least one method is required")
        unknown = [method for method in self.methods if method not in METHODS]
        if unknown:
            raise ConfigInvalid(f"unknown methods {unknown}; expected a subset of {', '.join(METHODS)}")
        if self.n <= self.p:
            raise ConfigInvalid(f"need n > p, got n = {self.n}, p = {self.p}")
        if self.slices < 1:
            raise ConfigInvalid(f"slices must be positive, got {self.slices}")
        truth_k = self.model().k
        if self.k != truth_k:
            raise ConfigInvalid(f"model {self.model_id} has structural dimension {truth_k}, got k = {self.k}")

    def echo(self) -> dict[str, object]:
        spec = self.distribution
        return {
            "model": self.model_id,
            "dist": spec.kind,
            "nu": spec.nu if spec.kind == STUDENT_T else None,
            "beta": spec.beta_kurtosis if spec.kind == POWER_EXPONENTIAL else None,
            "n": self.n,
            "p": self.p,
            "k": self.k,
            "sigma": self.model().sigma_noise,
        }

    def label(self) -> str:
        sigma = self.model().sigma_noise
        dist = describe(self.distribution)
        return f"model={self.model_id} dist={dist} n={self.n} p={self.p} k={self.k} sigma={sigma:g}"


@dataclass(frozen=True)
class ReplicateRecord:
    replicate_index: int
    method: str
    trace_correlation: Optional[float]
    cos1: Optional[float] = None
    cos2: Optional[float] = None
    status: str = OK

    @property
    def ok(self) -> bool:
        return self.status == OK


@dataclass(frozen=True)
class AggregateRow:
    method: str
    n_ok: int
    n_failed: int
    mean_R: Optional[float]
    sd_R: Optional[float]
    mean_cos1: Optional[float] = None
    sd_cos1: Optional[float] = None
    mean_cos2: Optional[float] = None
    sd_cos2: Optional[float] = None
    config: dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict[str, object]:
        row = {column: self.config.get(column) for column in AGGREGATE_COLUMNS[:7]}
        row.update(
            method=self.method,
            n_ok=self.n_ok,
            n_failed=self.n_failed,
            mean_R=self.mean_R,
            sd_R=self.sd_R,
            mean_cos1=self.mean_cos1,
            sd_cos1=self.sd_cos1,
            mean_cos2=self.mean_cos2,
            sd_cos2=self.sd_cos2,
        )
        return row


def _replicate(config: ExperimentConfig, model: ModelSpec, index: int) -> list[ReplicateRecord]:
    try:
        predictors = sample(config.distribution, config.n, SeededStream(config.base_seed, 2 * index))
        noise = SeededStream(config.base_seed, 2 * index + 1).generator().standard_normal(config.n)
        labeled = generate(model, predictors, noise)
    except PsrfrError as exc:
        return [ReplicateRecord(index, method, None, status=exc.code) for method in config.methods]

    records = []
    for method in config.methods:
        try:
            estimate = fit_method(method, labeled.predictors, labeled.response, config.k, config.slices)
            result = score(model.true_basis, estimate.basis)
        except PsrfrError as exc:
            records.append(ReplicateRecord(index, method, None, status=exc.code))
            continue
        cos1, cos2 = result.cosines if result.cosines is not None else (None, None)
        records.append(ReplicateRecord(index, method, result.trace_correlation, cos1, cos2))
    return records


def _run_block(config: ExperimentConfig, indices: Sequence[int]) -> list[ReplicateRecord]:
    model = config.model()
    records: list[ReplicateRecord] = []
    for index in indices:
        records.extend(_replicate(config, model, index))
    return records


def _blocks(replicates: int, workers: int) -> list[list[int]]:
    count = max(1, min(replicates, workers * 4))
    return [block.tolist() for block in np.array_split(np.arange(replicates), count) if block.size]


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[ReplicateRecord]:
    """Fit every method on every replicate; results are ordered by (replicate, method).

    Replicate r draws predictors from stream 2r and noise from stream 2r + 1, so
    the output does not depend on the worker count or on other replicates.
    """
    config.validate()
    logger.info("running %s methods=%s reps=%d", config.label(), ",".join(config.methods), config.replicates)
    workers = max(1, workers)
    blocks = _blocks(config.replicates, workers)
    chunks = Parallel(n_jobs=min(workers, len(blocks)))(delayed(_run_block)(config, block) for block in blocks)
    rank = {method: position for position, method in enumerate(config.methods)}
    records = sorted(
        (record for chunk in chunks for record in chunk),
        key=lambda record: (record.replicate_index, rank[record.method]),
    )
    failed = sum(1 for record in records if not record.ok)
    if failed:
        logger.warning("%s: %d of %d fits failed", config.label(), failed, len(records))
    return records


def _mean_sd(values: list[float]) -> tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    array = np.asarray(values, dtype=float)
    if array.size == 1:
        return float(array[0]), 0.0
    return float(array.mean()), float(array.std(ddof=1))


def aggregate(
    records: Iterable[ReplicateRecord], config: Optional[ExperimentConfig] = None
) -> list[AggregateRow]:
    """Per-method mean and sample SD over successful replicates, with failure counts."""
    grouped: dict[str, list[ReplicateRecord]] = {}
    for record in records:
        grouped.setdefault(record.method, []).append(record)
    echo = config.echo() if config is not None else {}
    rows = []
    for method, items in grouped.items():
        ok = [record for record in items if record.ok]
        mean_r, sd_r = _mean_sd([record.trace_correlation for record in ok])
        mean_c1, sd_c1 = _mean_sd([record.cos1 for record in ok if record.cos1 is not None])
        mean_c2, sd_c2 = _mean_sd([record.cos2 for record in ok if record.cos2 is not None])
        rows.append(
            AggregateRow(
                method=method,
                n_ok=len(ok),
                n_failed=len(items) - len(ok),
                mean_R=mean_r,
                sd_R=sd_r,
                mean_cos1=mean_c1,
                sd_cos1=sd_c1,
                mean_cos2=mean_c2,
                sd_cos2=sd_c2,
                config=dict(echo),
            )
        )
    return rows


def replicate_frame(config: ExperimentConfig, records: Iterable[ReplicateRecord]) -> pd.DataFrame:
    echo = config.echo()
    rows = [
        {
            **echo,
            "method": record.method,
            "rep": record.replicate_index,
            "status": record.status,
            "R": record.trace_correlation,
            "cos1": record.cos1,
            "cos2": record.cos2,
        }
        for record in records
    ]
    return pd.DataFrame(rows, columns=REPLICATE_COLUMNS)


def aggregate_frame(rows: Iterable[AggregateRow]) -> pd.DataFrame:
    return pd.DataFrame([row.as_dict() for row in rows], columns=AGGREGATE_COLUMNS)


def write_csv(frame: pd.DataFrame, path: str | Path) -> None:
    """Write a CSV preceded by one timestamp comment line; the data lines are deterministic."""
    target = Path(path)
    try:
        if target.parent:
            target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            handle.write(f"# generated {utc_now().isoformat()} by psrfr\n")
            frame.to_csv(handle, index=False, lineterminator="\n")
    except OSError as exc:
        raise IoError(f"cannot write {target}: {exc}") from exc


def write_run_log(configs_and_rows: Iterable[tuple[ExperimentConfig, list[AggregateRow]]], log_file: str) -> None:
    if not log_file:
        return

    path = Path(log_file)
    timestamp = utc_now().isoformat()
    lines = []
    for config, rows in configs_and_rows:
        for row in rows:
            mean_r = "" if row.mean_R is None else f"{row.mean_R:.6g}"
            lines.append(f"{timestamp} {config.label()} method={row.method} mean_R={mean_r} n_failed={row.n_failed}")
    if not lines:
        return
    try:
        if path.parent:
            path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot append to run log {path}: {exc}") from exc


def grid(
    configs: Sequence[ExperimentConfig],
    replicate_path: str | Path,
    aggregate_path: str | Path,
    workers: int = 1,
    log_file: str = LOG_FILE,
) -> list[tuple[ExperimentConfig, list[AggregateRow]]]:
    """Run every configuration and write replicate-level and aggregate-level CSVs."""
    for config in configs:
        config.validate()
    replicate_frames = []
    results = []
    for config in configs:
        records = run_experiment(config, workers=workers)
        rows = aggregate(records, config)
        replicate_frames.append(replicate_frame(config, records))
        results.append((config, rows))
    replicates = (
        pd.concat(replicate_frames, ignore_index=True)
        if replicate_frames
        else pd.DataFrame(columns=REPLICATE_COLUMNS)
    )
    write_csv(replicates, replicate_path)
    write_csv(aggregate_frame(row for _, rows in results for row in rows), aggregate_path)
    write_run_log(results, log_file)
    logger.info("wrote %d configurations to %s and %s", len(results), replicate_path, aggregate_path)
    return results
