from __future__ import annotations

from itertools import groupby
from typing import Iterable, Optional

from .config import REPLICATES, SEED
from .distributions import DistributionSpec
from .errors import ConfigInvalid
from .models import covariance_for
from .montecarlo import AggregateRow, ExperimentConfig

SAMPLE_SIZES = (100, 300, 500)
ALL_METHODS = ("psrfr", "phd", "sir", "save")

PRESETS = ("table1", "table2", "table3", "table4", "table5", "table6", "table7", "table9", "highdim")
HEAVY_TAILED_TABLES = {"table3": "nn1", "table4": "nn2", "table5": "nn3", "table6": "nn4"}


def _normal(scenario: str) -> DistributionSpec:
    return DistributionSpec.normal(covariance_for(scenario))


def _t(scenario: str, nu: float) -> DistributionSpec:
    return DistributionSpec.student_t(covariance_for(scenario), nu)


def _pe(scenario: str, beta: float) -> DistributionSpec:
    return DistributionSpec.power_exponential(covariance_for(scenario), beta)


def _mixture(scenario: str) -> DistributionSpec:
    return DistributionSpec.mixture(covariance_for(scenario))


def _block(
    models: Iterable[str],
    distributions: Iterable[DistributionSpec],
    methods: tuple[str, ...],
    replicates: int,
    base_seed: int,
    k: int = 2,
    sigma_noise: Optional[float] = None,
    sizes: Iterable[int] = SAMPLE_SIZES,
) -> list[ExperimentConfig]:
    distributions = list(distributions)
    sizes = list(sizes)
    return [
        ExperimentConfig(
            model_id=model,
            distribution=distribution,
            n=n,
            k=k,
            methods=methods,
            replicates=replicates,
            base_seed=base_seed,
            sigma_noise=sigma_noise,
        )
        for model in models
        for distribution in distributions
        for n in sizes
    ]


def table_configs(name: str, replicates: int = REPLICATES, base_seed: int = SEED) -> list[ExperimentConfig]:
    """Experiment grid behind one simulation table preset."""
    name = name.strip().lower()
    if name == "table1":
        return _block(("n1", "n2"), [_normal("norm_p10")], ("psrfr", "phd"), replicates, base_seed)
    if name == "table2":
        return _block(("n3", "n4", "n5"), [_normal("norm_p10")], ALL_METHODS, replicates, base_seed)
    if name in HEAVY_TAILED_TABLES:
        laws = [_t("ellp_p10", nu) for nu in (3.0, 2.0, 1.0)] + [_pe("ellp_p10", beta) for beta in (0.5, 5.0)]
        return _block((HEAVY_TAILED_TABLES[name],), laws, ALL_METHODS, replicates, base_seed)
    if name == "table7":
        laws = [_normal("norm_p10"), _t("ellp_p10", 3.0)]
        return _block(("nn1", "nn4"), laws, ("psrfr",), replicates, base_seed) + _block(
            ("ne1", "ne2", "ne3"), [_mixture("norm_p10")], ("psrfr",), replicates, base_seed
        )
    if name == "table9":
        configs = []
        for sigma in (2.0, 4.0):
            configs += _block(
                ("gb4",), [_normal("norm_p10")], ALL_METHODS, replicates, base_seed, k=4, sigma_noise=sigma
            )
        return configs
    if name == "highdim":
        configs = []
        for p in (30, 40):
            configs += _block(("n4",), [_normal(f"norm_p{p}")], ("psrfr", "sir"), replicates, base_seed)
            configs += _block(("nn3",), [_t(f"ellp_p{p}", 1.0)], ("psrfr", "sir"), replicates, base_seed)
        return configs
    raise ConfigInvalid(f"unknown table preset {name!r}; expected one of {', '.join(PRESETS)}")


def _cell(mean: Optional[float], sd: Optional[float]) -> str:
    if mean is None:
        return "n/a"
    return f"{mean:.6g} ({sd:.6g})"


def _heading(config: dict[str, object]) -> str:
    dist = str(config.get("dist", ""))
    if config.get("nu") is not None:
        dist += f" nu={config['nu']:g}"
    if config.get("beta") is not None:
        dist += f" beta={config['beta']:g}"
    parts = [
        f"model={config.get('model')}",
        f"dist={dist}",
        f"n={config.get('n')}",
        f"p={config.get('p')}",
        f"k={config.get('k')}",
    ]
    if config.get("sigma") is not None:
        parts.append(f"sigma={config['sigma']:g}")
    return "**" + " ".join(parts) + "**"


def format_aggregate_table(rows: Iterable[AggregateRow]) -> str:
    """Markdown, one table per configuration: method rows with "mean (sd)" cells."""
    blocks = []
    for _, group in groupby(rows, key=lambda row: row.config):
        group = list(group)
        with_cosines = any(row.mean_cos1 is not None for row in group)
        with_failures = any(row.n_failed for row in group)
        header = ["method", "R"]
        if with_cosines:
            header += ["cos1", "cos2"]
        if with_failures:
            header.append("failed")
        lines = [_heading(group[0].config), "", "| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        for row in group:
            cells = [row.method, _cell(row.mean_R, row.sd_R)]
            if with_cosines:
                cells += [_cell(row.mean_cos1, row.sd_cos1), _cell(row.mean_cos2, row.sd_cos2)]
            if with_failures:
                cells.append(f"{row.n_failed}/{row.n_ok + row.n_failed}")
            lines.append("| " + " | ".join(cells) + " |")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)
