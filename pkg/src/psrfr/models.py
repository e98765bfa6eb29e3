from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .distributions import MIXTURE, NORMAL, SeededStream
from .errors import ConfigInvalid, DimensionTooSmall, LengthMismatch, NonFiniteData, ShapeMismatch
from .numerics import DataMatrix, as_data_matrix

MODEL_IDS = ("n1", "n2", "n3", "n4", "n5", "nn1", "nn2", "nn3", "nn4", "ne1", "ne2", "ne3", "gb4")
DEFAULT_NOISE = 0.5
GB4_NOISE = 2.0

COVARIANCE_SCENARIOS = ("norm_p10", "ellp_p10", "norm_p30", "norm_p40", "ellp_p30", "ellp_p40")


@dataclass(frozen=True, eq=False)
class ModelSpec:
    model_id: str
    p: int
    sigma_noise: float
    true_basis: NDArray[np.float64]

    @property
    def k(self) -> int:
        return self.true_basis.shape[1]


@dataclass(frozen=True, eq=False)
class LabeledSample:
    predictors: DataMatrix
    response: NDArray[np.float64]
    truth: ModelSpec


def _unit(p: int, *entries: tuple[int, float]) -> NDArray[np.float64]:
    vector = np.zeros(p)
    for index, value in entries:
        vector[index] = value
    return vector


def default_spec(model_id: str, p: int, sigma_noise: Optional[float] = None) -> ModelSpec:
    """Canonical basis and noise level of a simulation model.

    Every model uses beta1 = e1, beta2 = e2 and sigma = 0.5 except gb4, whose four
    two-sparse directions need p >= 4 and whose sigma defaults to 2.
    """
    model_id = model_id.strip().lower()
    if model_id not in MODEL_IDS:
        raise ConfigInvalid(f"unknown model {model_id!r}; expected one of {', '.join(MODEL_IDS)}")
    if model_id == "gb4":
        if p < 4:
            raise DimensionTooSmall(f"model gb4 needs p >= 4, got {p}")
        root = 1.0 / np.sqrt(2.0)
        basis = np.column_stack(
            [
                _unit(p, (0, root), (1, root)),
                _unit(p, (0, root), (1, -root)),
                _unit(p, (2, root), (3, root)),
                _unit(p, (2, root), (3, -root)),
            ]
        )
        noise = GB4_NOISE if sigma_noise is None else sigma_noise
    else:
        if p < 2:
            raise DimensionTooSmall(f"model {model_id} needs p >= 2, got {p}")
        basis = np.column_stack([_unit(p, (0, 1.0)), _unit(p, (1, 1.0))])
        noise = DEFAULT_NOISE if sigma_noise is None else sigma_noise
    if noise < 0:
        raise ConfigInvalid(f"noise scale must be nonnegative, got {noise}")
    return ModelSpec(model_id=model_id, p=p, sigma_noise=float(noise), true_basis=basis)


Link = Callable[[NDArray[np.float64], NDArray[np.float64], float], NDArray[np.float64]]


def _two_index(link: Callable[..., NDArray[np.float64]]) -> Link:
    def evaluate(projected, eps, sigma):
        return link(projected[:, 0], projected[:, 1], eps, sigma)

    return evaluate


# u = beta1'X, v = beta2'X
_LINKS: dict[str, Link] = {
    "n1": _two_index(lambda u, v, e, s: u + v * e),
    "n2": _two_index(lambda u, v, e, s: np.sin(u) + np.sqrt(np.abs(v + 1.0)) * e),
    "n3": _two_index(lambda u, v, e, s: (4.0 + u) * (v + 2.0) + s * e),
    "n4": _two_index(lambda u, v, e, s: u / (0.5 + (v + 3.0) ** 2) + s * e),
    "n5": _two_index(lambda u, v, e, s: u**2 + np.abs(v) + s * e),
    "nn1": _two_index(lambda u, v, e, s: (4.0 + u) + (v + 2.0) * s * e**2),
    "nn2": _two_index(lambda u, v, e, s: np.sqrt(np.abs(4.0 + u)) * np.sqrt(np.abs(v + 2.0)) + s * e),
    "nn3": _two_index(lambda u, v, e, s: np.sqrt(np.abs(u)) + np.sqrt(np.abs(v * e)) + s * e),
    "nn4": _two_index(lambda u, v, e, s: 0.4 * u + 3.0 * np.sin(v / 4.0) + s * e),
    "ne1": _two_index(lambda u, v, e, s: u / (0.5 + (v + 1.5) ** 2) + s * e),
    "ne2": _two_index(lambda u, v, e, s: u * (v + 1.0) + s * e),
    "ne3": _two_index(lambda u, v, e, s: 0.4 * u + 3.0 * np.sin(u * v / 4.0) + s * e),
    "gb4": lambda b, e, s: (
        np.sin(b[:, 0] + 4.0) + np.exp(b[:, 1]) + b[:, 2] ** 2 + np.abs(b[:, 3]) + s * e
    ),
}


def generate(
    spec: ModelSpec,
    predictors: DataMatrix | ArrayLike,
    noise: ArrayLike,
    stream: Optional[SeededStream] = None,
) -> LabeledSample:
    """Evaluate the model's response row by row.

    ``noise`` holds the caller's i.i.d. N(0, 1) draws. No model consumes
    ``stream``; it is accepted so every generator shares one call shape.
    """
    data = as_data_matrix(predictors)
    eps = np.asarray(noise, dtype=float).reshape(-1)
    if eps.size != data.n:
        raise LengthMismatch(f"noise has {eps.size} entries for {data.n} observations")
    if data.p != spec.p:
        raise ShapeMismatch(f"model expects p = {spec.p}, predictors have {data.p} columns")
    projected = data.values @ spec.true_basis
    with np.errstate(over="ignore", invalid="ignore"):
        response = _LINKS[spec.model_id](projected, eps, spec.sigma_noise)
    if not np.all(np.isfinite(response)):
        raise NonFiniteData(f"model {spec.model_id} produced non-finite responses")
    return LabeledSample(predictors=data, response=response, truth=spec)


def covariance_for(scenario: str) -> NDArray[np.float64]:
    """Diagonal predictor scale matrices of the simulation designs."""
    scenario = scenario.strip().lower()
    if scenario not in COVARIANCE_SCENARIOS:
        raise ConfigInvalid(
            f"unknown covariance scenario {scenario!r}; expected one of {', '.join(COVARIANCE_SCENARIOS)}"
        )
    family, size = scenario.split("_p")
    levels = np.arange(1.0, 11.0) if family == "norm" else np.arange(1.0, 47.0, 5.0)
    repeats = int(size) // 10
    return np.diag(np.repeat(levels, repeats))


def default_covariance(kind: str, p: int) -> NDArray[np.float64]:
    """Sigma_norm for normal and mixture laws, Sigma_ellp for the heavy-tailed ones."""
    if p not in (10, 30, 40):
        return np.eye(p)
    family = "norm" if kind in (NORMAL, MIXTURE) else "ellp"
    return covariance_for(f"{family}_p{p}")
