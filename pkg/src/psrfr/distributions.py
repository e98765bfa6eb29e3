"""Predictor samplers with seeded, splittable streams.

Every stream is a Philox counter-based generator keyed by
``SeedSequence(base_seed, spawn_key=(stream_id,))``, so draws for one stream
never depend on how many other streams were used or in which order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from .errors import ConfigInvalid, NotPositiveDefinite, ShapeMismatch
from .numerics import DataMatrix, cholesky_spd

NORMAL = "normal"
STUDENT_T = "t"
POWER_EXPONENTIAL = "pe"
MIXTURE = "mixture"
DISTRIBUTION_KINDS = (NORMAL, STUDENT_T, POWER_EXPONENTIAL, MIXTURE)

_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class SeededStream:
    base_seed: int
    stream_id: int

    def __post_init__(self) -> None:
        for name in ("base_seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= int(value) <= _UINT64_MAX:
                raise ConfigInvalid(f"{name} must be an unsigned 64-bit integer, got {value}")

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(int(self.base_seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True, eq=False)
class DistributionSpec:
    kind: str
    mu: NDArray[np.float64]
    sigma: NDArray[np.float64]
    nu: Optional[float] = None
    beta_kurtosis: Optional[float] = None
    mixture_weight: Optional[float] = None
    uniform_halfwidth: Optional[float] = None
    _factor: NDArray[np.float64] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in DISTRIBUTION_KINDS:
            raise ConfigInvalid(f"unknown distribution {self.kind!r}; expected one of {DISTRIBUTION_KINDS}")
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        mu = np.asarray(self.mu, dtype=float).reshape(-1)
        if sigma.shape != (mu.size, mu.size):
            raise ShapeMismatch(f"sigma shape {sigma.shape} does not match mu length {mu.size}")
        if not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-12 * max(1.0, np.max(np.abs(sigma)))):
            raise NotPositiveDefinite("sigma is not symmetric")
        if self.kind == STUDENT_T and not (self.nu is not None and self.nu > 0):
            raise ConfigInvalid(f"Student's t needs nu > 0, got {self.nu}")
        if self.kind == POWER_EXPONENTIAL and not (self.beta_kurtosis is not None and self.beta_kurtosis > 0):
            raise ConfigInvalid(f"power exponential needs beta > 0, got {self.beta_kurtosis}")
        if self.kind == MIXTURE:
            if self.mixture_weight is None or not 0.0 <= self.mixture_weight <= 1.0:
                raise ConfigInvalid(f"mixture weight must lie in [0, 1], got {self.mixture_weight}")
            if self.uniform_halfwidth is None or self.uniform_halfwidth <= 0:
                raise ConfigInvalid(f"uniform half-width must be positive, got {self.uniform_halfwidth}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "_factor", cholesky_spd(sigma))

    @property
    def p(self) -> int:
        return self.mu.size

    @property
    def factor(self) -> NDArray[np.float64]:
        return self._factor

    @classmethod
    def normal(cls, sigma: ArrayLike, mu: Optional[ArrayLike] = None) -> "DistributionSpec":
        sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
        return cls(NORMAL, _location(mu, sigma), sigma)

    @classmethod
    def student_t(cls, sigma: ArrayLike, nu: float, mu: Optional[ArrayLike] = None) -> "DistributionSpec":
        sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
        return cls(STUDENT_T, _location(mu, sigma), sigma, nu=float(nu))

    @classmethod
    def power_exponential(
        cls, sigma: ArrayLike, beta: float, mu: Optional[ArrayLike] = None
    ) -> "DistributionSpec":
        sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
        return cls(POWER_EXPONENTIAL, _location(mu, sigma), sigma, beta_kurtosis=float(beta))

    @classmethod
    def mixture(
        cls,
        sigma: ArrayLike,
        weight: float = 0.8,
        halfwidth: float = 3.0,
        mu: Optional[ArrayLike] = None,
    ) -> "DistributionSpec":
        sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
        return cls(
            MIXTURE,
            _location(mu, sigma),
            sigma,
            mixture_weight=float(weight),
            uniform_halfwidth=float(halfwidth),
        )


def _location(mu: Optional[ArrayLike], sigma: NDArray[np.float64]) -> NDArray[np.float64]:
    if mu is None:
        return np.zeros(sigma.shape[0])
    return np.asarray(mu, dtype=float).reshape(-1)


def _check(spec: DistributionSpec, kind: str, n: int) -> None:
    if spec.kind != kind:
        raise ConfigInvalid(f"expected a {kind!r} specification, got {spec.kind!r}")
    if n < 1:
        raise ConfigInvalid(f"sample size must be positive, got {n}")


def _correlated_normals(spec: DistributionSpec, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
    return rng.standard_normal((n, spec.p)) @ spec.factor.T


def sample_normal(spec: DistributionSpec, n: int, stream: SeededStream) -> DataMatrix:
    _check(spec, NORMAL, n)
    rng = stream.generator()
    return DataMatrix(spec.mu + _correlated_normals(spec, n, rng))


def sample_student_t(spec: DistributionSpec, n: int, stream: SeededStream) -> DataMatrix:
    """mu + Z / sqrt(W / nu) with Z ~ N(0, sigma) and W ~ chi-square(nu)."""
    _check(spec, STUDENT_T, n)
    rng = stream.generator()
    normals = _correlated_normals(spec, n, rng)
    mixing = np.sqrt(rng.chisquare(spec.nu, size=n) / spec.nu)
    return DataMatrix(spec.mu + normals / mixing[:, None])


def sample_power_exponential(spec: DistributionSpec, n: int, stream: SeededStream) -> DataMatrix:
    """mu + R * L u with u uniform on the sphere and R**(2 beta) ~ Gamma(p / (2 beta), scale 2).

    The radial law follows from the density's kernel exp(-t**beta / 2) in
    t = r**2: r has density proportional to r**(p-1) exp(-r**(2 beta) / 2), and
    substituting T = r**(2 beta) leaves T**(p/(2 beta) - 1) exp(-T / 2).
    """
    _check(spec, POWER_EXPONENTIAL, n)
    rng = stream.generator()
    beta = spec.beta_kurtosis
    directions = rng.standard_normal((n, spec.p))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.gamma(spec.p / (2.0 * beta), 2.0, size=n) ** (1.0 / (2.0 * beta))
    return DataMatrix(spec.mu + (radii[:, None] * directions) @ spec.factor.T)


def sample_mixture(spec: DistributionSpec, n: int, stream: SeededStream) -> DataMatrix:
    """Per-row choice between N(mu, sigma) (probability weight) and U(-h, h)^p."""
    _check(spec, MIXTURE, n)
    rng = stream.generator()
    normal_rows = spec.mu + _correlated_normals(spec, n, rng)
    from_normal = rng.random(n) < spec.mixture_weight
    halfwidth = spec.uniform_halfwidth
    uniform_rows = rng.uniform(-halfwidth, halfwidth, size=(n, spec.p))
    return DataMatrix(np.where(from_normal[:, None], normal_rows, uniform_rows))


_SAMPLERS = {
    NORMAL: sample_normal,
    STUDENT_T: sample_student_t,
    POWER_EXPONENTIAL: sample_power_exponential,
    MIXTURE: sample_mixture,
}


def sample(spec: DistributionSpec, n: int, stream: SeededStream) -> DataMatrix:
    return _SAMPLERS[spec.kind](spec, n, stream)


def power_exponential_scale(p: int, beta: float) -> float:
    """Factor c with Cov(X) = c * sigma for the power exponential law."""
    log_ratio = special.gammaln((p + 2.0) / (2.0 * beta)) - special.gammaln(p / (2.0 * beta))
    return math.exp(math.log(2.0) / beta + log_ratio) / p


def covariance_scale(spec: DistributionSpec) -> Optional[float]:
    """Factor c with Cov(X) = c * sigma, or None when the law has no such factor.

    Student t needs nu > 2; the mixture covariance is not a multiple of sigma.
    """
    if spec.kind == NORMAL:
        return 1.0
    if spec.kind == STUDENT_T:
        return spec.nu / (spec.nu - 2.0) if spec.nu > 2.0 else None
    if spec.kind == POWER_EXPONENTIAL:
        return power_exponential_scale(spec.p, spec.beta_kurtosis)
    return None


def describe(spec: DistributionSpec) -> str:
    if spec.kind == STUDENT_T:
        return f"t(nu={spec.nu:g})"
    if spec.kind == POWER_EXPONENTIAL:
        return f"pe(beta={spec.beta_kurtosis:g})"
    if spec.kind == MIXTURE:
        return f"mixture(w={spec.mixture_weight:g}, h={spec.uniform_halfwidth:g})"
    return NORMAL
