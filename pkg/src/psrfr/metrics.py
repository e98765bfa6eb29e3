from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ShapeMismatch
from .numerics import gram_schmidt

ORTHONORMAL_ATOL = 1e-8


@dataclass(frozen=True)
class SubspaceScore:
    trace_correlation: float
    cosines: Optional[tuple[float, float]] = None


def _columns(matrix: ArrayLike) -> NDArray[np.float64]:
    values = np.asarray(matrix, dtype=float)
    if values.ndim == 1:
        values = values.reshape(-1, 1)
    if values.ndim != 2:
        raise ShapeMismatch(f"expected a p x k matrix, got shape {values.shape}")
    return values


def _orthonormal(estimate: NDArray[np.float64]) -> NDArray[np.float64]:
    gram = estimate.T @ estimate
    if np.max(np.abs(gram - np.eye(estimate.shape[1]))) > ORTHONORMAL_ATOL:
        return gram_schmidt(estimate)
    return estimate


def _projected_trace(truth: NDArray[np.float64], estimate: NDArray[np.float64]) -> float:
    cross = truth.T @ estimate
    return float(np.sum(cross * cross))


def trace_correlation(truth: ArrayLike, estimate: ArrayLike) -> float:
    """trace(E^T T T^T E) / k after orthonormalizing the estimate; 1 means identical spans."""
    true_basis = _columns(truth)
    estimated = _columns(estimate)
    if true_basis.shape != estimated.shape:
        raise ShapeMismatch(f"truth {true_basis.shape} and estimate {estimated.shape} differ in shape")
    k = true_basis.shape[1]
    value = _projected_trace(true_basis, _orthonormal(estimated)) / k
    return float(np.clip(value, 0.0, 1.0))


def subspace_coverage(truth: ArrayLike, estimate: ArrayLike) -> float:
    """Share of an m-dimensional estimate lying in a k-dimensional truth (m <= k)."""
    true_basis = _columns(truth)
    estimated = _columns(estimate)
    if true_basis.shape[0] != estimated.shape[0] or estimated.shape[1] > true_basis.shape[1]:
        raise ShapeMismatch(f"cannot cover truth {true_basis.shape} with estimate {estimated.shape}")
    value = _projected_trace(true_basis, _orthonormal(estimated)) / estimated.shape[1]
    return float(np.clip(value, 0.0, 1.0))


def direction_cosines(truth: ArrayLike, estimate: ArrayLike) -> tuple[float, float]:
    """|cos_i| = max_j |<b_i / |b_i|, beta_j>| for the two estimated directions."""
    true_basis = _columns(truth)
    estimated = _columns(estimate)
    if true_basis.shape[1] != 2 or estimated.shape != true_basis.shape:
        raise ShapeMismatch(
            f"direction cosines need two directions on both sides, got {true_basis.shape} and {estimated.shape}"
        )
    norms = np.linalg.norm(estimated, axis=0)
    if np.any(norms == 0.0):
        raise ShapeMismatch("estimated directions must be nonzero")
    cosines = np.abs(true_basis.T @ (estimated / norms)).max(axis=0)
    cosines = np.clip(cosines, 0.0, 1.0)
    return float(cosines[0]), float(cosines[1])


def score(truth: ArrayLike, estimate: ArrayLike) -> SubspaceScore:
    true_basis = _columns(truth)
    estimated = _columns(estimate)
    if estimated.shape[1] < true_basis.shape[1]:
        return SubspaceScore(trace_correlation=subspace_coverage(true_basis, estimated))
    cosines = None
    if true_basis.shape[1] == 2:
        cosines = direction_cosines(true_basis, estimated)
    return SubspaceScore(trace_correlation=trace_correlation(true_basis, estimated), cosines=cosines)
