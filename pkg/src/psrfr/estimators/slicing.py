"""Slice-based inverse regression: SIR and SAVE.

Both standardize X with the Cholesky factor L of S_n (Z = L^-1 (X - Xbar)),
slice observations by the stably sorted response into near-equal groups,
build a kernel on the standardized scale and map its leading eigenvectors back
with L^-T before re-orthonormalizing.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from ..errors import ConfigInvalid, TooFewRows
from ..numerics import DataMatrix, center_and_covariance, cholesky_spd, gram_schmidt, sym_eig_desc
from .base import SubspaceEstimate, prepare, require_varying

SIR = "sir"
SAVE = "save"


def slice_indices(response: ArrayLike, slices: int) -> list[NDArray[np.intp]]:
    """Equal-frequency slices of the sorted response; the first n % slices groups get one extra row."""
    y = np.asarray(response, dtype=float).reshape(-1)
    if slices < 1:
        raise ConfigInvalid(f"number of slices must be positive, got {slices}")
    if y.size < 2 * slices:
        raise TooFewRows(f"{slices} slices need at least {2 * slices} observations, got {y.size}")
    order = np.argsort(y, kind="stable")
    return np.array_split(order, slices)


def _standardized(matrix: DataMatrix) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    stats = center_and_covariance(matrix)
    lower = cholesky_spd(stats.covariance)
    scaled = linalg.solve_triangular(lower, stats.centered.T, lower=True).T
    return scaled, lower


def _estimate(
    kernel: NDArray[np.float64], lower: NDArray[np.float64], k: int, method: str
) -> SubspaceEstimate:
    pairs = sym_eig_desc(kernel)
    directions = linalg.solve_triangular(lower, pairs.eigenvectors[:, :k], lower=True, trans="T")
    return SubspaceEstimate(
        basis=gram_schmidt(directions),
        eigenvalues=pairs.eigenvalues,
        method=method,
        k=k,
    )


def sir_fit(
    data: DataMatrix | ArrayLike, response: ArrayLike, k: int, slices: int = 10
) -> SubspaceEstimate:
    """Sliced inverse regression: eigenvectors of sum_h (n_h / n) m_h m_h^T."""
    matrix, y = prepare(data, response, k, require_n_above_p=False)
    groups = slice_indices(y, slices)
    require_varying(y, SIR)
    scaled, lower = _standardized(matrix)
    kernel = np.zeros((matrix.p, matrix.p))
    for group in groups:
        centroid = scaled[group].mean(axis=0)
        kernel += (group.size / matrix.n) * np.outer(centroid, centroid)
    return _estimate(kernel, lower, k, SIR)


def save_fit(
    data: DataMatrix | ArrayLike, response: ArrayLike, k: int, slices: int = 10
) -> SubspaceEstimate:
    """Sliced average variance estimation: eigenvectors of sum_h (n_h / n) (I - V_h)^2."""
    matrix, y = prepare(data, response, k, require_n_above_p=False)
    groups = slice_indices(y, slices)
    require_varying(y, SAVE)
    scaled, lower = _standardized(matrix)
    identity = np.eye(matrix.p)
    kernel = np.zeros((matrix.p, matrix.p))
    for group in groups:
        within = np.cov(scaled[group], rowvar=False, ddof=1).reshape(matrix.p, matrix.p)
        gap = identity - within
        kernel += (group.size / matrix.n) * (gap @ gap)
    return _estimate(0.5 * (kernel + kernel.T), lower, k, SAVE)
