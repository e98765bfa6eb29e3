"""Dense-matrix primitives shared by the estimators.

All functions are pure. Eigenvalues are returned in descending order and each
eigenvector column is signed so its largest-magnitude entry is positive (ties go
to the lowest index). Eigenvectors of tied eigenvalues are only identified up to
their span; compare projection matrices, not columns, on tied spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg
from scipy.linalg import lapack

from .errors import (
    IllConditioned,
    InsufficientRows,
    NonFiniteData,
    NotPositiveDefinite,
    NotSymmetric,
    RankDeficient,
    ShapeMismatch,
)

RCOND_MIN = 1e-12
SYMMETRY_RTOL = 1e-10
PIVOT_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """n observations (rows) of p predictors (columns)."""

    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2 or values.shape[1] < 1:
            raise ShapeMismatch(f"predictors must be a 2-d array, got shape {values.shape}")
        if values.shape[0] < 2:
            raise InsufficientRows(f"need at least 2 observations, got {values.shape[0]}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteData("predictors contain NaN or infinite entries")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def as_data_matrix(data: DataMatrix | ArrayLike) -> DataMatrix:
    if isinstance(data, DataMatrix):
        return data
    return DataMatrix(np.asarray(data, dtype=float))


@dataclass(frozen=True, eq=False)
class CenteredStats:
    mean: NDArray[np.float64]
    covariance: NDArray[np.float64]
    n: int
    centered: NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class EigenPairs:
    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]


def center_and_covariance(data: DataMatrix | ArrayLike) -> CenteredStats:
    """Column means and the (n - 1)-divisor sample covariance.

    Sums run over the rows in lexicographic order, so the mean and covariance
    are bit-identical under any row permutation. `centered` keeps the input order.
    """
    matrix = as_data_matrix(data)
    values = matrix.values
    canonical = values[np.lexsort(values.T[::-1])]
    mean = canonical.mean(axis=0)
    centered = values - mean
    canonical = canonical - mean
    covariance = canonical.T @ canonical / (matrix.n - 1)
    covariance = 0.5 * (covariance + covariance.T)
    return CenteredStats(mean=mean, covariance=covariance, n=matrix.n, centered=centered)


def cholesky_spd(a: ArrayLike) -> NDArray[np.float64]:
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Raises NotPositiveDefinite when the factorization breaks down and
    IllConditioned when the LAPACK reciprocal condition estimate is below 1e-12.
    """
    matrix = np.atleast_2d(np.asarray(a, dtype=float))
    if matrix.shape[0] != matrix.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {matrix.shape}")
    try:
        lower = linalg.cholesky(matrix, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    anorm = np.linalg.norm(matrix, 1)
    rcond, info = lapack.dpocon(lower, anorm, uplo="L")
    if info != 0 or not np.isfinite(rcond) or rcond < RCOND_MIN:
        raise IllConditioned(f"reciprocal condition estimate {rcond:.3e} below {RCOND_MIN:.0e}")
    return lower


def solve_spd(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Solve a @ x = b for symmetric positive-definite a without forming its inverse."""
    lower = cholesky_spd(a)
    rhs = np.asarray(b, dtype=float)
    if rhs.shape[0] != lower.shape[0]:
        raise ShapeMismatch(f"right-hand side has {rhs.shape[0]} rows, matrix has {lower.shape[0]}")
    return linalg.cho_solve((lower, True), rhs)


def _check_symmetric(a: NDArray[np.float64]) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    scale = max(float(np.max(np.abs(a))) if a.size else 0.0, np.finfo(float).tiny)
    asymmetry = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asymmetry > SYMMETRY_RTOL * scale:
        raise NotSymmetric(f"max |a - a^T| = {asymmetry:.3e} exceeds tolerance")


def apply_sign_convention(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
    """Flip columns so the first entry of largest magnitude is positive."""
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eig_desc(a: ArrayLike) -> EigenPairs:
    matrix = np.atleast_2d(np.asarray(a, dtype=float))
    _check_symmetric(matrix)
    values, vectors = linalg.eigh(0.5 * (matrix + matrix.T))
    # stable on ties: equal eigenvalues keep the solver's column order
    order = np.argsort(-values, kind="stable")
    return EigenPairs(
        eigenvalues=values[order],
        eigenvectors=apply_sign_convention(vectors[:, order]),
    )


def gram_schmidt(columns: ArrayLike) -> NDArray[np.float64]:
    """Modified Gram-Schmidt with one reorthogonalization pass.

    A column whose residual norm drops below 1e-10 of its original norm is
    treated as linearly dependent on the previous ones.
    """
    matrix = np.asarray(columns, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    p, k = matrix.shape
    if k > p:
        raise RankDeficient(f"{k} columns cannot be independent in dimension {p}")
    basis = np.zeros((p, k))
    for j in range(k):
        vector = matrix[:, j].copy()
        original = np.linalg.norm(vector)
        for _ in range(2):
            for i in range(j):
                vector -= (basis[:, i] @ vector) * basis[:, i]
        residual = np.linalg.norm(vector)
        if original == 0.0 or residual < PIVOT_RTOL * original:
            raise RankDeficient(f"column {j} is linearly dependent on the preceding columns")
        basis[:, j] = vector / residual
    return basis


def projection(basis: ArrayLike) -> NDArray[np.float64]:
    """Orthogonal projection onto the span of orthonormal columns."""
    columns = np.asarray(basis, dtype=float)
    if columns.ndim == 1:
        columns = columns.reshape(-1, 1)
    return columns @ columns.T
