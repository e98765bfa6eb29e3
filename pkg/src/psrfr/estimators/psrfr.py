"""Principal square response forward regression.

Population target: Sigma^-1 E[Y^2 (X - EX)(X - EX)^T] Sigma^-1, whose leading
eigenvectors span the central subspace for elliptical predictors. The sample
version centers X, forms Z_j = S_n^-1 Y_j (X_j - Xbar) with the (n - 1)-divisor
covariance S_n, and takes the top-k eigenvectors of n^-1 sum_j Z_j Z_j^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..numerics import CenteredStats, DataMatrix, center_and_covariance, solve_spd, sym_eig_desc
from .base import SubspaceEstimate, prepare, require_signal

METHOD = "psrfr"


@dataclass(frozen=True, eq=False)
class PsrfrKernel:
    z_rows: NDArray[np.float64]
    z_hat: NDArray[np.float64]


def _kernel(stats: CenteredStats, y: NDArray[np.float64]) -> PsrfrKernel:
    weighted = stats.centered * y[:, None]
    z_rows = solve_spd(stats.covariance, weighted.T).T
    z_hat = z_rows.T @ z_rows / stats.n
    return PsrfrKernel(z_rows=z_rows, z_hat=0.5 * (z_hat + z_hat.T))


def psrfr_kernel(data: DataMatrix | ArrayLike, response: ArrayLike) -> PsrfrKernel:
    matrix, y = prepare(data, response, k=1)
    return _kernel(center_and_covariance(matrix), y)


def psrfr_fit(data: DataMatrix | ArrayLike, response: ArrayLike, k: int) -> SubspaceEstimate:
    matrix, y = prepare(data, response, k)
    stats = center_and_covariance(matrix)
    pairs = sym_eig_desc(_kernel(stats, y).z_hat)
    # Z-hat is about E[Y^2] S_n^-1 when Y carries no direction
    scale = float(np.mean(y**2)) * matrix.p / float(np.trace(stats.covariance))
    require_signal(pairs.eigenvalues, scale, METHOD)
    return SubspaceEstimate(
        basis=pairs.eigenvectors[:, :k].copy(),
        eigenvalues=pairs.eigenvalues,
        method=METHOD,
        k=k,
    )
