"""Response-based principal Hessian directions.

The kernel is S_n^-1 Sigma_YXX S_n^-1 with
Sigma_YXX = n^-1 sum_j (Y_j - Ybar)(X_j - Xbar)(X_j - Xbar)^T. Hessian
eigenvalues are signed, so directions are ranked by |eigenvalue|.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from ..numerics import DataMatrix, center_and_covariance, solve_spd, sym_eig_desc
from .base import SubspaceEstimate, prepare, require_signal, require_varying

METHOD = "phd"


def phd_fit(data: DataMatrix | ArrayLike, response: ArrayLike, k: int) -> SubspaceEstimate:
    matrix, y = prepare(data, response, k)
    require_varying(y, METHOD)
    stats = center_and_covariance(matrix)
    residual = y - y.mean()
    sigma_yxx = (stats.centered * residual[:, None]).T @ stats.centered / stats.n
    left = solve_spd(stats.covariance, sigma_yxx)
    kernel = solve_spd(stats.covariance, left.T).T
    pairs = sym_eig_desc(0.5 * (kernel + kernel.T))
    order = np.argsort(-np.abs(pairs.eigenvalues), kind="stable")
    magnitudes = np.abs(pairs.eigenvalues)[order]
    scale = float(np.std(y)) * matrix.p / float(np.trace(stats.covariance))
    require_signal(magnitudes, scale, METHOD)
    return SubspaceEstimate(
        basis=pairs.eigenvectors[:, order[:k]].copy(),
        eigenvalues=magnitudes,
        method=METHOD,
        k=k,
    )
