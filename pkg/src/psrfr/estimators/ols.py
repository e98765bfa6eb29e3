from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from ..errors import DegenerateSpectrum
from ..numerics import DataMatrix, apply_sign_convention, center_and_covariance, solve_spd
from .base import SubspaceEstimate, prepare, require_varying

METHOD = "ols"
NORM_MIN = 1e-12


def ols_direction(data: DataMatrix | ArrayLike, response: ArrayLike) -> SubspaceEstimate:
    """Normalized S_n^-1 n^-1 sum_j Y_j (X_j - Xbar); recovers one central direction."""
    matrix, y = prepare(data, response, k=1)
    require_varying(y, METHOD)
    stats = center_and_covariance(matrix)
    moment = stats.centered.T @ y / stats.n
    direction = solve_spd(stats.covariance, moment)
    norm = float(np.linalg.norm(direction))
    if norm < NORM_MIN:
        raise DegenerateSpectrum(f"{METHOD}: moment vector norm {norm:.3e} is negligible")
    eigenvalues = np.zeros(matrix.p)
    eigenvalues[0] = norm**2
    return SubspaceEstimate(
        basis=apply_sign_convention((direction / norm).reshape(-1, 1)),
        eigenvalues=eigenvalues,
        method=METHOD,
        k=1,
    )
