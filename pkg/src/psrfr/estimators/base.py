from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ConfigInvalid, DegenerateSpectrum, InsufficientRows, LengthMismatch, NonFiniteData
from ..numerics import DataMatrix, as_data_matrix


@dataclass(frozen=True, eq=False)
class SubspaceEstimate:
    """Orthonormal basis (p x k) plus the full descending spectrum of the method's kernel."""

    basis: NDArray[np.float64]
    eigenvalues: NDArray[np.float64]
    method: str
    k: int

    @property
    def p(self) -> int:
        return self.basis.shape[0]

    def proportions(self) -> NDArray[np.float64]:
        total = float(np.sum(self.eigenvalues))
        if total <= 0.0:
            raise DegenerateSpectrum(f"{self.method} spectrum sums to {total}")
        return self.eigenvalues / total


def prepare(
    data: DataMatrix | ArrayLike,
    response: ArrayLike,
    k: int,
    *,
    require_n_above_p: bool = True,
) -> tuple[DataMatrix, NDArray[np.float64]]:
    matrix = as_data_matrix(data)
    y = np.asarray(response, dtype=float).reshape(-1)
    if y.size != matrix.n:
        raise LengthMismatch(f"response has {y.size} entries for {matrix.n} observations")
    if not np.all(np.isfinite(y)):
        raise NonFiniteData("response contains NaN or infinite entries")
    if not 1 <= k <= matrix.p:
        raise ConfigInvalid(f"structural dimension k must lie in [1, {matrix.p}], got {k}")
    if require_n_above_p and matrix.n <= matrix.p:
        raise InsufficientRows(f"need n > p, got n = {matrix.n}, p = {matrix.p}")
    return matrix, y


def require_varying(response: NDArray[np.float64], method: str) -> None:
    if np.ptp(response) == 0.0:
        raise DegenerateSpectrum(f"{method}: the response is constant")


def require_signal(eigenvalues: NDArray[np.float64], scale: float, method: str, rtol: float = 1e-12) -> None:
    """Reject spectra whose every eigenvalue is negligible against ``scale``."""
    if not np.any(np.abs(eigenvalues) > rtol * scale):
        raise DegenerateSpectrum(f"{method}: every eigenvalue is below {rtol:.0e} x {scale:.3e}")
