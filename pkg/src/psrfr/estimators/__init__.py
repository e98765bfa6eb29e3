"""Sufficient dimension reduction estimators."""

from __future__ import annotations

from numpy.typing import ArrayLike

from ..errors import ConfigInvalid
from ..numerics import DataMatrix
from .base import SubspaceEstimate
from .ols import ols_direction
from .phd import phd_fit
from .psrfr import PsrfrKernel, psrfr_fit, psrfr_kernel
from .slicing import save_fit, sir_fit, slice_indices

METHODS = ("psrfr", "ols", "phd", "sir", "save")


def fit_method(
    method: str,
    data: DataMatrix | ArrayLike,
    response: ArrayLike,
    k: int,
    slices: int = 10,
) -> SubspaceEstimate:
    """Dispatch on a stable method identifier; ``ols`` ignores ``k`` and returns one direction."""
    method = method.strip().lower()
    if method == "psrfr":
        return psrfr_fit(data, response, k)
    if method == "ols":
        return ols_direction(data, response)
    if method == "phd":
        return phd_fit(data, response, k)
    if method == "sir":
        return sir_fit(data, response, k, slices)
    if method == "save":
        return save_fit(data, response, k, slices)
    raise ConfigInvalid(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


__all__ = [
    "METHODS",
    "PsrfrKernel",
    "SubspaceEstimate",
    "fit_method",
    "ols_direction",
    "phd_fit",
    "psrfr_fit",
    "psrfr_kernel",
    "save_fit",
    "sir_fit",
    "slice_indices",
]
