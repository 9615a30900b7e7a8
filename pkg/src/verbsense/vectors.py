"""Small helpers for dense vectors (1-D float arrays with finite entries)."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NonFiniteError


def as_vector(values, dtype=np.float64) -> np.ndarray:
    """Coerce to a 1-D array of the given dtype, rejecting NaN/Inf."""
    v = np.asarray(values, dtype=dtype)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D vector, got shape {v.shape}")
    if v.size == 0:
        raise DimensionMismatchError("expected a non-empty vector")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError("vector contains NaN or infinite entries")
    return v


def check_same_dim(a: np.ndarray, b: np.ndarray, what: str = "vectors") -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"{what} have mismatched dimensions: {a.shape[0]} vs {b.shape[0]}"
        )
