"""Input-validation helpers used by the estimator-style API and the CLI."""

import numpy as np

from .errors import InvalidParameterError


def check_point_cloud(points, name: str = "points") -> np.ndarray:
    """Coerce to a non-empty (n, 3) float64 array."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InvalidParameterError(f"{name} must have shape (n, 3), got {arr.shape}")
    if arr.shape[0] == 0:
        raise InvalidParameterError(f"{name} must contain at least one point")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} contains non-finite values")
    return arr


def check_pairs(pairs, name: str = "pairs") -> np.ndarray:
    """Coerce to an (m, 2) float64 array of (birth, death) rows (m may be 0)."""
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidParameterError(f"{name} must have shape (m, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} contains non-finite values")
    return arr


def check_matrix(X, name: str = "X", min_rows: int = 1) -> np.ndarray:
    """Coerce to a 2-d float64 array with at least ``min_rows`` rows."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidParameterError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < min_rows:
        raise InvalidParameterError(f"{name} needs at least {min_rows} rows, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} contains non-finite values")
    return arr


def check_positive(value, name: str):
    if not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be positive, got {value}")
    return value


def check_fraction(value, name: str, closed_right: bool = True):
    hi_ok = value <= 1.0 if closed_right else value < 1.0
    if not (0.0 < value and hi_ok):
        raise InvalidParameterError(f"{name} must lie in (0, 1], got {value}")
    return value
