"""
Input Validators
================

Validation helpers that turn user supplied arrays into clean float64
numpy arrays, raising InvalidInputError with the offending location.
"""

from typing import Sequence, Union

import numpy as np

from .exceptions import InvalidInputError

ArrayLike = Union[np.ndarray, Sequence[float]]


def as_sample(values: ArrayLike, name: str = "x") -> np.ndarray:
    """
    Validate one variable's observations.

    Args:
        values: Sequence of real numbers
        name: Label used in error messages

    Returns:
        Contiguous 1-D float64 array

    Raises:
        InvalidInputError: If the input is not 1-D, has fewer than two
            values, or contains NaN/Inf
    """
    arr = np.ascontiguousarray(values, dtype=np.float64)

    if arr.ndim != 1:
        raise InvalidInputError(f"Sample '{name}' must be one-dimensional, got shape {arr.shape}")

    if arr.shape[0] < 2:
        raise InvalidInputError(f"Sample '{name}' needs at least 2 values, got {arr.shape[0]}")

    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise InvalidInputError(f"Sample '{name}' has a non-finite value at index {int(bad[0])}")

    return arr


def as_matrix(values: ArrayLike, name: str = "matrix", square: bool = False) -> np.ndarray:
    """
    Validate a finite 2-D matrix.

    Args:
        values: Array-like matrix
        name: Label used in error messages
        square: Require equal row and column counts

    Returns:
        2-D float64 array
    """
    arr = np.asarray(values, dtype=np.float64)

    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be two-dimensional, got shape {arr.shape}")

    if square and arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {arr.shape}")

    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        row, col = (int(v) for v in bad[0])
        raise InvalidInputError(f"{name} has a non-finite entry at row {row}, column {col}")

    return arr


def check_seed(seed: int) -> int:
    """Seeds are unsigned 64-bit integers"""
    if not 0 <= int(seed) < 2 ** 64:
        raise InvalidInputError(f"Seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)
