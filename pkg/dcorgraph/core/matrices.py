"""
Matrix Types
============

Result containers passed between the estimator stages.
"""

from typing import NamedTuple, Tuple, Union

import numpy as np


class DCorMatrix(NamedTuple):
    """p×p distance-correlation matrix R with unit diagonal"""
    entries: np.ndarray
    warnings: Tuple[str, ...] = ()

    @property
    def p(self) -> int:
        return self.entries.shape[0]


class InverseResult(NamedTuple):
    """Inverse of R, possibly of R + εI"""
    inverse: np.ndarray
    ridge_applied: float


class PartialCorrMatrix(NamedTuple):
    """
    Partial correlations -p_ij / sqrt(p_ii p_jj) derived from the inverse of R.

    Entries are not clamped to [-1, 1]: R need not be positive definite, so the
    values are only used for ranking and thresholding.
    """
    entries: np.ndarray
    ridge_applied: float = 0.0

    @property
    def p(self) -> int:
        return self.entries.shape[0]


ScoreSource = Union[PartialCorrMatrix, DCorMatrix, np.ndarray]
