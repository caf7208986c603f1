"""
Dataset
=======

The n×p observation matrix shared by the estimator, the simulators and the
data pipeline. Columns are variables, rows are observations.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..utils.exceptions import DimensionMismatchError, InvalidInputError
from ..utils.validators import ArrayLike, as_matrix

logger = logging.getLogger(__name__)


class Dataset:
    """
    Validated n×p real matrix with optional column labels.

    Invariants: n ≥ 2, p ≥ 2, all entries finite, one label per column when
    labels are present.
    """

    def __init__(self, values: ArrayLike, column_names: Optional[Sequence[str]] = None):
        matrix = as_matrix(values, name="Dataset")
        n, p = matrix.shape

        if n < 2:
            raise InvalidInputError(f"Dataset needs at least 2 observations, got {n}")
        if p < 2:
            raise InvalidInputError(f"Dataset needs at least 2 variables, got {p}")

        names: Optional[Tuple[str, ...]] = None
        if column_names is not None:
            names = tuple(str(name) for name in column_names)
            if len(names) != p:
                raise DimensionMismatchError(
                    f"Dataset has {p} columns but {len(names)} column names"
                )

        matrix = matrix.copy()
        matrix.setflags(write=False)
        self.values = matrix
        self.column_names = names

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Contiguous copy of column j"""
        return np.ascontiguousarray(self.values[:, j])

    def label(self, j: int) -> str:
        """Column name, or the 0-based index when the dataset is unlabeled"""
        if self.column_names is None:
            return str(j)
        return self.column_names[j]

    def labels(self) -> Tuple[str, ...]:
        return tuple(self.label(j) for j in range(self.p))

    def __repr__(self) -> str:
        labelled = "labelled" if self.column_names is not None else "unlabelled"
        return f"Dataset(n={self.n}, p={self.p}, {labelled})"
