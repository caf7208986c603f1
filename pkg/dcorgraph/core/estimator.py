"""
Graph Estimator
===============

Builds the distance-correlation matrix over all variable pairs, inverts it,
converts the inverse to partial correlations and thresholds the result into
graph estimates.

The GraphEstimator class orchestrates the stages with the settings from
``config.yaml``. The stage functions stay usable on their own.
"""

import logging
import math
import warnings
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from ..config import EstimatorConfig
from ..utils.exceptions import ConfigurationError, InvalidInputError, SingularMatrixError
from ..utils.validators import as_matrix
from .dataset import Dataset
from .dcor import CenteringTerms, column_terms, dcor_from_terms
from .matrices import DCorMatrix, InverseResult, PartialCorrMatrix
from .thresholding import (
    Adjacency,
    ThresholdPath,
    auto_thresholds,
    estimation_path,
    threshold_for_edge_count,
    threshold_graph,
)

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-12
MIN_DETERMINANT = 1e-300
LOG_DET_SINGULAR = float("-inf")

DEFAULT_RIDGE_STEP = 1e-8
DEFAULT_MAX_RIDGE = 1e-2


def dcor_matrix(data: Dataset, n_jobs: int = 1) -> DCorMatrix:
    """
    Distance correlation between every pair of columns.

    Centering terms are computed once per column; each unordered pair is then
    evaluated once and mirrored. Pairs may run on ``n_jobs`` threads without
    changing the result.

    Args:
        data: Dataset with p columns
        n_jobs: Number of worker threads (-1 for all cores)

    Returns:
        DCorMatrix with unit diagonal and a warning for every constant column
    """
    p = data.p
    columns = [data.column(j) for j in range(p)]

    terms: List[CenteringTerms] = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(column_terms)(column) for column in columns
    )

    notes = []
    for j, term in enumerate(terms):
        if term.grand_mean == 0.0:
            message = f"Column '{data.label(j)}' is constant; its distance correlations are 0"
            logger.warning(message)
            notes.append(message)

    rows, cols = np.triu_indices(p, 1)
    values = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(dcor_from_terms)(columns[i], terms[i], columns[j], terms[j])
        for i, j in zip(rows, cols)
    )

    entries = np.eye(p)
    entries[rows, cols] = [result.dcor for result in values]
    entries[cols, rows] = entries[rows, cols]

    logger.info(f"Computed distance correlation matrix for p={p}, n={data.n}")
    return DCorMatrix(entries=entries, warnings=tuple(notes))


def _factorize(matrix: np.ndarray) -> Tuple[Tuple[np.ndarray, np.ndarray], float, float]:
    """LU factorization with the smallest absolute pivot and the pivot scale"""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)

    pivots = np.abs(np.diag(lu))
    scale = float(np.abs(np.diag(matrix)).max()) if matrix.size else 0.0
    return (lu, piv), float(pivots.min()), scale


def invert(
    r: Union[DCorMatrix, np.ndarray],
    ridge_step: float = DEFAULT_RIDGE_STEP,
    max_ridge: float = DEFAULT_MAX_RIDGE,
) -> InverseResult:
    """
    Invert R, falling back to R + εI for ε in ridge_step·(1, 2, 4, ...) ≤ max_ridge.

    A factorization is accepted when every pivot exceeds 1e-12 times the
    largest diagonal entry. The returned inverse is symmetrized.

    Args:
        r: Distance-correlation matrix or plain square array
        ridge_step: First ridge level
        max_ridge: Largest ridge level tried

    Returns:
        InverseResult with the applied ε (0 when no ridge was needed)

    Raises:
        InvalidInputError: If the ridge parameters are out of order
        SingularMatrixError: If every ridge level fails
    """
    matrix = as_matrix(getattr(r, "entries", r), name="R", square=True)

    if not 0.0 < ridge_step < max_ridge:
        raise InvalidInputError(
            f"Ridge parameters must satisfy 0 < ridge_step < max_ridge, got {ridge_step} and {max_ridge}"
        )

    identity = np.eye(matrix.shape[0])
    epsilon = 0.0
    smallest = math.inf

    while epsilon <= max_ridge:
        factors, pivot, scale = _factorize(matrix + epsilon * identity)
        smallest = min(smallest, pivot)

        if pivot > PIVOT_TOLERANCE * scale:
            inverse = lu_solve(factors, identity)
            inverse = (inverse + inverse.T) / 2.0
            if epsilon > 0.0:
                logger.warning(f"Matrix is numerically singular; applied ridge {epsilon!r} before inversion")
            return InverseResult(inverse=inverse, ridge_applied=epsilon)

        logger.debug(f"Pivot {pivot!r} below tolerance at ridge {epsilon!r}")
        epsilon = ridge_step if epsilon == 0.0 else 2.0 * epsilon

    raise SingularMatrixError(
        f"Matrix is singular up to ridge {max_ridge!r}; smallest pivot found {smallest!r}",
        smallest_pivot=smallest,
    )


def partial_correlations(inv: Union[InverseResult, np.ndarray]) -> PartialCorrMatrix:
    """
    Partial correlations given all remaining variables, -p_ij / sqrt(p_ii p_jj).

    Args:
        inv: Inverse of R (an InverseResult carries its ridge level along)

    Returns:
        PartialCorrMatrix with zero diagonal

    Raises:
        InvalidInputError: If the inverse is not symmetric or has a nonpositive diagonal entry
    """
    ridge = float(getattr(inv, "ridge_applied", 0.0))
    matrix = as_matrix(getattr(inv, "inverse", inv), name="inverse", square=True)

    asymmetry = float(np.abs(matrix - matrix.T).max())
    if asymmetry > 1e-9 * max(1.0, float(np.abs(matrix).max())):
        raise InvalidInputError(f"Inverse is not symmetric (max asymmetry {asymmetry!r})")

    diagonal = np.diag(matrix)
    bad = np.flatnonzero(diagonal <= 0.0)
    if bad.size:
        index = int(bad[0])
        raise InvalidInputError(
            f"Inverse has nonpositive diagonal entry {diagonal[index]!r} at index {index}"
        )

    scale = 1.0 / np.sqrt(diagonal)
    entries = -matrix * np.outer(scale, scale)
    entries = (entries + entries.T) / 2.0
    np.fill_diagonal(entries, 0.0)

    return PartialCorrMatrix(entries=entries, ridge_applied=ridge)


def log_det(m: Union[np.ndarray, DCorMatrix]) -> float:
    """
    Natural log of |det(m)| through an LU factorization.

    Returns:
        The log-determinant, or LOG_DET_SINGULAR (negative infinity) when a
        pivot is below 1e-12 times the largest diagonal entry or |det| < 1e-300

    Raises:
        InvalidInputError: If the matrix is not square
    """
    matrix = as_matrix(getattr(m, "entries", m), name="matrix", square=True)

    (lu, piv), pivot, scale = _factorize(matrix)
    if pivot <= PIVOT_TOLERANCE * scale:
        return LOG_DET_SINGULAR

    diagonal = np.diag(lu)
    value = float(np.sum(np.log(np.abs(diagonal))))
    if value < math.log(MIN_DETERMINANT):
        return LOG_DET_SINGULAR

    swaps = int(np.count_nonzero(piv != np.arange(piv.shape[0])))
    if (swaps + int(np.count_nonzero(diagonal < 0))) % 2:
        logger.debug("Determinant is negative; returning log of its absolute value")

    return value


def is_singular(value: float) -> bool:
    return value == LOG_DET_SINGULAR


class EstimationResult(NamedTuple):
    """Everything produced by one estimator run"""
    dcor: DCorMatrix
    partial: PartialCorrMatrix
    threshold_source: str
    graph: Optional[Adjacency]
    tp: Optional[float]
    path: Optional[ThresholdPath]
    warnings: Tuple[str, ...]

    @property
    def ridge_applied(self) -> float:
        return self.partial.ridge_applied


class GraphEstimator:
    """
    Runs the full estimation pipeline on a Dataset.

    Responsibilities:
    - Compute the distance-correlation matrix (optionally on threads)
    - Invert it with the ridge fallback and form partial correlations
    - Threshold the selected score matrix by tp, edge count, or along a path
    """

    SOURCES = ("partial", "dcor")

    def __init__(self, config: Optional[EstimatorConfig] = None):
        self.config = config or EstimatorConfig()
        logger.debug(f"GraphEstimator initialized with {self.config}")

    def fit(self, data: Dataset) -> Tuple[DCorMatrix, PartialCorrMatrix]:
        """
        Compute R and the partial-correlation matrix derived from its inverse.
        """
        r = dcor_matrix(data, n_jobs=self.config.n_jobs)
        inverse = invert(r, self.config.ridge_step, self.config.ridge_max)
        partial = partial_correlations(inverse)
        return r, partial

    def estimate(
        self,
        data: Dataset,
        tp: Optional[float] = None,
        edges: Optional[int] = None,
        thresholds: Union[None, str, Sequence[float]] = None,
    ) -> EstimationResult:
        """
        Estimate a graph (or a path of graphs) from data.

        Exactly one of ``tp``, ``edges`` and ``thresholds`` must be given;
        ``thresholds="auto"`` builds the geometric default sequence.

        Raises:
            ConfigurationError: If not exactly one selection rule is given
        """
        chosen = [value is not None for value in (tp, edges, thresholds)]
        if sum(chosen) != 1:
            raise ConfigurationError("Exactly one of tp, edges or thresholds must be supplied")

        source = self.config.threshold_matrix
        if source not in self.SOURCES:
            raise ConfigurationError(f"Unknown threshold matrix '{source}'")

        r, partial = self.fit(data)
        scores = partial if source == "partial" else r

        notes = list(r.warnings)
        if partial.ridge_applied > 0.0:
            notes.append(f"Matrix is numerically singular; applied ridge {partial.ridge_applied!r} before inversion")

        graph: Optional[Adjacency] = None
        path: Optional[ThresholdPath] = None
        chosen_tp: Optional[float] = None

        if tp is not None:
            chosen_tp = float(tp)
            graph = threshold_graph(scores, chosen_tp)
        elif edges is not None:
            chosen_tp, graph = threshold_for_edge_count(scores, int(edges))
        else:
            if isinstance(thresholds, str):
                if thresholds != "auto":
                    raise ConfigurationError(f"Unknown threshold sequence '{thresholds}'")
                sequence = auto_thresholds(scores, self.config.path_count, self.config.path_min_ratio)
            else:
                sequence = list(thresholds)
            path = estimation_path(scores, sequence)

        edge_total = graph.edge_count if graph is not None else path.edge_counts[-1]
        logger.info(f"Estimated graph from {source} matrix with {edge_total} edges")

        return EstimationResult(
            dcor=r,
            partial=partial,
            threshold_source=source,
            graph=graph,
            tp=chosen_tp,
            path=path,
            warnings=tuple(notes),
        )
