"""
Graph Thresholding
==================

Turns a score matrix (partial correlations by default, or the distance
correlation matrix itself) into undirected graphs: a single threshold, a
target edge count, or a nested path over a descending threshold sequence.
"""

import logging
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..utils.exceptions import DimensionMismatchError, InvalidInputError
from ..utils.validators import as_matrix
from .matrices import ScoreSource

logger = logging.getLogger(__name__)


class Adjacency:
    """
    Symmetric boolean adjacency matrix without self-loops.
    """

    def __init__(self, edges: np.ndarray):
        matrix = np.asarray(edges, dtype=bool)

        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidInputError(f"Adjacency must be a square matrix, got shape {matrix.shape}")
        if matrix.shape[0] < 1:
            raise InvalidInputError("Adjacency needs at least one node")
        if np.any(np.diag(matrix)):
            raise InvalidInputError("Adjacency must not contain self-loops")
        if not np.array_equal(matrix, matrix.T):
            raise InvalidInputError("Adjacency must be symmetric")

        matrix = matrix.copy()
        matrix.setflags(write=False)
        self.edges = matrix

    @classmethod
    def empty(cls, p: int) -> "Adjacency":
        return cls(np.zeros((p, p), dtype=bool))

    @classmethod
    def complete(cls, p: int) -> "Adjacency":
        return cls(~np.eye(p, dtype=bool))

    @classmethod
    def from_edge_list(cls, p: int, pairs: Iterable[Tuple[int, int]]) -> "Adjacency":
        """
        Build a graph on p nodes from unordered (i, j) pairs.

        Raises:
            InvalidInputError: On self-loops or node ids outside 0..p-1
        """
        matrix = np.zeros((p, p), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < p and 0 <= j < p):
                raise InvalidInputError(f"Edge ({i}, {j}) references a node outside 0..{p - 1}")
            if i == j:
                raise InvalidInputError(f"Edge ({i}, {j}) is a self-loop")
            matrix[i, j] = matrix[j, i] = True
        return cls(matrix)

    @property
    def p(self) -> int:
        return self.edges.shape[0]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.edges, 1)))

    def edge_list(self) -> List[Tuple[int, int]]:
        """Edges as (i, j) pairs with i < j, in lexicographic order"""
        rows, cols = np.nonzero(np.triu(self.edges, 1))
        return [(int(i), int(j)) for i, j in zip(rows, cols)]

    def to_networkx(self, labels: Optional[Sequence[str]] = None) -> nx.Graph:
        """
        Convert to a networkx Graph with nodes 0..p-1 and a ``label`` attribute.
        """
        graph = nx.Graph()
        for node in range(self.p):
            graph.add_node(node, label=str(labels[node]) if labels is not None else str(node))
        graph.add_edges_from(self.edge_list())
        return graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Adjacency):
            return NotImplemented
        return np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"Adjacency(p={self.p}, edges={self.edge_count})"


class ThresholdPath(NamedTuple):
    """Graphs along a strictly decreasing threshold sequence"""
    thresholds: Tuple[float, ...]
    graphs: Tuple[Adjacency, ...]
    edge_counts: Tuple[int, ...]


def score_matrix(source: ScoreSource) -> np.ndarray:
    """
    Absolute off-diagonal scores of a matrix; the diagonal is zeroed.

    Accepts a PartialCorrMatrix, a DCorMatrix or a plain square array.
    """
    entries = getattr(source, "entries", source)
    scores = np.abs(as_matrix(entries, name="score matrix", square=True))
    np.fill_diagonal(scores, 0.0)
    return scores


def threshold_graph(pc: ScoreSource, tp: float) -> Adjacency:
    """
    Keep the pairs whose absolute score exceeds the tuning parameter.

    Args:
        pc: Score matrix
        tp: Tuning parameter, tp ≥ 0

    Returns:
        Adjacency with edge (i, j) iff |score_ij| > tp
    """
    if not tp >= 0:
        raise InvalidInputError(f"Tuning parameter must be nonnegative, got {tp}")

    upper = np.triu(score_matrix(pc) > tp, 1)
    return Adjacency(upper | upper.T)


def threshold_for_edge_count(pc: ScoreSource, k: int) -> Tuple[float, Adjacency]:
    """
    Keep exactly the k pairs with the largest absolute scores.

    Ties at the cut are broken by ascending (i, j) lexicographic pair order.

    Args:
        pc: Score matrix
        k: Number of edges, 0 ≤ k ≤ p(p-1)/2

    Returns:
        (tp, graph) where tp is the magnitude of the smallest included edge,
        or the largest magnitude when k = 0

    Raises:
        InvalidInputError: If k is out of range
    """
    scores = score_matrix(pc)
    p = scores.shape[0]
    pair_count = p * (p - 1) // 2

    if not 0 <= k <= pair_count:
        raise InvalidInputError(f"Edge count must lie in [0, {pair_count}], got {k}")

    rows, cols = np.triu_indices(p, 1)
    magnitudes = scores[rows, cols]
    # stable sort keeps lexicographic pair order among equal magnitudes
    order = np.argsort(-magnitudes, kind="stable")[:k]

    edges = np.zeros((p, p), dtype=bool)
    edges[rows[order], cols[order]] = True
    edges |= edges.T

    if k == 0:
        tp = float(magnitudes.max()) if pair_count else 0.0
    else:
        tp = float(magnitudes[order[-1]])

    logger.debug(f"Selected {k} edges at tp={tp!r}")
    return tp, Adjacency(edges)


def estimation_path(pc: ScoreSource, thresholds: Sequence[float]) -> ThresholdPath:
    """
    Threshold the same score matrix at each value of a descending sequence.

    Raises:
        InvalidInputError: If the sequence is empty, negative or not strictly decreasing
    """
    values = [float(t) for t in thresholds]

    if not values:
        raise InvalidInputError("Threshold sequence must not be empty")
    if any(not np.isfinite(t) or t < 0 for t in values):
        raise InvalidInputError("Thresholds must be finite and nonnegative")
    if any(later >= earlier for earlier, later in zip(values, values[1:])):
        raise InvalidInputError("Thresholds must be strictly decreasing")

    graphs = tuple(threshold_graph(pc, t) for t in values)
    return ThresholdPath(
        thresholds=tuple(values),
        graphs=graphs,
        edge_counts=tuple(g.edge_count for g in graphs),
    )


def auto_thresholds(pc: ScoreSource, count: int = 40, min_ratio: float = 0.05) -> List[float]:
    """
    Geometric threshold sequence from max|score| down to min_ratio·max|score|.

    Raises:
        InvalidInputError: If every off-diagonal score is zero or the parameters are out of range
    """
    if count < 1:
        raise InvalidInputError(f"Threshold count must be positive, got {count}")
    if not 0.0 < min_ratio < 1.0:
        raise InvalidInputError(f"min_ratio must lie in (0, 1), got {min_ratio}")

    top = float(score_matrix(pc).max())
    if top <= 0.0:
        raise InvalidInputError("Cannot build a threshold path: all off-diagonal scores are zero")

    if count == 1:
        return [top]
    return [float(t) for t in np.geomspace(top, top * min_ratio, count)]


def check_same_size(a: Adjacency, b: Adjacency) -> None:
    if a.p != b.p:
        raise DimensionMismatchError(f"Graphs have different node counts: {a.p} and {b.p}")
