"""
Random Graphs
=============

Erdős–Rényi ground-truth graphs, synthetic data with random linear
relationships and white noise along the graph edges, and the Hamming
distance used to score structure recovery.

Every generator is a pure function of its spec: randomness comes from
PCG64 streams derived from the spec's seed (see ``utils.seeding``).
"""

import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..core.dataset import Dataset
from ..core.thresholding import Adjacency, check_same_size
from ..data.pipeline import standardize
from ..utils.exceptions import InvalidInputError
from ..utils.seeding import STREAM_EDGES, STREAM_ORDER, STREAM_VARIABLE, derive_rng

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


class ErdosRenyiSpec(BaseModel):
    """Erdős–Rényi graph on p nodes with target average degree c"""
    p: int = Field(ge=2, description="Node count")
    c: float = Field(gt=0, description="Target average degree")
    seed: int = Field(ge=0, le=MAX_SEED, description="Master seed")

    @property
    def edge_probability(self) -> float:
        return self.c / self.p

    @model_validator(mode='after')
    def validate_probability(self):
        if self.c / self.p > 1.0:
            raise ValueError(f"c/p must not exceed 1, got {self.c}/{self.p}")
        return self


class LinearDataSpec(BaseModel):
    """Linear-relationship data generator parameters"""
    n: int = Field(ge=2, description="Sample count")
    coef_low: float = Field(default=0.3, gt=0, description="Smallest coefficient magnitude")
    coef_high: float = Field(default=0.9, gt=0, description="Largest coefficient magnitude")
    noise_sd: float = Field(default=1.0, gt=0, description="White-noise standard deviation")
    noise: Literal["gaussian", "uniform"] = Field(default="gaussian", description="White-noise distribution")
    seed: int = Field(ge=0, le=MAX_SEED, description="Master seed")

    @model_validator(mode='after')
    def validate_bounds(self):
        if self.coef_low > self.coef_high:
            raise ValueError("coef_low must not exceed coef_high")
        return self


def erdos_renyi(spec: ErdosRenyiSpec) -> Adjacency:
    """
    Draw every unordered pair independently with probability c/p.

    Pairs are drawn in ascending lexicographic (i, j) order, one uniform
    variate each, from the edge stream of the seed.

    Raises:
        InvalidInputError: If c/p exceeds 1
    """
    probability = spec.edge_probability
    if probability > 1.0:
        raise InvalidInputError(f"Edge probability c/p must not exceed 1, got {probability}")

    rng = derive_rng(spec.seed, STREAM_EDGES)
    rows, cols = np.triu_indices(spec.p, 1)
    present = rng.random(rows.size) < probability

    edges = np.zeros((spec.p, spec.p), dtype=bool)
    edges[rows[present], cols[present]] = True
    edges |= edges.T

    graph = Adjacency(edges)
    logger.debug(f"Generated Erdős–Rényi graph p={spec.p}, c={spec.c}, seed={spec.seed}: {graph.edge_count} edges")
    return graph


def _white_noise(rng: np.random.Generator, kind: str, sd: float, n: int) -> np.ndarray:
    if kind == "gaussian":
        return rng.normal(0.0, sd, size=n)
    # uniform with the same standard deviation
    half_width = sd * np.sqrt(3.0)
    return rng.uniform(-half_width, half_width, size=n)


def sample_linear_data(g: Adjacency, spec: LinearDataSpec) -> Dataset:
    """
    Generate n samples whose dependence runs along the edges of g.

    Variables are visited in a seeded random order. Each variable equals the
    sum of s_ij·b_ij·X_i over its already-visited neighbours plus white noise,
    with b_ij uniform on [coef_low, coef_high] and s_ij a fair random sign.
    Variable j draws, from its own stream and in this order: one magnitude
    per neighbour (ascending index), one sign per neighbour, then its noise.
    Columns are standardized at the end.

    Args:
        g: Ground-truth graph
        spec: Generator parameters

    Returns:
        Standardized n×p Dataset
    """
    p, n = g.p, spec.n
    order = derive_rng(spec.seed, STREAM_ORDER).permutation(p)

    values = np.empty((n, p))
    visited = np.zeros(p, dtype=bool)

    for j in order:
        rng = derive_rng(spec.seed, STREAM_VARIABLE, int(j))
        neighbours = np.flatnonzero(g.edges[j])
        magnitudes = rng.uniform(spec.coef_low, spec.coef_high, size=neighbours.size)
        signs = np.where(rng.random(neighbours.size) < 0.5, -1.0, 1.0)

        column = _white_noise(rng, spec.noise, spec.noise_sd, n)
        for i, magnitude, sign in zip(neighbours, magnitudes, signs):
            if visited[i]:
                column += sign * magnitude * values[:, i]

        values[:, j] = column
        visited[j] = True

    return standardize(Dataset(values))


def hamming_distance(a: Adjacency, b: Adjacency) -> int:
    """
    Number of unordered pairs on which two graphs disagree.

    Raises:
        DimensionMismatchError: If the graphs have different node counts
    """
    check_same_size(a, b)
    return int(np.count_nonzero(np.triu(a.edges != b.edges, 1)))


def random_baseline_hamming(p: int, k: int) -> float:
    """
    Expected Hamming distance between a fixed k-edge graph and a uniformly
    random k-edge graph on the same p nodes: 2k(1 - k/M), M = p(p-1)/2.
    """
    pairs = p * (p - 1) / 2
    if not 0 <= k <= pairs:
        raise InvalidInputError(f"Edge count must lie in [0, {int(pairs)}], got {k}")
    if pairs == 0:
        return 0.0
    return 2.0 * k * (1.0 - k / pairs)
