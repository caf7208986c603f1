"""
Distance Correlation
====================

Sample distance covariance, distance variance and distance correlation for
pairs of univariate samples.

Two paths are provided:

- the definitional path, which materializes the n×n distance matrices,
  double-centers them and averages the element-wise product;
- the fast path, which keeps only per-row distance means and the grand mean
  of each sample and visits every unordered pair once. Its kernels are
  compiled with numba and release the GIL, so the distance-correlation
  matrix can run pairs on threads.

Both paths sum in a fixed order, so results are bitwise reproducible and
exactly symmetric in their two arguments.
"""

import logging
import math
from typing import NamedTuple, Tuple

import numba
import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..utils.exceptions import ConsistencyError, DimensionMismatchError
from ..utils.validators import ArrayLike, as_sample

logger = logging.getLogger(__name__)

NEGATIVE_ROUNDOFF_TOLERANCE = 1e-12


class DistanceMatrix(NamedTuple):
    """Absolute pairwise differences of one sample"""
    entries: np.ndarray
    n: int


class CenteredDistances(NamedTuple):
    """Double-centered distance matrix with the means used to center it"""
    entries: np.ndarray
    row_means: np.ndarray
    grand_mean: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]


class CenteringTerms(NamedTuple):
    """Per-sample state of the fast path: distance row means, grand mean and ν²(X)"""
    row_means: np.ndarray
    grand_mean: float
    dvar2: float


class DCovResult(NamedTuple):
    """Distance statistics of one pair of samples"""
    dcov2: float
    dvar_x2: float
    dvar_y2: float
    dcor: float

    @property
    def r_squared(self) -> float:
        """The squared distance correlation R²(X, Y)"""
        return self.dcor * self.dcor


# ---------------------------------------------------------------------------
# Definitional path
# ---------------------------------------------------------------------------

def pairwise_distances(x: ArrayLike) -> DistanceMatrix:
    """
    Compute the matrix of absolute differences |x_k - x_l|.

    Args:
        x: One variable's observations

    Returns:
        DistanceMatrix with symmetric, zero-diagonal, nonnegative entries

    Raises:
        InvalidInputError: If a value is non-finite or fewer than 2 values are given
    """
    sample = as_sample(x)
    entries = squareform(pdist(sample[:, np.newaxis], metric="cityblock"))
    return DistanceMatrix(entries=entries, n=sample.shape[0])


def double_center(d: DistanceMatrix) -> CenteredDistances:
    """
    Subtract row and column means from a distance matrix and add back the grand mean.

    Univariate distance matrices are symmetric, so the column means equal the
    row means and only the latter are stored.

    Args:
        d: Distance matrix

    Returns:
        CenteredDistances whose rows and columns sum to zero
    """
    row_means = d.entries.mean(axis=1)
    grand_mean = float(row_means.mean())
    entries = d.entries - row_means[:, np.newaxis] - row_means[np.newaxis, :] + grand_mean
    return CenteredDistances(entries=entries, row_means=row_means, grand_mean=grand_mean)


def dcov2(a: CenteredDistances, b: CenteredDistances) -> float:
    """
    Average of the element-wise product of two centered distance matrices.

    With ``a`` and ``b`` built from the same sample this is the distance
    variance of that sample.

    Raises:
        DimensionMismatchError: If the matrices come from samples of different size
    """
    if a.n != b.n:
        raise DimensionMismatchError(f"Sample sizes must be equal, got {a.n} and {b.n}")

    n = a.n
    return float(np.sum(a.entries * b.entries)) / (n * n)


def dcor(x: ArrayLike, y: ArrayLike) -> DCovResult:
    """
    Distance correlation of two samples through the definitional path.

    Args:
        x: First sample
        y: Second sample of the same length

    Returns:
        DCovResult with ν²(X,Y), ν²(X), ν²(Y) and the distance correlation

    Raises:
        DimensionMismatchError: If the samples differ in length
        InvalidInputError: If a sample is too short or non-finite
    """
    x_arr, y_arr = _paired_samples(x, y)

    a = double_center(pairwise_distances(x_arr))
    b = double_center(pairwise_distances(y_arr))

    return _finish(
        dcov2(a, b),
        dcov2(a, a),
        dcov2(b, b),
        a.grand_mean,
        b.grand_mean,
    )


# ---------------------------------------------------------------------------
# Fast path
# ---------------------------------------------------------------------------

@numba.njit(nogil=True)
def _row_means_kernel(x):
    n = x.shape[0]
    sums = np.zeros(n)
    for k in range(n):
        for l in range(k + 1, n):
            d = abs(x[k] - x[l])
            sums[k] += d
            sums[l] += d

    total = 0.0
    for k in range(n):
        sums[k] /= n
        total += sums[k]

    return sums, total / n


@numba.njit(nogil=True)
def _centered_product_kernel(x, rx, gx, y, ry, gy):
    n = x.shape[0]
    off_diagonal = 0.0
    for k in range(n):
        for l in range(k + 1, n):
            a = abs(x[k] - x[l]) - rx[k] - rx[l] + gx
            b = abs(y[k] - y[l]) - ry[k] - ry[l] + gy
            off_diagonal += a * b

    # A_kk = -2 ā_k + ā, the only diagonal contribution
    diagonal = 0.0
    for k in range(n):
        diagonal += (gx - 2.0 * rx[k]) * (gy - 2.0 * ry[k])

    return (2.0 * off_diagonal + diagonal) / (n * n)


def column_terms(x: ArrayLike) -> CenteringTerms:
    """
    Compute the centering terms of one sample, once, for reuse across partners.

    Args:
        x: One variable's observations

    Returns:
        CenteringTerms with distance row means, grand mean and distance variance
    """
    sample = as_sample(x)
    row_means, grand_mean = _row_means_kernel(sample)
    dvar2 = _centered_product_kernel(sample, row_means, grand_mean, sample, row_means, grand_mean)
    dvar2 = _clamp_nonnegative(dvar2, grand_mean * grand_mean, "distance variance")
    return CenteringTerms(row_means=row_means, grand_mean=float(grand_mean), dvar2=dvar2)


def dcor_from_terms(x: np.ndarray, tx: CenteringTerms, y: np.ndarray, ty: CenteringTerms) -> DCovResult:
    """
    Pair kernel of the fast path.

    Args:
        x: Validated first sample
        tx: Centering terms of ``x``
        y: Validated second sample, same length
        ty: Centering terms of ``y``

    Returns:
        DCovResult for the pair
    """
    cross = _centered_product_kernel(x, tx.row_means, tx.grand_mean, y, ty.row_means, ty.grand_mean)
    return _finish(cross, tx.dvar2, ty.dvar2, tx.grand_mean, ty.grand_mean)


def dcor_fast(x: ArrayLike, y: ArrayLike) -> DCovResult:
    """
    Distance correlation without materializing any n×n matrix.

    Agrees with :func:`dcor` to within 1e-10.
    """
    x_arr, y_arr = _paired_samples(x, y)
    return dcor_from_terms(x_arr, column_terms(x_arr), y_arr, column_terms(y_arr))


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _paired_samples(x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    x_arr = as_sample(x, "x")
    y_arr = as_sample(y, "y")
    if x_arr.shape[0] != y_arr.shape[0]:
        raise DimensionMismatchError(
            f"Sample sizes must be equal, got {x_arr.shape[0]} and {y_arr.shape[0]}"
        )
    return x_arr, y_arr


def _clamp_nonnegative(value: float, scale: float, label: str) -> float:
    """Clamp tiny negative round-off to zero; larger negatives are a bug"""
    if value >= 0.0:
        return float(value)

    tolerance = NEGATIVE_ROUNDOFF_TOLERANCE * max(1.0, scale)
    if value > -tolerance:
        return 0.0

    raise ConsistencyError(f"Negative {label} {value!r} exceeds round-off tolerance {tolerance!r}")


def _finish(cross: float, var_x: float, var_y: float, grand_x: float, grand_y: float) -> DCovResult:
    dcov = _clamp_nonnegative(cross, grand_x * grand_y, "distance covariance")
    var_x = _clamp_nonnegative(var_x, grand_x * grand_x, "distance variance")
    var_y = _clamp_nonnegative(var_y, grand_y * grand_y, "distance variance")

    denominator = var_x * var_y
    if denominator <= 0.0:
        return DCovResult(dcov2=dcov, dvar_x2=var_x, dvar_y2=var_y, dcor=0.0)

    r_squared = dcov / math.sqrt(denominator)
    value = min(1.0, max(0.0, math.sqrt(r_squared)))
    return DCovResult(dcov2=dcov, dvar_x2=var_x, dvar_y2=var_y, dcor=value)
