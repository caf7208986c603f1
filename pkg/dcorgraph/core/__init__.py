"""
Core Module
===========

Distance correlation statistics and the graph estimator built on them:
- Pairwise distances, double centering, distance covariance/correlation
- Distance-correlation matrix, ridge-guarded inversion, partial correlations
- Thresholding into graphs and estimation paths
"""

from .dataset import Dataset
from .dcor import dcor, dcor_fast, dcov2, double_center, pairwise_distances
from .estimator import GraphEstimator, dcor_matrix, invert, log_det, partial_correlations
from .matrices import DCorMatrix, PartialCorrMatrix
from .thresholding import Adjacency, estimation_path, threshold_for_edge_count, threshold_graph

__all__ = [
    "Dataset",
    "dcor",
    "dcor_fast",
    "dcov2",
    "double_center",
    "pairwise_distances",
    "GraphEstimator",
    "dcor_matrix",
    "invert",
    "log_det",
    "partial_correlations",
    "DCorMatrix",
    "PartialCorrMatrix",
    "Adjacency",
    "estimation_path",
    "threshold_for_edge_count",
    "threshold_graph",
]
