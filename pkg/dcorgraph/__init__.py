"""
dcorgraph Package
=================

Graph structure learning with distance correlation:
- Distance covariance and correlation between samples
- Distance-correlation matrices, their inverses and partial correlations
- Thresholded graph estimates and estimation paths
- Erdős–Rényi simulations scored by Hamming distance
- CSV ingestion and price-to-return preprocessing

Version: 1.0.0
"""

__version__ = "1.0.0"

from .config import Settings, get_settings
from .core import GraphEstimator, dcor, dcor_fast, dcor_matrix
from .utils.exceptions import GraphLearnError

__all__ = [
    "get_settings",
    "Settings",
    "GraphEstimator",
    "dcor",
    "dcor_fast",
    "dcor_matrix",
    "GraphLearnError",
    "__version__",
]
