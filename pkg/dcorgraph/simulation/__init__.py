"""
Simulation Module
=================

Seeded Erdős–Rényi graphs, linear synthetic data, structure recovery
scoring and the determinant experiment.
"""

from .experiments import determinant_experiment, recovery_experiment, recovery_sweep
from .random_graphs import ErdosRenyiSpec, LinearDataSpec, erdos_renyi, hamming_distance, sample_linear_data

__all__ = [
    "ErdosRenyiSpec",
    "LinearDataSpec",
    "erdos_renyi",
    "sample_linear_data",
    "hamming_distance",
    "recovery_experiment",
    "recovery_sweep",
    "determinant_experiment",
]
