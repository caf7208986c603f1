"""
Seed Derivation
===============

All randomness flows from explicit seeds through numpy's PCG64 bit
generator. Independent streams are derived with
``SeedSequence(entropy=seed, spawn_key=stream)`` so a stream depends only on
the master seed and its stream id, never on execution order.

Stream ids in use:

- ``(1,)``                    Erdős–Rényi edge draws
- ``(2,)``                    visiting order of the linear data generator
- ``(3, j)``                  coefficients, signs and noise of variable j
- ``(4, p, rep, dist)``       determinant experiment datasets
"""

import numpy as np

from .validators import check_seed

STREAM_EDGES = 1
STREAM_ORDER = 2
STREAM_VARIABLE = 3
STREAM_DETERMINANT = 4


def derive_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    Build a PCG64 generator for one named stream of a master seed.

    Args:
        seed: Master seed (unsigned 64-bit)
        *stream: Non-negative integers identifying the stream

    Returns:
        Independent numpy Generator
    """
    sequence = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.PCG64(sequence))
