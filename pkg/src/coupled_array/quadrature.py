"""Gauss-Legendre quadrature on [-1, 1] for direction-cosine integrals.

Coupling-matrix entries have a closed sinc form and never need quadrature;
the grids produced here back the orthonormalization inner products and the
average-directivity validation integral.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_NODES = 256


@lru_cache(maxsize=16)
def _cached(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_legendre(n: int = DEFAULT_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Return (nodes, weights) of the n-point Gauss-Legendre rule on [-1, 1]."""
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    return _cached(int(n))
