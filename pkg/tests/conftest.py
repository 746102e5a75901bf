import numpy as np
import pytest

from coupled_array import ArrayGeometry


def random_feasible_geometry(rng, n=None, d_min=0.1):
    """Feasible random geometry: cumulative spacings in [0.15, 0.9] wavelengths."""
    if n is None:
        n = int(rng.integers(2, 7))
    spacings = rng.uniform(0.15, 0.9, size=n - 1)
    positions = np.concatenate([[0.0], np.cumsum(spacings)])
    span = positions[-1] - positions[0]
    return ArrayGeometry(positions, d_min=d_min, d_max=2.0 * span + 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
