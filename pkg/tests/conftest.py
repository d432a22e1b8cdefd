import numpy as np
import pytest

from app.models.quantum import DensityMatrix


def random_density(rng: np.random.Generator, dims=(2, 3), rank=None) -> DensityMatrix:
    """Ginibre-distributed mixed state on ``dims``."""
    side = dims[0] * dims[1]
    rank = rank or side
    g = rng.normal(size=(side, rank)) + 1j * rng.normal(size=(side, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dims)


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(scale=scale, size=(n, n)) + 1j * rng.normal(scale=scale, size=(n, n))
    return 0.5 * (g + g.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
