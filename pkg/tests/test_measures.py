import numpy as np
import pytest

from app.errors import DimensionMismatchError
from app.models.quantum import DensityMatrix
from app.services.measures import negativity
from app.services.numerics import kron, partial_transpose, trace_norm
from app.services.states import maximally_mixed, one_param_state

from .conftest import random_density


def _oracle(rho: DensityMatrix, factor: int) -> float:
    values = np.linalg.eigvalsh(partial_transpose(rho.matrix, rho.dims, factor))
    return float(np.sum(np.abs(values)) - 1.0) / (min(rho.dims) - 1)


def test_desk_values():
    assert negativity(one_param_state(0.0)) == pytest.approx(1.0, abs=1e-9)
    assert negativity(one_param_state(0.5)) == pytest.approx(0.5, abs=1e-9)


def test_bell_state():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert negativity(DensityMatrix(np.outer(psi, psi), (2, 2))) == pytest.approx(1.0)


def test_transposed_side_does_not_matter(rng):
    for _ in range(100):
        dims = [(2, 3), (2, 4), (3, 2)][rng.integers(3)]
        rho = random_density(rng, dims, rank=int(rng.integers(1, 4)))
        m = rho.matrix
        first = trace_norm(partial_transpose(m, rho.dims, 0))
        second = trace_norm(partial_transpose(m, rho.dims, 1))
        assert first == pytest.approx(second, abs=1e-10)
        assert negativity(rho) == pytest.approx(_oracle(rho, 0), abs=1e-10)


def test_product_states_are_separable(rng):
    for _ in range(20):
        a = random_density(rng, (1, 2)).matrix
        b = random_density(rng, (1, 3)).matrix
        assert abs(negativity(DensityMatrix(kron(a, b), (2, 3)))) < 1e-12
    assert negativity(maximally_mixed((2, 4))) == 0.0


def test_never_negative(rng):
    for _ in range(50):
        assert negativity(random_density(rng)) >= 0.0


def test_continuity():
    base = negativity(one_param_state(0.2))
    near = negativity(one_param_state(0.2 + 1e-9))
    assert abs(near - base) < 1e-7


def test_needs_two_nontrivial_factors():
    with pytest.raises(DimensionMismatchError):
        negativity(DensityMatrix(np.eye(3) / 3, (1, 3)))
