import numpy as np
import pytest

from app.errors import DimensionMismatchError, ParameterRangeError
from app.models.quantum import DensityMatrix
from app.services.states import (
    maximally_mixed,
    one_param_state,
    printed_one_param_matrix,
    purity,
    validate_density,
)


@pytest.mark.parametrize("mu", np.linspace(0.0, 0.5, 11))
def test_family_is_a_valid_state(mu):
    rho = one_param_state(mu)
    report = validate_density(rho)
    assert report.passed
    assert rho.dims == (2, 3)
    assert rho.trace() == pytest.approx(1.0, abs=1e-15)


def test_family_layout():
    rho = one_param_state(0.2).matrix
    # |00>, |01>, |11>, |12> at mu/2; |02>, |10> at (1 - 2 mu)/2
    assert np.real(np.diag(rho)) == pytest.approx([0.1, 0.1, 0.3, 0.3, 0.1, 0.1])
    assert rho[0, 5] == rho[5, 0] == pytest.approx(0.1)
    assert rho[2, 3] == rho[3, 2] == pytest.approx(0.3)


def test_purity_endpoints():
    assert purity(one_param_state(0.0)) == pytest.approx(1.0)
    assert purity(one_param_state(0.5)) == pytest.approx(3 / 8)


@pytest.mark.parametrize("mu", [-0.1, 0.7, float("inf")])
def test_mu_out_of_range(mu):
    with pytest.raises(ParameterRangeError):
        one_param_state(mu)


@pytest.mark.parametrize("mu", [0.0, 0.1, 0.3, 0.45])
def test_printed_family_is_not_a_state(mu):
    report = validate_density(printed_one_param_matrix(mu))
    assert not report.passed
    assert report.trace_deviation == pytest.approx(0.5 - mu)
    assert report.hermiticity_deviation == pytest.approx((1 - 2 * mu) / 2)


def test_validation_reports_negative_eigenvalue():
    m = np.diag([1.2, -0.2, 0.0, 0.0])
    report = validate_density(DensityMatrix(m, (2, 2)))
    assert not report.passed
    assert report.trace_deviation == pytest.approx(0.0, abs=1e-15)
    assert report.min_eigenvalue == pytest.approx(-0.2)


def test_density_matrix_is_read_only():
    rho = one_param_state(0.1)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_density_matrix_shape_checks():
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(np.eye(6), (2, 2))
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(np.ones((2, 3)), (1, 2))


def test_maximally_mixed():
    rho = maximally_mixed((2, 3))
    assert validate_density(rho).passed
    assert purity(rho) == pytest.approx(1 / 6)


@pytest.mark.parametrize("mu", np.linspace(0.05, 0.5, 10))
def test_family_is_mixed_for_positive_mu(mu):
    value = purity(one_param_state(mu))
    assert value < 1.0
    assert value == pytest.approx(mu**2 + (1 - 2 * mu) ** 2 + mu**2 / 2, abs=1e-12)
