import math

import numpy as np
import pytest

from app.errors import DimensionMismatchError, ParameterRangeError
from app.models.models import R_MAX, Subsystem
from app.services.measures import negativity
from app.services.rindler import (
    accelerate,
    discrepancy_report,
    paper_coefficients_qubit,
    paper_coefficients_qutrit,
    paper_matrix_qubit,
    qubit_isometry,
    qutrit_isometry,
    rindler_parameter_from_acceleration,
)
from app.services.states import one_param_state, validate_density


def _padded(rho: np.ndarray) -> np.ndarray:
    out = np.zeros((8, 8), dtype=complex)
    keep = [a * 4 + b for a in range(2) for b in range(3)]
    out[np.ix_(keep, keep)] = rho
    return out


def test_accelerated_qubit_matches_printed_table():
    for mu in np.linspace(0.0, 0.5, 6):
        for r in np.linspace(0.0, R_MAX, 6):
            derived = accelerate(one_param_state(mu), Subsystem.QUBIT, r).matrix
            printed = paper_matrix_qubit(mu, r).matrix
            assert np.max(np.abs(derived - printed)) <= 1e-12
            assert discrepancy_report(mu, r, Subsystem.QUBIT).consistent


def test_printed_qutrit_table_loses_trace():
    report = discrepancy_report(0.3, 0.0, Subsystem.QUTRIT)
    assert report.derived_trace == pytest.approx(1.0, abs=1e-12)
    assert report.printed_trace == pytest.approx(0.65, abs=1e-12)
    assert report.trace_gap == pytest.approx(0.35, abs=1e-12)
    assert not report.consistent
    assert {row.element for row in report.missing} >= {"|02><02|", "|12><12|"}


@pytest.mark.parametrize("mu", [0.0, 0.25, 0.5])
def test_printed_qutrit_gap_at_rest(mu):
    report = discrepancy_report(mu, 0.0, Subsystem.QUTRIT)
    assert report.trace_gap == pytest.approx(0.5 - 0.5 * mu, abs=1e-12)


def test_coefficient_tables_have_all_labels():
    assert set(paper_coefficients_qubit(0.2, 0.3).values) == {f"A{i}" for i in range(1, 11)}
    qutrit = paper_coefficients_qutrit(0.2, 0.3)
    assert set(qutrit.values) == {f"B{i}" for i in range(1, 17)}
    assert qutrit["B13"] == qutrit["B9"]


def test_isometries_are_isometries(rng):
    for r in rng.uniform(0.0, R_MAX, 50):
        for iso in (qubit_isometry(r), qutrit_isometry(r)):
            assert np.allclose(iso.gram(), np.eye(iso.in_dim), atol=1e-12)


def test_identity_limits():
    for mu in np.linspace(0.0, 0.5, 6):
        rho = one_param_state(mu)
        assert np.max(np.abs(accelerate(rho, Subsystem.QUBIT, 0.0).matrix - rho.matrix)) <= 1e-14
        moved = accelerate(rho, Subsystem.QUTRIT, 0.0)
        assert moved.dims == (2, 4)
        assert np.max(np.abs(moved.matrix - _padded(rho.matrix))) <= 1e-14


def test_qubit_acceleration_closed_form():
    # mu = 0: N(r) = sqrt(sin^4 r / 4 + cos^2 r) - sin^2 r / 2
    rho = one_param_state(0.0)
    for r in np.linspace(0.0, R_MAX, 9):
        s2, c2 = math.sin(r) ** 2, math.cos(r) ** 2
        expected = math.sqrt(s2 * s2 / 4 + c2) - s2 / 2
        assert negativity(accelerate(rho, Subsystem.QUBIT, r)) == pytest.approx(expected, abs=1e-10)
    assert negativity(accelerate(rho, Subsystem.QUBIT, R_MAX)) == pytest.approx(0.5, abs=1e-9)


def test_accelerated_states_are_valid(rng):
    for mu, r in zip(rng.uniform(0.0, 0.5, 50), rng.uniform(0.0, R_MAX, 50)):
        rho = one_param_state(mu)
        for which in Subsystem:
            assert validate_density(accelerate(rho, which, r)).passed
        both = accelerate(accelerate(rho, Subsystem.QUTRIT, r), Subsystem.QUBIT, r)
        assert both.dims == (2, 4)
        assert validate_density(both).passed


def test_qutrit_acceleration_needs_three_levels():
    rho = accelerate(one_param_state(0.2), Subsystem.QUTRIT, 0.3)
    with pytest.raises(DimensionMismatchError):
        accelerate(rho, Subsystem.QUTRIT, 0.3)


@pytest.mark.parametrize("r", [-0.01, R_MAX + 1e-6, 1.0])
def test_r_out_of_range(r):
    with pytest.raises(ParameterRangeError):
        qubit_isometry(r)


def test_rindler_parameter_from_acceleration():
    assert rindler_parameter_from_acceleration(math.pi / math.log(2), 1.0, 1.0) == pytest.approx(
        math.atan(0.5)
    )
    assert rindler_parameter_from_acceleration(1e12, 1.0, 1.0) == pytest.approx(R_MAX, abs=1e-9)
    assert rindler_parameter_from_acceleration(1e-3, 1.0, 1.0) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ParameterRangeError):
        rindler_parameter_from_acceleration(0.0, 1.0, 1.0)


def test_printed_qutrit_table_misses_pair_weight():
    mu, r = 0.3, 0.5
    s2 = math.sin(r) ** 2
    report = discrepancy_report(mu, r, Subsystem.QUTRIT)
    rows = {row.element: row for row in report.missing}
    assert "|0P><0P|" in rows
    pair = rows["|0P><0P|"]
    low, high = mu / 2, (1 - 2 * mu) / 2
    assert pair.derived == pytest.approx(low * s2 * s2 + low * s2 + high * s2, abs=1e-12)
    assert pair.derived - pair.printed == pytest.approx(low * s2, abs=1e-12)


@pytest.mark.parametrize("mu", np.linspace(0.0, 0.5, 6))
def test_family_is_the_unaccelerated_table(mu):
    printed = paper_matrix_qubit(mu, 0.0).matrix
    assert np.max(np.abs(one_param_state(mu).matrix - printed)) <= 1e-14
