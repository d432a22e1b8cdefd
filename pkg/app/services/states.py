"""The one-parameter qubit-qutrit family and density-matrix validation."""
import logging

import numpy as np

from app.errors import ParameterRangeError
from app.models.models import MU_MAX, ValidationReport
from app.models.quantum import DensityMatrix
from app.services.numerics import dagger, hermitian_eigenvalues, hermiticity_deviation

logger = logging.getLogger(__name__)

DENSITY_TOL = 1e-10
QUBIT_QUTRIT_DIMS = (2, 3)


def _index(a: int, b: int, d2: int = 3) -> int:
    return a * d2 + b


def check_mu(mu: float) -> float:
    mu = float(mu)
    if not 0.0 <= mu <= MU_MAX:
        raise ParameterRangeError(f"mu out of range [0, 0.5]: {mu:g}")
    return mu


def one_param_state(mu: float) -> DensityMatrix:
    """The qubit-qutrit family rho(mu), 0 <= mu <= 1/2.

    The weight mu/2 sits on |00>, |01>, |11>, |12> with the |00><12| coherence,
    and (1 - 2 mu)/2 on |02>, |10> with the |02><10| coherence. This is the
    r -> 0 limit of the accelerated-qubit coefficient table and has unit trace.
    """
    mu = check_mu(mu)
    low = mu / 2
    high = (1 - 2 * mu) / 2
    m = np.zeros((6, 6), dtype=complex)
    for a, b in ((0, 0), (0, 1), (1, 1), (1, 2)):
        m[_index(a, b), _index(a, b)] = low
    m[_index(0, 0), _index(1, 2)] = low
    m[_index(1, 2), _index(0, 0)] = low
    for a, b in ((0, 2), (1, 0)):
        m[_index(a, b), _index(a, b)] = high
    m[_index(0, 2), _index(1, 0)] = high
    m[_index(1, 0), _index(0, 2)] = high
    return DensityMatrix(m, QUBIT_QUTRIT_DIMS)


def printed_one_param_matrix(mu: float) -> DensityMatrix:
    """The family exactly as it is usually printed, typo included.

    Its diagonal sums to mu + 1/2 and the |10><01| term has no Hermitian
    partner, so it fails ``validate_density`` for every mu below 1/2.
    """
    mu = check_mu(mu)
    low = mu / 2
    high = (1 - 2 * mu) / 2
    m = np.zeros((6, 6), dtype=complex)
    terms = [
        ((0, 1), (0, 1), low),
        ((1, 1), (1, 1), low),
        ((1, 2), (1, 2), low),
        ((0, 2), (0, 2), high),
        ((0, 0), (1, 2), low),
        ((1, 0), (0, 2), high),
        ((1, 2), (0, 0), low),
        ((0, 2), (1, 0), high),
        ((0, 0), (0, 0), low),
        ((1, 0), (0, 1), high),
    ]
    for ket, bra, weight in terms:
        m[_index(*ket), _index(*bra)] += weight
    return DensityMatrix(m, QUBIT_QUTRIT_DIMS)


def validate_density(rho: DensityMatrix) -> ValidationReport:
    """Report hermiticity, trace and positivity deviations of ``rho``.

    The minimum eigenvalue is that of the Hermitian part, so non-Hermitian
    input still yields a complete report.
    """
    m = rho.matrix
    herm = hermiticity_deviation(m)
    trace_dev = abs(complex(np.trace(m)) - 1.0)
    min_eig = float(hermitian_eigenvalues(0.5 * (m + dagger(m)))[0])
    passed = herm <= DENSITY_TOL and trace_dev <= DENSITY_TOL and min_eig >= -DENSITY_TOL
    if not passed:
        logger.debug(
            "density check failed: herm=%.3e trace=%.3e min_eig=%.3e", herm, trace_dev, min_eig
        )
    return ValidationReport(
        hermiticity_deviation=herm,
        trace_deviation=trace_dev,
        min_eigenvalue=min_eig,
        passed=passed,
    )


def purity(rho: DensityMatrix) -> float:
    """trace(rho^2)."""
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))


def maximally_mixed(dims) -> DensityMatrix:
    side = int(np.prod(dims))
    return DensityMatrix(np.eye(side, dtype=complex) / side, tuple(dims))
