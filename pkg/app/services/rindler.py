"""Unruh acceleration of one subsystem and the printed coefficient tables.

A Minkowski mode is mapped by an isometry into region I (x) region II and
region II is traced out. The phase of the mode transformation is fixed to 0.
Region levels are (0, 1) for the qubit and (0, U, D, P) = (0, 1, 2, 3) for
the qutrit, P being the doubly occupied pair level.
"""
import logging
import math
from typing import Dict, List

import numpy as np

from app.errors import DimensionMismatchError, ParameterRangeError
from app.models.models import (
    R_MAX,
    DiscrepancyReport,
    DiscrepancyRow,
    PaperCoefficients,
    Subsystem,
)
from app.models.quantum import DensityMatrix, Isometry
from app.services.numerics import dagger, partial_trace
from app.services.states import check_mu, one_param_state

logger = logging.getLogger(__name__)

REGION_DIM = {Subsystem.QUBIT: 2, Subsystem.QUTRIT: 4}
QUTRIT_LEVELS = ("0", "1", "2", "P")
DISCREPANCY_TOL = 1e-12
_NONZERO = 1e-15


def check_r(r: float) -> float:
    r = float(r)
    if not 0.0 <= r <= R_MAX + 1e-15:
        raise ParameterRangeError(f"r out of range [0, pi/4]: {r:g}")
    return min(r, R_MAX)


def rindler_parameter_from_acceleration(a: float, omega: float, c: float) -> float:
    """r = atan(exp(-pi * omega * c / a)) for a mode of frequency omega."""
    for name, value in (("acceleration", a), ("omega", omega), ("c", c)):
        if not value > 0:
            raise ParameterRangeError(f"{name} must be positive, got {value!r}")
    return math.atan(math.exp(-math.pi * omega * c / a))


def qubit_isometry(r: float) -> Isometry:
    """|0> -> cos r |0,0> + sin r |1,1>,  |1> -> |1,0>."""
    r = check_r(r)
    v = np.zeros((4, 2), dtype=complex)
    v[0 * 2 + 0, 0] = math.cos(r)
    v[1 * 2 + 1, 0] = math.sin(r)
    v[1 * 2 + 0, 1] = 1.0
    return Isometry(v, in_dim=2, out_dims=(2, 2))


def qutrit_isometry(r: float) -> Isometry:
    """Vacuum, spin-up and spin-down Minkowski modes in Rindler regions I and II.

    |0_M> -> cos^2 r |0,0> + sin r cos r (|U,D> + |D,U>) + sin^2 r |P,P>
    |U_M> -> cos r |U,0> + sin r |P,U>
    |D_M> -> cos r |D,0> - sin r |P,D>
    """
    r = check_r(r)
    c, s = math.cos(r), math.sin(r)
    zero, up, down, pair = range(4)

    def out(first: int, second: int) -> int:
        return first * 4 + second

    v = np.zeros((16, 3), dtype=complex)
    v[out(zero, zero), 0] = c * c
    v[out(up, down), 0] = s * c
    v[out(down, up), 0] = s * c
    v[out(pair, pair), 0] = s * s
    v[out(up, zero), 1] = c
    v[out(pair, up), 1] = s
    v[out(down, zero), 2] = c
    v[out(pair, down), 2] = -s
    return Isometry(v, in_dim=3, out_dims=(4, 4))


def accelerate(rho: DensityMatrix, which: Subsystem, r: float) -> DensityMatrix:
    """Accelerate one factor of ``rho`` and trace out region II.

    The qubit (factor 0) may be accelerated on any [2, d] state and stays
    2-level. The qutrit (factor 1) requires a [2, 3] state and becomes
    4-level (0, U, D, P).
    """
    which = Subsystem(which)
    d0, d1 = rho.dims
    if which == Subsystem.QUBIT:
        if d0 != 2:
            raise DimensionMismatchError(f"qubit acceleration needs a 2-level factor 0, got {d0}")
        iso = qubit_isometry(r).matrix.reshape(2, 2, 2)
        # rows ordered (region I, factor 1, region II) so region II is the trailing factor
        w = np.einsum("ija,bc->ibjac", iso, np.eye(d1)).reshape(2 * d1 * 2, 2 * d1)
        kept, traced = 2 * d1, 2
        out_dims = (2, d1)
    else:
        if d1 != 3:
            raise DimensionMismatchError(f"qutrit acceleration needs a 3-level factor 1, got {d1}")
        iso = qutrit_isometry(r).matrix.reshape(4, 4, 3)
        w = np.einsum("ac,ijt->aijct", np.eye(d0), iso).reshape(d0 * 4 * 4, d0 * 3)
        kept, traced = d0 * 4, 4
        out_dims = (d0, 4)
    lifted = w @ rho.matrix @ dagger(w)
    reduced = partial_trace(lifted, (kept, traced), 1)
    return DensityMatrix(reduced, out_dims)


def paper_coefficients_qubit(mu: float, r: float) -> PaperCoefficients:
    """The ten accelerated-qubit coefficients, evaluated as printed."""
    mu, r = check_mu(mu), check_r(r)
    c, s = math.cos(r), math.sin(r)
    low, high = mu / 2, (1 - 2 * mu) / 2
    values = {
        "A1": low * c**2,
        "A2": low * c**2,
        "A3": low * c,
        "A4": low * c,
        "A5": high * c,
        "A6": high * c,
        "A7": high * c**2,
        "A8": high + low * s**2,
        "A9": low + high * s**2,
        "A10": low * (1 + s**2),
    }
    return PaperCoefficients(table="A", mu=mu, r=r, values=values)


def paper_coefficients_qutrit(mu: float, r: float) -> PaperCoefficients:
    """The sixteen accelerated-qutrit coefficients, evaluated as printed.

    The stray "p" in B4 is read as mu. No trace guarantee: the printed table
    does not sum to one.
    """
    mu, r = check_mu(mu), check_r(r)
    c, s = math.cos(r), math.sin(r)
    s2 = math.sin(2 * r)
    low, high = mu / 2, (1 - 2 * mu) / 2
    values = {
        "B1": low * c**4,
        "B2": low * c**2 * (1 + s**2),
        "B3": mu / 8 * s2**2,
        "B4": s**2 * (low * s**2 + high),
        "B5": high * c**4,
        "B6": c**2 * (low + high * s**2),
        "B7": (1 - 2 * mu) / 8 * s2**2,
        "B8": s**2 * (low + high * s**2),
        "B9": low * c**3,
        "B10": mu / 4 * s2 * s,
        "B11": high * c**2,
        "B12": (1 - 2 * mu) / 4 * s2 * s,
    }
    for mirror, source in (("B13", "B9"), ("B14", "B10"), ("B15", "B11"), ("B16", "B12")):
        values[mirror] = values[source]
    return PaperCoefficients(table="B", mu=mu, r=r, values=values)


# (ket, bra) positions of each printed coefficient; ket/bra are (qubit, qutrit) levels
_QUBIT_LAYOUT = {
    "A1": ((0, 0), (0, 0)),
    "A2": ((0, 1), (0, 1)),
    "A3": ((0, 0), (1, 2)),
    "A4": ((1, 2), (0, 0)),
    "A5": ((1, 0), (0, 2)),
    "A6": ((0, 2), (1, 0)),
    "A7": ((0, 2), (0, 2)),
    "A8": ((1, 0), (1, 0)),
    "A9": ((1, 2), (1, 2)),
    "A10": ((1, 1), (1, 1)),
}

_QUTRIT_LAYOUT = {
    "B1": ((0, 0), (0, 0)),
    "B2": ((0, 1), (0, 1)),
    "B3": ((0, 2), (0, 2)),
    "B4": ((0, 3), (0, 3)),
    "B5": ((1, 0), (1, 0)),
    "B6": ((1, 1), (1, 1)),
    "B7": ((1, 2), (1, 2)),
    "B8": ((1, 3), (1, 3)),
    "B9": ((1, 2), (0, 0)),
    "B10": ((1, 3), (0, 1)),
    "B11": ((0, 2), (1, 0)),
    "B12": ((0, 3), (1, 1)),
    "B13": ((0, 0), (1, 2)),
    "B14": ((0, 1), (1, 3)),
    "B15": ((1, 0), (0, 2)),
    "B16": ((1, 1), (0, 3)),
}


def _assemble(coefficients: Dict[str, float], layout, d1: int) -> np.ndarray:
    m = np.zeros((2 * d1, 2 * d1), dtype=complex)
    for label, ((a, b), (a2, b2)) in layout.items():
        m[a * d1 + b, a2 * d1 + b2] += coefficients[label]
    return m


def paper_matrix_qubit(mu: float, r: float) -> DensityMatrix:
    """Printed accelerated-qubit state assembled from its coefficient table."""
    coefficients = paper_coefficients_qubit(mu, r)
    return DensityMatrix(_assemble(coefficients.values, _QUBIT_LAYOUT, 3), (2, 3))


def paper_matrix_qutrit(mu: float, r: float) -> DensityMatrix:
    """Printed accelerated-qutrit state assembled from its coefficient table."""
    coefficients = paper_coefficients_qutrit(mu, r)
    return DensityMatrix(_assemble(coefficients.values, _QUTRIT_LAYOUT, 4), (2, 4))


def _element_label(row: int, col: int, d1: int) -> str:
    levels = QUTRIT_LEVELS[:d1]
    return f"|{row // d1}{levels[row % d1]}><{col // d1}{levels[col % d1]}|"


def discrepancy_report(mu: float, r: float, which: Subsystem) -> DiscrepancyReport:
    """Compare the derived accelerated state with the printed coefficient table."""
    which = Subsystem(which)
    derived_state = accelerate(one_param_state(mu), which, r)
    if which == Subsystem.QUBIT:
        printed_state = paper_matrix_qubit(mu, r)
    else:
        printed_state = paper_matrix_qutrit(mu, r)
    derived = np.real(derived_state.matrix)
    printed = np.real(printed_state.matrix)
    d1 = derived_state.dims[1]

    rows: List[DiscrepancyRow] = []
    nonzero = (np.abs(derived) > _NONZERO) | (np.abs(printed) > _NONZERO)
    for i, j in zip(*np.nonzero(nonzero)):
        rows.append(
            DiscrepancyRow(
                row=int(i),
                col=int(j),
                element=_element_label(int(i), int(j), d1),
                derived=float(derived[i, j]),
                printed=float(printed[i, j]),
                difference=float(abs(derived[i, j] - printed[i, j])),
            )
        )
    max_difference = max((row.difference for row in rows), default=0.0)
    derived_trace = float(np.trace(derived))
    printed_trace = float(np.trace(printed))
    report = DiscrepancyReport(
        accelerated=which,
        mu=float(mu),
        r=float(r),
        rows=rows,
        max_difference=max_difference,
        derived_trace=derived_trace,
        printed_trace=printed_trace,
        trace_gap=derived_trace - printed_trace,
        consistent=max_difference <= DISCREPANCY_TOL,
    )
    if not report.consistent:
        logger.info(
            "printed %s table differs from derived state at mu=%g r=%g (max %.3e, trace gap %.6f)",
            which.value,
            mu,
            r,
            max_difference,
            report.trace_gap,
        )
    return report
