"""Local diagonal filters on either subsystem.

Two modes are supported. ``postselect`` keeps a single filter operator and
renormalizes by its success probability, which can raise entanglement.
``channel`` applies the full two-operator Kraus set on the qutrit, a local
trace-preserving channel that cannot. On a 4-level accelerated qutrit the
first operator either annihilates the pair level P (``discard``, post-selection
only) or passes it through (``keep``, the only choice for a channel).
"""
import logging
import math
from typing import Optional

import numpy as np

from app.errors import DimensionMismatchError, FilteredToZeroError, ParameterRangeError
from app.models.models import FilterMode, FilterSpec, PairPolicy, Subsystem, default_pair_policy
from app.models.quantum import DensityMatrix, KrausSet
from app.services.numerics import dagger

logger = logging.getLogger(__name__)

SUCCESS_TOL = 1e-12


def _check_strength(value: float, name: str, strict: bool) -> float:
    value = float(value)
    inside = 0.0 < value < 1.0 if strict else 0.0 <= value <= 1.0
    if not inside:
        bounds = "(0, 1)" if strict else "[0, 1]"
        raise ParameterRangeError(f"{name} out of range {bounds}: {value:g}")
    return value


def qubit_filter(kappa: float, strict: bool = True) -> KrausSet:
    """F_b = sqrt(kappa)|0><0| + sqrt(1 - kappa)|1><1|, always post-selected.

    ``strict=False`` admits the analytic endpoints 0 and 1.
    """
    kappa = _check_strength(kappa, "kappa", strict)
    op = np.diag([math.sqrt(kappa), math.sqrt(1 - kappa)]).astype(complex)
    return KrausSet((op,), mode=FilterMode.POSTSELECT)


def qutrit_filter(
    q: float,
    mode: FilterMode = FilterMode.POSTSELECT,
    pair_policy: Optional[PairPolicy] = None,
    factor_dim: int = 3,
    strict: bool = True,
) -> KrausSet:
    """Qutrit filter operators on levels (0, 1, 2), optionally padded with P.

    F1 = |0><0| + sqrt(1-Q)|1><1| + sqrt(Q)|2><2|
    F2 = sqrt(Q)|1><1| + sqrt(1-Q)|2><2|
    """
    q = _check_strength(q, "Q", strict)
    mode = FilterMode(mode)
    pair_policy = default_pair_policy(mode) if pair_policy is None else PairPolicy(pair_policy)
    if factor_dim not in (3, 4):
        raise DimensionMismatchError(f"qutrit filter acts on 3 or 4 levels, got {factor_dim}")
    if factor_dim == 4 and mode == FilterMode.CHANNEL and pair_policy == PairPolicy.DISCARD:
        raise ParameterRangeError("pair=discard is post-selection only; a channel keeps P")
    first = [1.0, math.sqrt(1 - q), math.sqrt(q)]
    second = [0.0, math.sqrt(q), math.sqrt(1 - q)]
    if factor_dim == 4:
        first.append(1.0 if pair_policy == PairPolicy.KEEP else 0.0)
        second.append(0.0)
    operators = [np.diag(first).astype(complex)]
    if mode == FilterMode.CHANNEL:
        operators.append(np.diag(second).astype(complex))
    return KrausSet(tuple(operators), mode=mode)


def _lift(op: np.ndarray, dims, factor: int) -> np.ndarray:
    d0, d1 = dims
    return np.kron(op, np.eye(d1)) if factor == 0 else np.kron(np.eye(d0), op)


def kraus_for(spec: FilterSpec, factor_dim: int) -> KrausSet:
    if spec.target == Subsystem.QUBIT:
        return qubit_filter(spec.strength)
    return qutrit_filter(spec.strength, spec.mode, spec.pair_policy, factor_dim)


def apply_kraus(rho: DensityMatrix, kraus: KrausSet, factor: int) -> DensityMatrix:
    """rho' = sum_j G_j rho G_j^dagger / N with G_j = F_j on ``factor``.

    Raises FilteredToZeroError when N <= 1e-12.
    """
    d0, d1 = rho.dims
    if kraus.dim != rho.dims[factor]:
        raise DimensionMismatchError(
            f"filter on {kraus.dim} levels cannot act on factor {factor} of dims {[d0, d1]}"
        )
    total = np.zeros_like(rho.matrix)
    for op in kraus.operators:
        g = _lift(op, rho.dims, factor)
        total = total + g @ rho.matrix @ dagger(g)
    probability = float(np.real(np.trace(total)))
    if probability <= SUCCESS_TOL:
        logger.warning("filter post-selection failed (success probability %.3e)", probability)
        raise FilteredToZeroError(probability)
    return DensityMatrix(total / probability, rho.dims)


def success_probability(rho: DensityMatrix, spec: FilterSpec) -> float:
    """Trace of the filtered state before renormalization."""
    factor = 0 if spec.target == Subsystem.QUBIT else 1
    probability = 0.0
    for op in kraus_for(spec, rho.dims[factor]).operators:
        g = _lift(op, rho.dims, factor)
        probability += float(np.real(np.trace(g @ rho.matrix @ dagger(g))))
    return probability


def apply_filter(rho: DensityMatrix, spec: FilterSpec) -> DensityMatrix:
    """Filter the subsystem named by ``spec`` and renormalize."""
    factor = 0 if spec.target == Subsystem.QUBIT else 1
    return apply_kraus(rho, kraus_for(spec, rho.dims[factor]), factor)
