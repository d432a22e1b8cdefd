"""Negativity of bipartite states."""
import logging

from app.errors import DimensionMismatchError
from app.models.quantum import DensityMatrix
from app.services.numerics import partial_transpose, trace_norm

logger = logging.getLogger(__name__)

CLAMP_TOL = 1e-12


def negativity(rho: DensityMatrix) -> float:
    """(||rho^T||_1 - 1) / (d1 - 1), transposing the larger factor.

    d1 is the smaller factor dimension. Round-off results within 1e-12 below
    zero are clamped to 0.
    """
    d0, d1 = rho.dims
    smaller = min(d0, d1)
    if smaller < 2:
        raise DimensionMismatchError(f"negativity needs both factors >= 2, got dims {[d0, d1]}")
    larger_factor = 0 if d0 > d1 else 1
    transposed = partial_transpose(rho.matrix, rho.dims, larger_factor)
    value = (trace_norm(transposed) - 1.0) / (smaller - 1)
    if -CLAMP_TOL < value < 0.0:
        value = 0.0
    return value
