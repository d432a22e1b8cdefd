"""Immutable numeric value types shared by the simulation services."""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from app.errors import DimensionMismatchError, InvalidKrausSetError
from app.models.models import FilterMode
from app.services.numerics import DimList, as_matrix, check_dims


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A bipartite operator with its tensor-factor dimensions.

    Construction only checks shape; physical validity (Hermitian, unit trace,
    positive) is reported by ``states.validate_density``.
    """

    matrix: np.ndarray
    dims: DimList

    def __post_init__(self):
        matrix = as_matrix(self.matrix)
        dims = check_dims(matrix, self.dims)
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "dims", dims)

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def allclose(self, other: "DensityMatrix", atol: float = 1e-12) -> bool:
        return self.dims == other.dims and bool(
            np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class Isometry:
    """Tall matrix embedding one Minkowski mode into region I (x) region II."""

    matrix: np.ndarray
    in_dim: int
    out_dims: DimList

    def __post_init__(self):
        matrix = as_matrix(self.matrix)
        out_dims = tuple(int(d) for d in self.out_dims)
        if matrix.shape != (out_dims[0] * out_dims[1], self.in_dim):
            raise DimensionMismatchError(
                f"isometry shape {matrix.shape} does not match in_dim={self.in_dim}, "
                f"out_dims={list(out_dims)}"
            )
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "out_dims", out_dims)

    def gram(self) -> np.ndarray:
        """V^dagger V, the identity for a genuine isometry."""
        return np.conj(self.matrix).T @ self.matrix


KRAUS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Operators acting on one tensor factor.

    A ``channel`` set must be complete (sum of F^dagger F equal to the
    identity). A ``postselect`` set is a single contraction.
    """

    operators: Tuple[np.ndarray, ...]
    mode: FilterMode = FilterMode.POSTSELECT
    dim: int = field(init=False)

    def __post_init__(self):
        operators = tuple(_frozen(as_matrix(op)) for op in self.operators)
        if not operators:
            raise DimensionMismatchError("a Kraus set needs at least one operator")
        dim = operators[0].shape[0]
        for op in operators:
            if op.shape != (dim, dim):
                raise DimensionMismatchError(f"Kraus operator shape {op.shape} != ({dim}, {dim})")
        mode = FilterMode(self.mode)
        object.__setattr__(self, "operators", operators)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "dim", dim)
        if mode == FilterMode.CHANNEL:
            deviation = float(np.max(np.abs(self.completeness() - np.eye(dim))))
            if deviation > KRAUS_TOL:
                raise InvalidKrausSetError(
                    f"channel operators are not trace-preserving (|sum F^dagger F - I| = "
                    f"{deviation:.3e})"
                )
        else:
            if len(operators) != 1:
                raise InvalidKrausSetError(
                    f"post-selection takes a single operator, got {len(operators)}"
                )
            norm = float(np.linalg.norm(operators[0], 2))
            if norm > 1.0 + KRAUS_TOL:
                raise InvalidKrausSetError(f"post-selection operator has norm {norm:.6g} > 1")

    def completeness(self) -> np.ndarray:
        """Sum of F^dagger F over the set."""
        return sum(np.conj(op).T @ op for op in self.operators)
