"""Dense complex linear algebra for small bipartite operators.

Composite basis states |ab> map to row ``a * d2 + b`` (first factor slowest);
every module in the package relies on this ordering.
"""
import logging
import math
from typing import Sequence, Tuple

import numpy as np

from app.errors import ConvergenceError, DimensionMismatchError, NotHermitianError

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
OFF_DIAGONAL_TOL = 1e-13
MAX_SWEEPS = 100

DimList = Tuple[int, ...]


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite complex 2-D array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or Inf entries")
    return arr


def check_dims(m: np.ndarray, dims: Sequence[int]) -> DimList:
    """Validate a two-factor dimension list against a square matrix."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise DimensionMismatchError(f"expected exactly two factors, got dims {list(dims)}")
    if any(d < 1 for d in dims):
        raise DimensionMismatchError(f"factor dimensions must be >= 1, got {list(dims)}")
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"matrix is not square: {m.shape}")
    if dims[0] * dims[1] != m.shape[0]:
        raise DimensionMismatchError(
            f"dims {list(dims)} have product {dims[0] * dims[1]}, matrix side is {m.shape[0]}"
        )
    return dims


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry (i*rb + k, j*cb + l) is a[i, j] * b[k, l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dims: Sequence[int], traced_factor: int) -> np.ndarray:
    """Trace out factor 0 or 1 of a bipartite operator."""
    m = as_matrix(m)
    d0, d1 = check_dims(m, dims)
    tensor = m.reshape(d0, d1, d0, d1)
    if traced_factor == 1:
        return np.einsum("ijkj->ik", tensor)
    if traced_factor == 0:
        return np.einsum("ijil->jl", tensor)
    raise DimensionMismatchError(f"traced_factor must be 0 or 1, got {traced_factor}")


def partial_transpose(m, dims: Sequence[int], transposed_factor: int) -> np.ndarray:
    """Transpose one tensor factor: |a><a'| (x) |b><b'| -> |a'><a| (x) |b><b'| for factor 0."""
    m = as_matrix(m)
    d0, d1 = check_dims(m, dims)
    tensor = m.reshape(d0, d1, d0, d1)
    if transposed_factor == 0:
        permuted = tensor.transpose(2, 1, 0, 3)
    elif transposed_factor == 1:
        permuted = tensor.transpose(0, 3, 2, 1)
    else:
        raise DimensionMismatchError(f"transposed_factor must be 0 or 1, got {transposed_factor}")
    return permuted.reshape(d0 * d1, d0 * d1)


def hermiticity_deviation(m) -> float:
    """Largest entry of |m - m^dagger|."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"matrix is not square: {m.shape}")
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - dagger(m))))


def _require_hermitian(m: np.ndarray) -> None:
    deviation = hermiticity_deviation(m)
    if deviation > HERMITIAN_TOL:
        raise NotHermitianError(
            f"matrix deviates from its adjoint by {deviation:.3e} (tolerance {HERMITIAN_TOL:g})"
        )


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Apply one complex Jacobi rotation in place, annihilating a[p, q].

    The rotation is U = P J where P removes the phase of a[p, q] and J is the
    real symmetric Schur rotation of the resulting 2x2 block.
    """
    apq = a[p, q]
    magnitude = abs(apq)
    phase = apq / magnitude
    tau = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    back = np.conj(phase)

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * back * col_q
    a[:, q] = s * col_p + c * back * col_q

    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * phase * row_q
    a[q, :] = s * row_p + c * phase * row_q

    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vec_p = v[:, p].copy()
    vec_q = v[:, q].copy()
    v[:, p] = c * vec_p - s * back * vec_q
    v[:, q] = s * vec_p + c * back * vec_q


def hermitian_eigh(m) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi eigen-decomposition of a Hermitian matrix.

    Returns ascending eigenvalues and a unitary whose columns are the matching
    eigenvectors. Iterates until the off-diagonal Frobenius norm drops below
    ``1e-13 * (1 + ||m||_F)``; more than 100 sweeps raises ConvergenceError.
    """
    m = as_matrix(m)
    _require_hermitian(m)
    n = m.shape[0]
    a = 0.5 * (m + dagger(m))
    v = np.eye(n, dtype=complex)
    tolerance = OFF_DIAGONAL_TOL * (1.0 + float(np.linalg.norm(m)))
    # pairs below this are skipped; the off-diagonal norm then already meets tolerance
    skip_below = tolerance / max(n, 1)

    for sweep in range(MAX_SWEEPS + 1):
        if _off_diagonal_norm(a) <= tolerance:
            break
        if sweep == MAX_SWEEPS:
            raise ConvergenceError(f"Jacobi did not converge within {MAX_SWEEPS} sweeps (n={n})")
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > skip_below:
                    _rotate(a, v, p, q)

    values = np.real(np.diag(a)).copy()
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def hermitian_eigenvalues(m) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix with multiplicity, ascending."""
    values, _ = hermitian_eigh(m)
    return values


def trace_norm(m) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))
