# src/linalg/kernel.py

from enum import Enum
from typing import Tuple

import numpy as np

from .operators import (ComplexMatrix, MatrixLike, HermitianOperator, DensityMatrix,
                        as_complex_matrix)
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import DimensionError, NumericalError


class Side(Enum):
    A = "a"
    B = "b"


def _as_array(x: MatrixLike) -> np.ndarray:
    if isinstance(x, (HermitianOperator, DensityMatrix)):
        return x.matrix
    return np.asarray(x, dtype=np.complex128)


def _check_dims(dims: Tuple[int, int], total: int) -> Tuple[int, int]:
    if len(dims) != 2 or any(int(d) < 1 for d in dims):
        raise DimensionError(f"expected two positive subsystem dimensions, got {dims}")
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a * d_b != total:
        raise DimensionError(f"dims {d_a}x{d_b} do not factor dimension {total}")
    return d_a, d_b


def tensor_product(a: MatrixLike, b: MatrixLike, settings: Settings = DEFAULT_SETTINGS) -> ComplexMatrix:
    """
    Kronecker product a ⊗ b. Vectors (1-D) are accepted and give a vector.

    Raises:
        DimensionError: resulting dimension above settings.max_dim
    """
    left, right = _as_array(a), _as_array(b)
    rows = left.shape[0] * right.shape[0]
    if rows > settings.max_dim:
        raise DimensionError(f"tensor product dimension {rows} exceeds max_dim={settings.max_dim}")
    return np.kron(left, right)


def partial_trace(rho: DensityMatrix, dims: Tuple[int, int], keep: Side,
                  settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """
    Trace out one factor of a bipartite density matrix.

    Args:
        rho: Density matrix on a dA*dB dimensional space
        dims: (dA, dB)
        keep: Side whose reduced state is returned

    Returns:
        DensityMatrix: the reduced state of the kept side
    """
    d_a, d_b = _check_dims(dims, rho.dim)
    tensor = rho.matrix.reshape(d_a, d_b, d_a, d_b)
    if keep is Side.A:
        reduced = np.einsum('ijkj->ik', tensor)
    else:
        reduced = np.einsum('ijil->jl', tensor)
    return DensityMatrix.from_matrix(reduced, settings)


def partial_transpose(matrix: MatrixLike, dims: Tuple[int, int], side: Side = Side.B) -> ComplexMatrix:
    """Transpose the indices of one tensor factor"""
    array = _as_array(matrix)
    d_a, d_b = _check_dims(dims, array.shape[0])
    tensor = array.reshape(d_a, d_b, d_a, d_b)
    if side is Side.B:
        tensor = tensor.transpose(0, 3, 2, 1)
    else:
        tensor = tensor.transpose(2, 1, 0, 3)
    return tensor.reshape(d_a * d_b, d_a * d_b)


def commutator_norm(p: MatrixLike, q: MatrixLike) -> float:
    """||PQ - QP||_F"""
    left, right = _as_array(p), _as_array(q)
    if left.shape != right.shape:
        raise DimensionError(f"cannot commute {left.shape} with {right.shape}")
    return float(np.linalg.norm(left @ right - right @ left))


def eigen_hermitian(a: MatrixLike) -> Tuple[np.ndarray, ComplexMatrix]:
    """
    Eigendecomposition of a Hermitian operator.

    Returns:
        (eigenvalues sorted descending, eigenvectors as matching columns)

    Raises:
        NumericalError: the solver did not converge
    """
    matrix = as_complex_matrix(_as_array(a), square=True)
    try:
        values, vectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"eigendecomposition failed: {str(e)}")
    return values[::-1].copy(), vectors[:, ::-1].copy()


def frobenius_distance(a: MatrixLike, b: MatrixLike) -> float:
    return float(np.linalg.norm(_as_array(a) - _as_array(b)))


def projector_onto(vector) -> ComplexMatrix:
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())
