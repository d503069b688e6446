# src/linalg/operators.py

from dataclasses import dataclass
from typing import Sequence, List, Union

import numpy as np

from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import DimensionError, NumericalError, NotHermitianError, InvalidStateError

# Dense complex matrix, complex128, read-only once wrapped in an operator
ComplexMatrix = np.ndarray

MatrixLike = Union[np.ndarray, 'HermitianOperator', 'DensityMatrix']


def as_complex_matrix(data, square: bool = False) -> ComplexMatrix:
    """
    Coerce input into a finite 2-D complex128 array.

    Raises:
        DimensionError: not 2-D, empty, or (when square=True) not square
        NumericalError: NaN or Inf entries
    """
    if isinstance(data, (HermitianOperator, DensityMatrix)):
        return data.matrix
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.size == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if square and matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NumericalError("matrix has non-finite entries")
    return matrix


def frozen(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def matrix_from_pairs(rows: Sequence[Sequence[Sequence[float]]]) -> ComplexMatrix:
    """Parse [[ [re, im], ... ], ...] into a complex matrix"""
    array = np.asarray(rows, dtype=np.float64)
    if array.ndim != 3 or array.shape[-1] != 2:
        raise DimensionError(f"expected rows of [re, im] pairs, got shape {array.shape}")
    return as_complex_matrix(array[..., 0] + 1j * array[..., 1])


def vector_from_pairs(entries: Sequence[Sequence[float]]) -> np.ndarray:
    array = np.asarray(entries, dtype=np.float64)
    if array.ndim != 2 or array.shape[-1] != 2 or array.shape[0] == 0:
        raise DimensionError(f"expected a list of [re, im] pairs, got shape {array.shape}")
    vector = array[:, 0] + 1j * array[:, 1]
    if not np.all(np.isfinite(vector)):
        raise NumericalError("vector has non-finite entries")
    return vector


def matrix_to_pairs(matrix: ComplexMatrix) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Square Hermitian matrix with the defect ||A - A^dagger||_F measured at construction"""
    matrix: ComplexMatrix
    hermiticity_defect: float

    @classmethod
    def from_matrix(cls, data, settings: Settings = DEFAULT_SETTINGS) -> 'HermitianOperator':
        if isinstance(data, HermitianOperator):
            return data
        matrix = as_complex_matrix(data, square=True)
        defect = float(np.linalg.norm(matrix - matrix.conj().T))
        if defect > settings.tol_herm:
            raise NotHermitianError(defect)
        # symmetrise so downstream eigensolvers see an exactly Hermitian matrix
        return cls(matrix=frozen((matrix + matrix.conj().T) / 2), hermiticity_defect=defect)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    operator: HermitianOperator
    trace_defect: float
    min_eigenvalue: float

    @classmethod
    def from_matrix(cls, data, settings: Settings = DEFAULT_SETTINGS) -> 'DensityMatrix':
        """
        Validate a matrix as a density matrix.

        Raises:
            NotHermitianError, InvalidStateError (message names the defect, e.g. 'trace_defect=0.1')
        """
        if isinstance(data, DensityMatrix):
            return data
        operator = HermitianOperator.from_matrix(data, settings)
        trace_defect = float(abs(np.trace(operator.matrix).real - 1.0))
        if trace_defect > settings.tol_trace:
            raise InvalidStateError(f"trace_defect={trace_defect:.12g}")
        min_eigenvalue = float(np.linalg.eigvalsh(operator.matrix)[0])
        if min_eigenvalue < -settings.tol_psd:
            raise InvalidStateError(f"min_eigenvalue={min_eigenvalue:.12g}")
        return cls(operator=operator, trace_defect=trace_defect, min_eigenvalue=min_eigenvalue)

    @classmethod
    def from_vector(cls, psi, settings: Settings = DEFAULT_SETTINGS) -> 'DensityMatrix':
        vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vector)
        if abs(norm - 1.0) > settings.tol_num:
            raise InvalidStateError(f"state vector norm={norm:.12g}")
        return cls.from_matrix(np.outer(vector, vector.conj()), settings)

    @property
    def matrix(self) -> ComplexMatrix:
        return self.operator.matrix

    @property
    def dim(self) -> int:
        return self.operator.dim

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def is_pure(rho: DensityMatrix, settings: Settings = DEFAULT_SETTINGS) -> bool:
    return rho.purity >= 1.0 - settings.tol_pure
