# src/relations/baselines.py

from typing import NamedTuple, Tuple

import numpy as np

from ..linalg.operators import DensityMatrix
from ..linalg.kernel import partial_transpose, Side
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import DimensionError, InvalidStateError

# PPT is necessary and sufficient for separability up to this total dimension (2x2, 2x3)
PPT_CONCLUSIVE_DIM = 6
PPT_MAX_DIM = 36


class PPTResult(NamedTuple):
    separable: bool
    conclusive: bool
    min_eigenvalue: float


def schmidt_rank(psi, dims: Tuple[int, int], settings: Settings = DEFAULT_SETTINGS) -> int:
    """
    Number of Schmidt coefficients above tol_schmidt of a pure bipartite state.

    Raises:
        InvalidStateError: the vector is not normalised or does not match dims
    """
    vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
    d_a, d_b = dims
    if vector.size != d_a * d_b:
        raise InvalidStateError(f"state of length {vector.size} does not match dims {tuple(dims)}")
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > settings.tol_num:
        raise InvalidStateError(f"state vector norm={norm:.12g}")
    singular_values = np.linalg.svd(vector.reshape(d_a, d_b), compute_uv=False)
    return int(np.sum(singular_values > settings.tol_schmidt))


def ppt_separable(rho: DensityMatrix, dims: Tuple[int, int], settings: Settings = DEFAULT_SETTINGS) -> PPTResult:
    """
    Peres-Horodecki test: the partial transpose has no eigenvalue below -tol_psd.
    Conclusive for total dimension <= 6.
    """
    d_a, d_b = dims
    total = d_a * d_b
    if total > PPT_MAX_DIM:
        raise DimensionError(f"PPT baseline is limited to dA*dB <= {PPT_MAX_DIM}, got {total}")
    transposed = partial_transpose(rho.matrix, dims, Side.B)
    min_eigenvalue = float(np.linalg.eigvalsh((transposed + transposed.conj().T) / 2)[0])
    return PPTResult(separable=min_eigenvalue >= -settings.tol_psd,
                     conclusive=total <= PPT_CONCLUSIVE_DIM,
                     min_eigenvalue=min_eigenvalue)
