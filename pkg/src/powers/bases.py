# src/powers/bases.py

from dataclasses import dataclass
from typing import List, Tuple, Optional

import numpy as np

from ..utils.errors import SchemaError, DimensionError, InvalidStateError


@dataclass(frozen=True, eq=False)
class Basis:
    """Orthonormal basis; vectors are the columns of `vectors`"""
    name: str
    vectors: np.ndarray
    labels: Tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.vectors.shape[1]

    def vector(self, k: int) -> np.ndarray:
        return self.vectors[:, k]


def make_basis(name: str, columns, labels: Optional[List[str]] = None) -> Basis:
    vectors = np.array(columns, dtype=np.complex128)
    if vectors.ndim != 2:
        raise DimensionError(f"basis '{name}' must be a matrix of column vectors")
    if labels is None:
        labels = [f"{name}{k}" for k in range(vectors.shape[1])]
    vectors.setflags(write=False)
    return Basis(name=name, vectors=vectors, labels=tuple(labels))


def computational(d: int, name: str = "z") -> Basis:
    return make_basis(name, np.eye(d))


def fourier(d: int, name: str = "x") -> Basis:
    omega = np.exp(2j * np.pi / d)
    n = np.arange(d)
    columns = omega ** np.outer(n, n) / np.sqrt(d)
    labels = ["x+", "x-"] if d == 2 and name == "x" else None
    return make_basis(name, columns, labels)


def qubit_y(name: str = "y") -> Basis:
    columns = np.array([[1, 1], [1j, -1j]]) / np.sqrt(2)
    return make_basis(name, columns, ["y+", "y-"])


def _is_prime(d: int) -> bool:
    return d >= 2 and all(d % k for k in range(2, int(np.sqrt(d)) + 1))


def mutually_unbiased_bases(d: int) -> List[Basis]:
    """
    Complete set of d+1 mutually unbiased bases for prime d.
    Odd d uses the quadratic-phase construction, d=2 the Pauli eigenbases.
    """
    if not _is_prime(d):
        raise DimensionError(f"mutually unbiased bases are only built for prime d, got {d}")
    if d == 2:
        return [computational(2), fourier(2), qubit_y()]
    omega = np.exp(2j * np.pi / d)
    n = np.arange(d)
    bases = [computational(d)]
    for k in range(d):
        columns = np.array([[omega ** ((k * m * m + j * m) % d) for j in range(d)] for m in n]) / np.sqrt(d)
        bases.append(make_basis(f"mub{k}", columns, [f"mub{k}.{j}" for j in range(d)]))
    return bases


# Each row is one of the nine orthogonal quadruples; every vector appears in exactly two rows.
_CABELLO_CONTEXTS = [
    [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)],
    [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)],
    [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)],
    [(1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)],
    [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)],
    [(1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)],
    [(1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)],
    [(1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)],
    [(1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)],
]


def cabello_18() -> List[Basis]:
    """The 18-vector Kochen-Specker set in d=4 as its nine orthonormal bases"""
    bases = []
    for k, quadruple in enumerate(_CABELLO_CONTEXTS):
        columns = np.array([np.array(v, dtype=float) / np.linalg.norm(v) for v in quadruple]).T
        labels = ["(" + ",".join(f"{c:+d}" for c in v) + ")" for v in quadruple]
        bases.append(make_basis(f"c{k}", columns, labels))
    return bases


def product_basis(first: Basis, second: Basis) -> Basis:
    columns = np.kron(first.vectors, second.vectors)
    labels = [f"{a}{b}" for a in first.labels for b in second.labels]
    return make_basis(f"{first.name}{second.name}", columns, labels)


def schmidt_bases(psi, dims: Tuple[int, int]) -> Tuple[Basis, Basis]:
    """
    Local bases in which a pure bipartite state is diagonal:
    psi = sum_k s_k |u_k>|v_k>, returned as (basis of u_k, basis of v_k).
    Only square splits (dA == dB) are supported, so both bases are complete.
    """
    d_a, d_b = dims
    if d_a != d_b:
        raise DimensionError("schmidt bases need equal subsystem dimensions")
    vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if vector.size != d_a * d_b:
        raise InvalidStateError(f"state of length {vector.size} does not match dims {dims}")
    u, _, vh = np.linalg.svd(vector.reshape(d_a, d_b))
    return (make_basis("schmidt", u, [f"schmidt{k}" for k in range(d_a)]),
            make_basis("schmidt", vh.T, [f"schmidt{k}" for k in range(d_b)]))


def named_bases(name: str, d: int) -> List[Basis]:
    """
    Resolve a basis name used in scenario files to one or more bases of dimension d.

    Raises:
        SchemaError: unknown name or a name that does not exist in dimension d
    """
    if name in ("z", "face"):
        return [computational(d, name)]
    if name == "x":
        return [fourier(d)]
    if name == "y":
        if d != 2:
            raise SchemaError("bases", "basis 'y' is only defined for d=2")
        return [qubit_y()]
    if name == "mub":
        try:
            return mutually_unbiased_bases(d)
        except DimensionError as e:
            raise SchemaError("bases", str(e))
    if name == "cabello18":
        if d != 4:
            raise SchemaError("bases", "basis set 'cabello18' needs d=4")
        return cabello_18()
    raise SchemaError("bases", f"unknown basis name '{name}'")
