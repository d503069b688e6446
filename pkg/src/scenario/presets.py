# src/scenario/presets.py

from typing import Dict, Any, Tuple, Callable

import numpy as np

from ..linalg.operators import DensityMatrix, matrix_from_pairs, vector_from_pairs
from ..linalg.kernel import tensor_product
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import (SchemaError, ValidationError, InvalidStateError, NotHermitianError, DimensionError,
                            NumericalError)

SQRT_HALF = 1 / np.sqrt(2)

QUBIT_KETS = {
    "0": np.array([1, 0]),
    "1": np.array([0, 1]),
    "+": np.array([1, 1]) * SQRT_HALF,
    "-": np.array([1, -1]) * SQRT_HALF,
    "+i": np.array([1, 1j]) * SQRT_HALF,
    "-i": np.array([1, -1j]) * SQRT_HALF,
}

BELL_VECTORS = {
    "bell_phi_plus": np.array([1, 0, 0, 1]) * SQRT_HALF,
    "bell_phi_minus": np.array([1, 0, 0, -1]) * SQRT_HALF,
    "bell_psi_plus": np.array([0, 1, 1, 0]) * SQRT_HALF,
    "bell_psi_minus": np.array([0, 1, -1, 0]) * SQRT_HALF,
}


def _validated(matrix, field: str, settings: Settings) -> DensityMatrix:
    """Density matrix validation with the defect reported against the scenario field"""
    try:
        return DensityMatrix.from_matrix(matrix, settings)
    except (InvalidStateError, NotHermitianError) as e:
        raise ValidationError(e.message)
    except DimensionError as e:
        raise SchemaError(field, e.message)


def _pure(vector, field: str, settings: Settings) -> DensityMatrix:
    vector = np.asarray(vector, dtype=np.complex128)
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > settings.tol_num:
        raise ValidationError(f"norm_defect={abs(norm - 1.0):.12g}")
    return _validated(np.outer(vector, vector.conj()), field, settings)


def _require_keys(spec: Dict[str, Any], field: str, *keys: str):
    for key in keys:
        if key not in spec:
            raise SchemaError(field, f"missing '{key}'")


def _explicit(spec: Dict[str, Any], field: str, settings: Settings) -> DensityMatrix:
    """`matrix` or `vector` entries as [re, im] pairs"""
    try:
        if "matrix" in spec:
            return _validated(matrix_from_pairs(spec["matrix"]), field, settings)
        return _pure(vector_from_pairs(spec["vector"]), field, settings)
    except (TypeError, ValueError, DimensionError, NumericalError) as e:
        raise SchemaError(field, f"entries must be [re, im] pairs ({e})")


def single_state(spec: Dict[str, Any], d: int, field: str = "state",
                 settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """
    State of one system of dimension d.

    Presets: ket (qubit '0', '1', '+', '-', '+i', '-i'), maximally_mixed, die;
    or an explicit `matrix` / `vector`.
    """
    if not isinstance(spec, dict):
        raise SchemaError(field, "state must be an object")
    if "matrix" in spec or "vector" in spec:
        rho = _explicit(spec, field, settings)
    else:
        _require_keys(spec, field, "preset")
        preset = spec["preset"]
        if preset == "ket":
            _require_keys(spec, field, "value")
            if d != 2:
                raise SchemaError(field, "preset 'ket' is a qubit state, dimension must be 2")
            if spec["value"] not in QUBIT_KETS:
                raise SchemaError(f"{field}.value", f"unknown ket '{spec['value']}'")
            rho = _pure(QUBIT_KETS[spec["value"]], field, settings)
        elif preset in ("maximally_mixed", "die"):
            rho = _validated(np.eye(d) / d, field, settings)
        else:
            raise SchemaError(f"{field}.preset", f"unknown single-system preset '{preset}'")
    if rho.dim != d:
        raise SchemaError(field, f"state has dimension {rho.dim}, expected {d}")
    return rho


def bell_state(name: str, settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    return DensityMatrix.from_vector(BELL_VECTORS[name], settings)


def werner_state(visibility: float, settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """v |psi-><psi-| + (1 - v) I/4"""
    singlet = BELL_VECTORS["bell_psi_minus"]
    matrix = visibility * np.outer(singlet, singlet.conj()) + (1 - visibility) * np.eye(4) / 4
    return DensityMatrix.from_matrix(matrix, settings)


def fair_dice(d: int, settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """Two independent fair dice: I/d ⊗ I/d"""
    return DensityMatrix.from_matrix(np.eye(d * d) / (d * d), settings)


def glued_dice(d: int, settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """Two dice glued face to face: (1/d) sum_i |ii><ii|"""
    matrix = np.zeros((d * d, d * d))
    for i in range(d):
        matrix[i * d + i, i * d + i] = 1.0 / d
    return DensityMatrix.from_matrix(matrix, settings)


def random_pure(dims: Tuple[int, int], seed: int, settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """Haar-random pure state drawn from a seeded generator"""
    rng = np.random.default_rng(seed)
    size = dims[0] * dims[1]
    vector = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return DensityMatrix.from_vector(vector / np.linalg.norm(vector), settings)


def _bell(spec, dims, field, settings):
    if tuple(dims) != (2, 2):
        raise SchemaError("dims", f"preset '{spec['preset']}' needs dims [2, 2]")
    return bell_state(spec["preset"], settings)


def _werner(spec, dims, field, settings):
    if tuple(dims) != (2, 2):
        raise SchemaError("dims", "preset 'werner' needs dims [2, 2]")
    _require_keys(spec, field, "visibility")
    visibility = spec["visibility"]
    if isinstance(visibility, bool) or not isinstance(visibility, (int, float)) or not 0 <= visibility <= 1:
        raise SchemaError(f"{field}.visibility", "must be a number in [0, 1]")
    return werner_state(float(visibility), settings)


def _dice(spec, dims, field, settings):
    if dims[0] != dims[1]:
        raise SchemaError("dims", f"preset '{spec['preset']}' needs two dice with the same number of faces")
    build = fair_dice if spec["preset"] == "fair_dice" else glued_dice
    return build(dims[0], settings)


def _product(spec, dims, field, settings):
    _require_keys(spec, field, "a", "b")
    rho_a = single_state(spec["a"], dims[0], f"{field}.a", settings)
    rho_b = single_state(spec["b"], dims[1], f"{field}.b", settings)
    return _validated(tensor_product(rho_a, rho_b, settings), field, settings)


def _copies(spec, dims, field, settings):
    _require_keys(spec, field, "of")
    if dims[0] != dims[1]:
        raise SchemaError("dims", "preset 'copies' needs equal subsystem dimensions")
    rho = single_state(spec["of"], dims[0], f"{field}.of", settings)
    return _validated(tensor_product(rho, rho, settings), field, settings)


def _random_pure(spec, dims, field, settings):
    _require_keys(spec, field, "seed")
    seed = spec["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise SchemaError(f"{field}.seed", "must be a non-negative integer")
    return random_pure(dims, seed, settings)


BIPARTITE_PRESETS: Dict[str, Callable] = {
    "bell_phi_plus": _bell,
    "bell_phi_minus": _bell,
    "bell_psi_plus": _bell,
    "bell_psi_minus": _bell,
    "werner": _werner,
    "fair_dice": _dice,
    "glued_dice": _dice,
    "product": _product,
    "copies": _copies,
    "random_pure": _random_pure,
}


def joint_state(spec: Dict[str, Any], dims: Tuple[int, int], field: str = "state",
                settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """
    State of a bipartite system with subsystem dimensions dims.

    Raises:
        SchemaError: unknown preset, missing parameter or malformed entries
        ValidationError: the state is not a density matrix (defect reported)
    """
    if not isinstance(spec, dict):
        raise SchemaError(field, "state must be an object")
    if "matrix" in spec or "vector" in spec:
        rho = _explicit(spec, field, settings)
    else:
        _require_keys(spec, field, "preset")
        preset = spec["preset"]
        if preset not in BIPARTITE_PRESETS:
            raise SchemaError(f"{field}.preset", f"unknown preset '{preset}'")
        rho = BIPARTITE_PRESETS[preset](spec, dims, field, settings)
    if rho.dim != dims[0] * dims[1]:
        raise SchemaError(field, f"state has dimension {rho.dim}, dims {list(dims)} need {dims[0] * dims[1]}")
    return rho
