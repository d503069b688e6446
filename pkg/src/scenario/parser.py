# src/scenario/parser.py

import copy
import json
import os
from dataclasses import dataclass, field
from typing import Dict, Any, List, Optional, Tuple, Union

import numpy as np

from .presets import joint_state, single_state
from ..linalg.operators import DensityMatrix, vector_from_pairs, is_pure
from ..linalg.kernel import eigen_hermitian, projector_onto
from ..powers.bases import Basis, make_basis, named_bases, schmidt_bases
from ..powers.graph import generate_graph_from_bases, context_for_basis, check_basis
from ..powers.models import PowerGraph, Context
from ..relations.models import JointScenario, ContextPair, RelationMode, IntensiveMatching
from ..utils.config_loader import Settings, DEFAULT_SETTINGS, ConfigError
from ..utils.errors import SchemaError, ValidationError, DimensionError, NumericalError
from ..utils.logger import get_logger

logger = get_logger("scenario")

SUPPORTED_SCHEMA_VERSIONS = ("1",)

MODES = {
    "designated": RelationMode.DESIGNATED_PAIRS,
    "all_matched": RelationMode.ALL_MATCHED_CONTEXTS,
    "all-matched": RelationMode.ALL_MATCHED_CONTEXTS,
}

TOP_LEVEL_FIELDS = {"schema_version", "name", "dims", "state", "bases", "bases_a", "bases_b",
                    "context_pairs", "mode", "intensive_matching", "tolerances", "sampling"}

Matching = Union[str, List[int]]


@dataclass(frozen=True)
class PairSpec:
    """One designated context pair, by basis name, with the matching in basis-vector order"""
    a: str
    b: str
    matching: Tuple[int, ...]


@dataclass(eq=False)
class ScenarioSpec:
    schema_version: str
    name: str
    dims: Tuple[int, ...]
    state: Optional[DensityMatrix]
    bases_a: List[Basis]
    bases_b: List[Basis]
    context_pairs: List[PairSpec]
    mode: RelationMode
    intensive_matching: IntensiveMatching
    tolerances: Dict[str, Any]
    sampling: Optional[Dict[str, int]]
    settings: Settings
    source: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_bipartite(self) -> bool:
        return len(self.dims) == 2

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def to_dict(self) -> Dict[str, Any]:
        """Normalised scenario; parsing it again yields an equivalent spec"""
        return copy.deepcopy(self.source)


def parse_scenario(path: str, settings: Settings = DEFAULT_SETTINGS,
                   overrides: Optional[Dict[str, Any]] = None) -> ScenarioSpec:
    """
    Read and validate a scenario file.

    Args:
        path: UTF-8 JSON scenario file
        settings: Base settings (config file and environment already applied)
        overrides: Command-line tolerance overrides, applied after the scenario's own block

    Raises:
        SchemaError: unreadable file, invalid JSON (with line and column) or a malformed field
        ValidationError: the state is not a density matrix
    """
    if not os.path.exists(path):
        raise SchemaError("file", f"scenario file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except UnicodeDecodeError:
        raise SchemaError("file", f"{path} is not UTF-8")
    except json.JSONDecodeError as e:
        raise SchemaError("json", f"line {e.lineno} column {e.colno}: {e.msg}")
    logger.debug(f"Parsing scenario file {path}")
    return parse_scenario_data(data, settings, overrides, default_name=os.path.splitext(os.path.basename(path))[0])


def _positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SchemaError(name, f"must be a positive integer, got {value!r}")
    return value


def _parse_dims(raw) -> Tuple[int, ...]:
    if isinstance(raw, list):
        if len(raw) not in (1, 2):
            raise SchemaError("dims", "expected a single dimension or [dA, dB]")
        return tuple(_positive_int(d, "dims") for d in raw)
    return (_positive_int(raw, "dims"),)


def _parse_settings(raw, settings: Settings, overrides: Optional[Dict[str, Any]]) -> Settings:
    if not isinstance(raw, dict):
        raise SchemaError("tolerances", "must be an object")
    try:
        return settings.with_overrides(raw).with_overrides(overrides or {})
    except ConfigError as e:
        raise SchemaError("tolerances", str(e).strip())


def _explicit_basis(raw: Dict[str, Any], field_name: str, d: int, index: int, settings: Settings) -> Basis:
    if "name" not in raw or "vectors" not in raw:
        raise SchemaError(field_name, "explicit basis needs 'name' and 'vectors'")
    try:
        columns = np.array([vector_from_pairs(v) for v in raw["vectors"]]).T
    except (TypeError, ValueError, DimensionError, NumericalError) as e:
        raise SchemaError(field_name, f"vectors must be lists of [re, im] pairs ({e})")
    if columns.ndim != 2 or columns.shape != (d, d):
        raise SchemaError(field_name, f"basis '{raw['name']}' must hold {d} vectors of length {d}")
    check_basis(columns, index, settings)
    labels = raw.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != d):
        raise SchemaError(field_name, f"labels must be a list of {d} strings")
    return make_basis(str(raw["name"]), columns, labels)


def _parse_bases(raw, field_name: str, d: int, schmidt: Optional[Basis], settings: Settings) -> List[Basis]:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(field_name, "must be a non-empty list of basis names or explicit bases")
    bases: List[Basis] = []
    for index, entry in enumerate(raw):
        if entry == "schmidt":
            if schmidt is None:
                raise SchemaError(field_name, "basis 'schmidt' needs a pure bipartite state with dA == dB")
            bases.append(schmidt)
        elif isinstance(entry, str):
            bases.extend(named_bases(entry, d))
        elif isinstance(entry, dict):
            bases.append(_explicit_basis(entry, f"{field_name}[{index}]", d, index, settings))
        else:
            raise SchemaError(f"{field_name}[{index}]", "expected a basis name or an object")
    names = [b.name for b in bases]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise SchemaError(field_name, f"duplicate basis names {duplicates}")
    return bases


def _schmidt_pair(state: Optional[DensityMatrix], dims: Tuple[int, ...],
                  settings: Settings) -> Tuple[Optional[Basis], Optional[Basis]]:
    if state is None or len(dims) != 2 or dims[0] != dims[1] or not is_pure(state, settings):
        return None, None
    _, vectors = eigen_hermitian(state.operator)
    return schmidt_bases(vectors[:, 0], dims)


def _resolve_matching(raw: Matching, n_a: int, n_b: int, field_name: str) -> Tuple[int, ...]:
    if raw == "identity":
        return tuple(k % n_b for k in range(n_a))
    if raw == "reversed":
        return tuple((n_b - 1 - k) % n_b for k in range(n_a))
    if isinstance(raw, list) and all(isinstance(k, int) and not isinstance(k, bool) for k in raw):
        if len(raw) != n_a or any(not 0 <= k < n_b for k in raw):
            raise SchemaError(field_name, f"matching must list {n_a} positions in 0..{n_b - 1}")
        if n_a == n_b and sorted(raw) != list(range(n_b)):
            raise SchemaError(field_name, "matching must be a permutation")
        return tuple(raw)
    raise SchemaError(field_name, "matching must be 'identity', 'reversed' or a list of positions")


def _parse_pairs(raw, bases_a: List[Basis], bases_b: List[Basis]) -> Tuple[List[PairSpec], List[Dict[str, Any]]]:
    if not isinstance(raw, list):
        raise SchemaError("context_pairs", "must be a list")
    by_name_a = {b.name: b for b in bases_a}
    by_name_b = {b.name: b for b in bases_b}
    pairs, normalised = [], []
    for index, entry in enumerate(raw):
        field_name = f"context_pairs[{index}]"
        if not isinstance(entry, dict) or "a" not in entry or "b" not in entry:
            raise SchemaError(field_name, "expected an object with 'a', 'b' and optional 'matching'")
        if entry["a"] not in by_name_a:
            raise SchemaError(f"{field_name}.a", f"no basis named '{entry['a']}' on side a")
        if entry["b"] not in by_name_b:
            raise SchemaError(f"{field_name}.b", f"no basis named '{entry['b']}' on side b")
        raw_matching = entry.get("matching", "identity")
        matching = _resolve_matching(raw_matching, len(by_name_a[entry["a"]]), len(by_name_b[entry["b"]]),
                                     f"{field_name}.matching")
        pairs.append(PairSpec(a=entry["a"], b=entry["b"], matching=matching))
        normalised.append({"a": entry["a"], "b": entry["b"], "matching": raw_matching})
    return pairs, normalised


def _parse_sampling(raw) -> Optional[Dict[str, int]]:
    if raw is None:
        return None
    if not isinstance(raw, dict) or "shots" not in raw or "seed" not in raw:
        raise SchemaError("sampling", "expected an object with 'shots' and 'seed'")
    seed = raw["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        raise SchemaError("sampling.seed", "must be an unsigned 64-bit integer")
    return {"shots": _positive_int(raw["shots"], "sampling.shots"), "seed": seed}


def parse_scenario_data(data: Any, settings: Settings = DEFAULT_SETTINGS,
                        overrides: Optional[Dict[str, Any]] = None,
                        default_name: str = "scenario") -> ScenarioSpec:
    """Validate an already decoded scenario object (see parse_scenario)"""
    if not isinstance(data, dict):
        raise SchemaError("scenario", "top level must be an object")
    unknown = sorted(set(data) - TOP_LEVEL_FIELDS)
    if unknown:
        raise SchemaError(unknown[0], "unknown field")

    version = data.get("schema_version")
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise SchemaError("schema_version", f"unsupported schema version {version!r}, "
                                            f"expected one of {list(SUPPORTED_SCHEMA_VERSIONS)}")
    name = str(data.get("name", default_name))
    if "dims" not in data:
        raise SchemaError("dims", "missing")
    dims = _parse_dims(data["dims"])
    effective_settings = _parse_settings(data.get("tolerances", {}), settings, overrides)
    total = int(np.prod(dims))
    if total > effective_settings.max_dim:
        raise SchemaError("dims", f"total dimension {total} exceeds max_dim={effective_settings.max_dim}")

    mode_name = data.get("mode", "designated")
    if not isinstance(mode_name, str) or mode_name not in MODES:
        raise SchemaError("mode", f"unknown mode {mode_name!r}, expected 'designated' or 'all_matched'")
    mode = MODES[mode_name]

    matching_name = data.get("intensive_matching", "labeled")
    if matching_name not in ("structural", "labeled"):
        raise SchemaError("intensive_matching", f"expected 'labeled' or 'structural', got {matching_name!r}")
    intensive_matching = IntensiveMatching(matching_name)

    tolerances = {**data.get("tolerances", {}), **(overrides or {})}
    state = None
    if len(dims) == 2:
        if "state" not in data:
            raise SchemaError("state", "a bipartite scenario needs a state")
        state = joint_state(data["state"], dims, "state", effective_settings)
        schmidt_a, schmidt_b = _schmidt_pair(state, dims, effective_settings)
        if "bases" in data:
            raise SchemaError("bases", "bipartite scenarios list 'bases_a' and 'bases_b'")
        bases_a = _parse_bases(data.get("bases_a"), "bases_a", dims[0], schmidt_a, effective_settings)
        bases_b = _parse_bases(data.get("bases_b"), "bases_b", dims[1], schmidt_b, effective_settings)
        pairs, normalised_pairs = _parse_pairs(data.get("context_pairs", []), bases_a, bases_b)
    else:
        if data.get("state") is not None:
            state = single_state(data["state"], dims[0], "state", effective_settings)
        for key in ("bases_a", "bases_b", "context_pairs"):
            if key in data:
                raise SchemaError(key, "only bipartite scenarios carry this field")
        bases_a = _parse_bases(data.get("bases"), "bases", dims[0], None, effective_settings)
        bases_b, pairs, normalised_pairs = [], [], []

    sampling = _parse_sampling(data.get("sampling"))

    source = {
        "schema_version": version,
        "name": name,
        "dims": list(dims),
        "state": copy.deepcopy(data.get("state")),
        "mode": "all_matched" if mode is RelationMode.ALL_MATCHED_CONTEXTS else "designated",
        "intensive_matching": intensive_matching.value,
        "tolerances": copy.deepcopy(tolerances),
        "sampling": sampling,
    }
    if len(dims) == 2:
        source.update({"bases_a": copy.deepcopy(data["bases_a"]), "bases_b": copy.deepcopy(data["bases_b"]),
                       "context_pairs": normalised_pairs})
    else:
        source["bases"] = copy.deepcopy(data["bases"])

    logger.info(f"Loaded scenario '{name}' with dims {list(dims)}")
    return ScenarioSpec(schema_version=version, name=name, dims=dims, state=state, bases_a=bases_a,
                        bases_b=bases_b, context_pairs=pairs, mode=mode, intensive_matching=intensive_matching,
                        tolerances=tolerances, sampling=sampling,
                        settings=effective_settings, source=source)


def build_graphs(spec: ScenarioSpec) -> Tuple[PowerGraph, Optional[PowerGraph]]:
    """Power graphs of side a (or the single system) and side b"""
    graph_a = generate_graph_from_bases(spec.bases_a, spec.settings)
    graph_b = generate_graph_from_bases(spec.bases_b, spec.settings) if spec.bases_b else None
    return graph_a, graph_b


def _context_positions(g: PowerGraph, basis: Basis, context: Context, settings: Settings) -> List[int]:
    """Position inside context.node_ids of each basis vector"""
    positions = []
    for k in range(len(basis)):
        node_id = g.locate(projector_onto(basis.vector(k)), settings.tol_num)
        positions.append(context.node_ids.index(node_id))
    return positions


def _context_pair(spec: ScenarioSpec, g_a: PowerGraph, g_b: PowerGraph, pair: PairSpec, label: str) -> ContextPair:
    basis_a = next(b for b in spec.bases_a if b.name == pair.a)
    basis_b = next(b for b in spec.bases_b if b.name == pair.b)
    context_a = context_for_basis(g_a, basis_a, spec.settings)
    context_b = context_for_basis(g_b, basis_b, spec.settings)
    positions_a = _context_positions(g_a, basis_a, context_a, spec.settings)
    positions_b = _context_positions(g_b, basis_b, context_b, spec.settings)
    # matching is given in basis-vector order, contexts are ordered by node id
    matching = [0] * len(context_a)
    for k, target in enumerate(pair.matching):
        matching[positions_a[k]] = positions_b[target]
    return ContextPair(context_a, context_b, tuple(matching), label=label)


def build_joint_scenario(spec: ScenarioSpec, mode: Optional[RelationMode] = None) -> JointScenario:
    """
    Turn a bipartite ScenarioSpec into the JointScenario the relation deciders consume.

    Args:
        mode: Overrides the scenario's own mode (command-line --mode)

    Raises:
        ValidationError: the scenario describes a single system
    """
    if not spec.is_bipartite:
        raise ValidationError(f"scenario '{spec.name}' describes a single system, relations need dims [dA, dB]")
    g_a, g_b = build_graphs(spec)
    labels, pairs = set(), []
    for index, pair in enumerate(spec.context_pairs):
        label = f"{pair.a}|{pair.b}"
        if label in labels:
            label = f"{label}#{index}"
        labels.add(label)
        pairs.append(_context_pair(spec, g_a, g_b, pair, label))
    return JointScenario(rho_joint=spec.state, dims=(spec.dims[0], spec.dims[1]), graph_a=g_a, graph_b=g_b,
                         context_pairs=tuple(pairs), mode=mode or spec.mode, name=spec.name,
                         intensive_matching=spec.intensive_matching)
