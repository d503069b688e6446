# src/powers/graph.py

from typing import Sequence, List, Optional, Iterable, Set, Tuple

import numpy as np

from .models import Power, PowerGraph, Context
from .bases import Basis
from ..linalg.operators import HermitianOperator, as_complex_matrix
from ..linalg.kernel import commutator_norm, frobenius_distance, projector_onto
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import (DimensionError, InvalidPowerError, InvalidBasisError, GraphError,
                            CombinatorialBlowupError, NotHermitianError)
from ..utils.logger import get_logger

logger = get_logger("powers")


def make_power(node_id: int, projector, label: Optional[str] = None, index: Optional[int] = None,
               settings: Settings = DEFAULT_SETTINGS) -> Power:
    """
    Validate a projector and wrap it as a Power.

    Raises:
        InvalidPowerError: not Hermitian, not idempotent, or trace not an integer
    """
    index = node_id if index is None else index
    try:
        operator = HermitianOperator.from_matrix(projector, settings)
    except NotHermitianError as e:
        raise InvalidPowerError(index, e.defect)
    matrix = operator.matrix
    defect = float(np.linalg.norm(matrix @ matrix - matrix))
    if defect > settings.tol_proj:
        raise InvalidPowerError(index, defect)
    trace = float(np.trace(matrix).real)
    rank = int(round(trace))
    if rank < 1 or abs(trace - rank) > settings.tol_num:
        raise InvalidPowerError(index, abs(trace - rank) if rank >= 1 else 1.0)
    return Power(id=node_id, projector=operator, rank=rank, label=label)


def build_power_graph(projectors: Sequence, labels: Optional[Sequence[Optional[str]]] = None,
                      settings: Settings = DEFAULT_SETTINGS) -> PowerGraph:
    """
    Build the commutation graph of a list of projectors.

    Duplicates (Frobenius distance <= tol_num) are merged into the first occurrence.
    Edges join P and Q when ||[P, Q]||_F <= tol_comm; every node carries a loop.

    Args:
        projectors: Matrices or HermitianOperators, all of the same dimension
        labels: Optional display label per input projector
        settings: Tolerances

    Returns:
        PowerGraph: nodes numbered in order of first appearance
    """
    if len(projectors) == 0:
        raise GraphError("cannot build a power graph from an empty list")
    labels = list(labels) if labels is not None else [None] * len(projectors)
    if len(labels) != len(projectors):
        raise GraphError("labels and projectors differ in length")

    dim = None
    powers: List[Power] = []
    for index, (projector, label) in enumerate(zip(projectors, labels)):
        matrix = as_complex_matrix(projector, square=True)
        if dim is None:
            dim = matrix.shape[0]
        elif matrix.shape[0] != dim:
            raise DimensionError(f"projector {index} has dimension {matrix.shape[0]}, expected {dim}")
        if dim > settings.max_dim:
            raise DimensionError(f"dimension {dim} exceeds max_dim={settings.max_dim}")
        if any(frobenius_distance(p.matrix, matrix) <= settings.tol_num for p in powers):
            logger.debug(f"Merging duplicate projector at input {index}")
            continue
        powers.append(make_power(len(powers), matrix, label, index, settings))

    adjacency = _commutation_adjacency(powers, settings)
    logger.debug(f"Built power graph: {len(powers)} nodes, dimension {dim}")
    return PowerGraph(powers=tuple(powers), adjacency=adjacency)


def _commutation_adjacency(powers: Sequence[Power], settings: Settings) -> np.ndarray:
    n = len(powers)
    stack = np.array([p.matrix for p in powers])
    adjacency = np.zeros((n, n), dtype=bool)
    for i, power in enumerate(powers):
        # row i against every later node at once
        later = stack[i:]
        residual = power.matrix @ later - later @ power.matrix
        norms = np.linalg.norm(residual.reshape(len(later), -1), axis=1)
        adjacency[i, i:] = norms <= settings.tol_comm
    adjacency = adjacency | adjacency.T
    np.fill_diagonal(adjacency, True)
    adjacency.setflags(write=False)
    return adjacency


def check_basis(basis, index: int = 0, settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """Return the basis columns after checking orthonormality (raises InvalidBasisError)"""
    columns = basis.vectors if isinstance(basis, Basis) else np.asarray(basis, dtype=np.complex128)
    if columns.ndim != 2 or columns.shape[0] != columns.shape[1]:
        raise InvalidBasisError(index, float('inf'))
    defect = float(np.linalg.norm(columns.conj().T @ columns - np.eye(columns.shape[1])))
    if defect > settings.tol_num:
        raise InvalidBasisError(index, defect)
    return columns


def generate_graph_from_bases(bases: Sequence, settings: Settings = DEFAULT_SETTINGS) -> PowerGraph:
    """
    Graph over the rank-1 projectors of every vector of every basis.

    Args:
        bases: Basis objects or square matrices whose columns are orthonormal
    """
    if len(bases) == 0:
        raise GraphError("at least one basis is required")
    projectors, labels = [], []
    dim = None
    for index, basis in enumerate(bases):
        columns = check_basis(basis, index, settings)
        if dim is None:
            dim = columns.shape[0]
        elif columns.shape[0] != dim:
            raise DimensionError(f"basis {index} has dimension {columns.shape[0]}, expected {dim}")
        for k in range(columns.shape[1]):
            projectors.append(projector_onto(columns[:, k]))
            labels.append(basis.labels[k] if isinstance(basis, Basis) else f"b{index}.{k}")
    return build_power_graph(projectors, labels, settings)


def make_context(g: PowerGraph, node_ids: Iterable[int], is_maximal: bool,
                 settings: Settings = DEFAULT_SETTINGS) -> Context:
    ids = tuple(sorted(set(int(i) for i in node_ids)))
    total = sum(g.power(i).matrix for i in ids)
    defect = float(np.linalg.norm(total - np.eye(g.dim)))
    return Context(node_ids=ids, is_maximal=is_maximal,
                   resolves_identity=defect <= g.dim * settings.tol_num)


def context_for_basis(g: PowerGraph, basis, settings: Settings = DEFAULT_SETTINGS) -> Context:
    """
    The context formed by the nodes carrying the projectors of one basis.

    Raises:
        GraphError: a basis vector has no node in the graph
    """
    columns = check_basis(basis, 0, settings)
    ids = []
    for k in range(columns.shape[1]):
        node_id = g.locate(projector_onto(columns[:, k]), settings.tol_num)
        if node_id is None:
            name = basis.name if isinstance(basis, Basis) else "basis"
            raise GraphError(f"vector {k} of {name} is not a node of the graph")
        ids.append(node_id)
    ids = sorted(ids)
    is_maximal = not any(
        all(g.is_adjacent(candidate, i) for i in ids)
        for candidate in g.node_ids if candidate not in ids
    )
    return make_context(g, ids, is_maximal, settings)


def maximal_contexts(g: PowerGraph, settings: Settings = DEFAULT_SETTINGS) -> List[Context]:
    """
    Enumerate the maximal cliques of the graph (Bron-Kerbosch with Tomita pivoting).

    Returns:
        List[Context]: sorted by node-id sequence, all with is_maximal=True

    Raises:
        CombinatorialBlowupError: more than settings.max_cliques cliques
    """
    neighbors = {i: set(g.neighbors(i)) for i in g.node_ids}
    cliques: List[Tuple[int, ...]] = []

    def expand(clique: Set[int], candidates: Set[int], excluded: Set[int]):
        if not candidates and not excluded:
            cliques.append(tuple(sorted(clique)))
            if len(cliques) > settings.max_cliques:
                raise CombinatorialBlowupError(settings.max_cliques)
            return
        # pivot: most candidates covered, lowest id on ties
        pivot = max(sorted(candidates | excluded), key=lambda u: len(candidates & neighbors[u]))
        for v in sorted(candidates - neighbors[pivot]):
            expand(clique | {v}, candidates & neighbors[v], excluded & neighbors[v])
            candidates = candidates - {v}
            excluded = excluded | {v}

    expand(set(), set(g.node_ids), set())
    cliques.sort()
    logger.debug(f"Found {len(cliques)} maximal contexts")
    return [make_context(g, clique, True, settings) for clique in cliques]


def contexts_contained_check(g: PowerGraph, settings: Settings = DEFAULT_SETTINGS) -> bool:
    """
    Self-check that the graph contains all its contexts:
    every maximal clique is pairwise commuting when recomputed from the projectors,
    and every commuting pair of nodes lies inside some maximal clique.
    """
    contexts = maximal_contexts(g, settings)
    covered = set()
    for context in contexts:
        ids = context.node_ids
        for a_pos, a in enumerate(ids):
            for b in ids[a_pos + 1:]:
                if commutator_norm(g.power(a).matrix, g.power(b).matrix) > settings.tol_comm:
                    logger.debug(f"Context {ids} holds non-commuting pair ({a}, {b})")
                    return False
                covered.add((a, b))
    n = len(g)
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in covered and \
                    commutator_norm(g.power(a).matrix, g.power(b).matrix) <= settings.tol_comm:
                logger.debug(f"Commuting pair ({a}, {b}) is missing from every context")
                return False
    return True
