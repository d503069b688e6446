# src/relations/intensive.py

from typing import Dict, List, Union

from .models import IntensiveWitness, NotRelated, NotRelatedReason, IntensiveMatching
from ..psa.models import PSA
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.logger import get_logger

logger = get_logger("relations.intensive")


def intensive_related(psa1: PSA, psa2: PSA, settings: Settings = DEFAULT_SETTINGS,
                      matching: IntensiveMatching = IntensiveMatching.LABELED
                      ) -> Union[IntensiveWitness, NotRelated]:
    """
    Look for a graph isomorphism tau: G1 -> G2 with Psi2(tau(P)) = Psi1(P) for every node.

    Cheap invariants are compared first (node count, sorted potentia, sorted degrees);
    then a backtracking search extends partial maps node by node, keeping only
    candidates with equal degree, matching potentia and preserved adjacency to the
    nodes already mapped. The first witness in ascending candidate order is returned.
    By default (IntensiveMatching.LABELED) a node may only map to a node with the same
    label; IntensiveMatching.STRUCTURAL accepts any potentia-preserving isomorphism.

    Returns:
        IntensiveWitness, or NotRelated naming the stage that failed
    """
    g1, g2 = psa1.graph, psa2.graph
    tol = settings.tol_intensive
    n = len(g1)
    if n != len(g2):
        return NotRelated(NotRelatedReason.SIZE_MISMATCH, f"{n} nodes vs {len(g2)} nodes")

    sorted1, sorted2 = sorted(psa1.potentia), sorted(psa2.potentia)
    gap = max(abs(a - b) for a, b in zip(sorted1, sorted2))
    if gap > tol:
        return NotRelated(NotRelatedReason.POTENTIA_MULTISET, f"sorted potentia differ by {gap:.12g}")

    degrees1 = [g1.degree(u) for u in g1.node_ids]
    degrees2 = [g2.degree(v) for v in g2.node_ids]
    if sorted(degrees1) != sorted(degrees2):
        return NotRelated(NotRelatedReason.DEGREE_SEQUENCE, "degree sequences differ")

    labeled = matching is IntensiveMatching.LABELED
    candidates: Dict[int, List[int]] = {}
    for u in g1.node_ids:
        candidates[u] = [v for v in g2.node_ids
                         if degrees2[v] == degrees1[u] and abs(psa2.potentia[v] - psa1.potentia[u]) <= tol
                         and (not labeled or g2.power(v).display_name() == g1.power(u).display_name())]
        if not candidates[u]:
            return NotRelated(NotRelatedReason.NO_ISOMORPHISM,
                              f"node {u} has no node of equal degree and potentia"
                              + (" carrying the same label" if labeled else ""))

    order = sorted(g1.node_ids, key=lambda u: (len(candidates[u]), u))
    mapping: Dict[int, int] = {}
    used = set()

    def extend(depth: int) -> bool:
        if depth == n:
            return True
        u = order[depth]
        for v in candidates[u]:
            if v in used:
                continue
            if all(g1.is_adjacent(u, w) == g2.is_adjacent(v, mapping[w]) for w in mapping):
                mapping[u] = v
                used.add(v)
                if extend(depth + 1):
                    return True
                del mapping[u]
                used.discard(v)
        return False

    if not extend(0):
        return NotRelated(NotRelatedReason.NO_ISOMORPHISM, "backtracking exhausted every candidate map")

    witness_map = {u: mapping[u] for u in sorted(mapping)}
    max_gap = max(abs(psa2.potentia[v] - psa1.potentia[u]) for u, v in witness_map.items())
    logger.debug(f"Intensive relation found over {n} nodes (max potentia gap {max_gap:.3e})")
    return IntensiveWitness(mapping=witness_map, max_potentia_gap=max_gap)
