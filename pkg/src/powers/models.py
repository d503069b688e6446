# src/powers/models.py

from dataclasses import dataclass
from typing import Tuple, Optional, List, Iterable

import numpy as np

from ..linalg.operators import HermitianOperator
from ..linalg.kernel import frobenius_distance


@dataclass(frozen=True, eq=False)
class Power:
    """A projector acting as one node of the commutation graph"""
    id: int
    projector: HermitianOperator
    rank: int
    label: Optional[str] = None

    @property
    def matrix(self) -> np.ndarray:
        return self.projector.matrix

    def display_name(self) -> str:
        return self.label if self.label else f"P{self.id}"


@dataclass(frozen=True)
class Context:
    """Set of pairwise commuting powers. node_ids are kept sorted."""
    node_ids: Tuple[int, ...]
    is_maximal: bool
    resolves_identity: bool

    def __len__(self) -> int:
        return len(self.node_ids)

    def __contains__(self, node_id: int) -> bool:
        return node_id in self.node_ids


@dataclass(frozen=True, eq=False)
class PowerGraph:
    """Projectors of one dimension plus the symmetric, reflexive commutation relation"""
    powers: Tuple[Power, ...]
    adjacency: np.ndarray

    def __len__(self) -> int:
        return len(self.powers)

    @property
    def dim(self) -> int:
        return self.powers[0].projector.dim

    @property
    def node_ids(self) -> range:
        return range(len(self.powers))

    def power(self, node_id: int) -> Power:
        return self.powers[node_id]

    def is_adjacent(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def neighbors(self, node_id: int) -> List[int]:
        """Adjacent nodes, excluding the node itself"""
        return [int(j) for j in np.flatnonzero(self.adjacency[node_id]) if j != node_id]

    def degree(self, node_id: int) -> int:
        return len(self.neighbors(node_id))

    def edge_count(self) -> int:
        """Number of edges between distinct nodes"""
        return int((self.adjacency.sum() - len(self.powers)) // 2)

    def locate(self, projector, tol: float) -> Optional[int]:
        """Node id whose projector is within tol (Frobenius) of the given one"""
        for power in self.powers:
            if power.matrix.shape == np.shape(projector) and \
                    frobenius_distance(power.matrix, projector) <= tol:
                return power.id
        return None

    def subgraph(self, node_ids: Iterable[int]) -> 'PowerGraph':
        """Induced subgraph, nodes renumbered 0..k-1 in ascending original id"""
        kept = sorted(set(node_ids))
        powers = tuple(
            Power(id=new_id, projector=self.powers[old].projector, rank=self.powers[old].rank,
                  label=self.powers[old].label)
            for new_id, old in enumerate(kept)
        )
        adjacency = self.adjacency[np.ix_(kept, kept)].copy()
        adjacency.setflags(write=False)
        return PowerGraph(powers=powers, adjacency=adjacency)

    def labels(self) -> List[str]:
        return [p.display_name() for p in self.powers]
