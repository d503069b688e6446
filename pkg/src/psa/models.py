# src/psa/models.py

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple, Optional, Sequence

from ..linalg.operators import DensityMatrix
from ..powers.models import PowerGraph, Context


class PSASource(Enum):
    FROM_DENSITY = "from_density"
    EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class PSA:
    """Potential State of Affairs: one potentia in [0, 1] per node of a power graph"""
    graph: PowerGraph
    potentia: Tuple[float, ...]
    source: PSASource
    density: Optional[DensityMatrix] = None

    def value(self, node_id: int) -> float:
        return self.potentia[node_id]

    def as_dict(self) -> Dict[int, float]:
        return {node_id: value for node_id, value in enumerate(self.potentia)}

    def table(self) -> Sequence[Tuple[int, str, float]]:
        """(node id, label, potentia) rows"""
        return [(p.id, p.display_name(), self.potentia[p.id]) for p in self.graph.powers]


@dataclass(frozen=True)
class BinaryValuation:
    assignment: Dict[int, int]
    scope: Tuple[Context, ...]

    def true_nodes(self) -> Tuple[int, ...]:
        return tuple(sorted(n for n, v in self.assignment.items() if v == 1))


@dataclass(frozen=True)
class NonexistenceCertificate:
    """Exhaustive search found no binary valuation over the scope"""
    branches_explored: int
    contexts_checked: int


@dataclass(frozen=True)
class EffectiveDistribution:
    context: Context
    probabilities: Dict[int, float] = field(default_factory=dict)

    def outcomes(self) -> Tuple[int, ...]:
        return self.context.node_ids
