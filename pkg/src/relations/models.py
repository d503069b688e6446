# src/relations/models.py

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Tuple, Optional

from ..linalg.operators import DensityMatrix
from ..powers.models import PowerGraph, Context
from ..psa.models import PSA


class RelationMode(Enum):
    DESIGNATED_PAIRS = "designated"
    ALL_MATCHED_CONTEXTS = "all_matched"


class IntensiveMatching(Enum):
    """Whether an intensive witness may relabel nodes or must keep each node label"""
    STRUCTURAL = "structural"
    LABELED = "labeled"


class CorrelationSign(Enum):
    CORRELATED = "correlated"
    ANTI_CORRELATED = "anti_correlated"
    MIXED = "mixed"


class Classification(Enum):
    ENTANGLED = "Entangled"
    INTENSIVE_ONLY = "IntensiveOnly"
    SEPARABLE = "Separable"
    EFFECTIVE_ONLY_ANOMALY = "EffectiveOnlyAnomaly"


class NotRelatedReason(Enum):
    SIZE_MISMATCH = "SizeMismatch"
    POTENTIA_MULTISET = "PotentiaMultiset"
    DEGREE_SEQUENCE = "DegreeSequence"
    NO_ISOMORPHISM = "NoIsomorphism"
    LEAK = "Leak"
    INDEPENDENT = "Independent"
    NO_PARTNER = "NoPartner"


@dataclass(frozen=True)
class ContextPair:
    """
    A context on each side plus the designated outcome matching:
    matching[i] is the position in context_b paired with position i of context_a.
    """
    context_a: Context
    context_b: Context
    matching: Tuple[int, ...]
    label: str = ""

    def anti_matching(self) -> Tuple[int, ...]:
        """The reversed matching, reference for anti-correlation"""
        n = len(self.matching)
        return tuple(self.matching[n - 1 - i] for i in range(n))


@dataclass(frozen=True, eq=False)
class JointScenario:
    rho_joint: DensityMatrix
    dims: Tuple[int, int]
    graph_a: PowerGraph
    graph_b: PowerGraph
    context_pairs: Tuple[ContextPair, ...]
    mode: RelationMode = RelationMode.DESIGNATED_PAIRS
    name: str = "scenario"
    intensive_matching: IntensiveMatching = IntensiveMatching.LABELED


@dataclass(frozen=True)
class IntensiveWitness:
    mapping: Dict[int, int]
    max_potentia_gap: float


@dataclass(frozen=True)
class PairOutcome:
    """Result of the best outcome function on one context pair"""
    pair: ContextPair
    outcome_map: Tuple[int, ...]
    captured_mass: float
    leak: float
    dependence: float
    sign: CorrelationSign
    within_leak: bool
    related: bool


@dataclass(frozen=True)
class EffectiveWitness:
    pair_outcomes: Tuple[PairOutcome, ...]
    correlation_sign: CorrelationSign
    max_leak: float

    @property
    def context_pair_maps(self) -> Dict[str, Tuple[int, ...]]:
        return {o.pair.label: o.outcome_map for o in self.pair_outcomes}


@dataclass(frozen=True)
class NotRelated:
    reason: NotRelatedReason
    detail: str = ""
    worst_pair: Optional[str] = None
    leak: Optional[float] = None


@dataclass(frozen=True)
class Baselines:
    schmidt_rank: Optional[int] = None
    ppt_separable: Optional[bool] = None
    ppt_conclusive: Optional[bool] = None


@dataclass(frozen=True, eq=False)
class RelationVerdict:
    intensive: bool
    effective: bool
    classification: Classification
    intensive_witness: Optional[IntensiveWitness] = None
    intensive_failure: Optional[NotRelated] = None
    effective_witness: Optional[EffectiveWitness] = None
    effective_failure: Optional[NotRelated] = None
    baselines: Baselines = field(default_factory=Baselines)
    psa_a: Optional[PSA] = None
    psa_b: Optional[PSA] = None
