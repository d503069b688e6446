# src/sampler/models.py

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..relations.models import JointScenario, ContextPair

PRNG_NAME = "philox4x64"


@dataclass(frozen=True, eq=False)
class ExperimentRun:
    """Tallies of sampled outcome pairs, one count matrix per tested context pair"""
    scenario: JointScenario
    seed: int
    shots: int
    pairs: Tuple[ContextPair, ...]
    tallies: Dict[str, np.ndarray] = field(default_factory=dict)
    prng: str = PRNG_NAME

    @property
    def scenario_ref(self) -> str:
        return self.scenario.name


@dataclass(frozen=True)
class ConvergenceReport:
    per_pair_tv_distance: Dict[str, float]
    empirical_effective: bool
    z_worst: float
    stat_threshold: float
    per_pair_captured_mass: Dict[str, float] = field(default_factory=dict)
