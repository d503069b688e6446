# src/relations/classifier.py

from .models import (JointScenario, RelationVerdict, Classification, Baselines,
                     IntensiveWitness, EffectiveWitness)
from .intensive import intensive_related
from .effective import effective_related
from .baselines import schmidt_rank, ppt_separable, PPT_MAX_DIM
from ..linalg.operators import is_pure
from ..linalg.kernel import partial_trace, eigen_hermitian, Side
from ..psa.valuation import psa_from_density
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.logger import get_logger

logger = get_logger("relations")

VERDICT_TABLE = {
    (True, True): Classification.ENTANGLED,
    (True, False): Classification.INTENSIVE_ONLY,
    (False, False): Classification.SEPARABLE,
    (False, True): Classification.EFFECTIVE_ONLY_ANOMALY,
}


def _baselines(s: JointScenario, settings: Settings) -> Baselines:
    rank = None
    if is_pure(s.rho_joint, settings):
        _, vectors = eigen_hermitian(s.rho_joint.operator)
        rank = schmidt_rank(vectors[:, 0], s.dims, settings)
    ppt = None
    if s.dims[0] * s.dims[1] <= PPT_MAX_DIM:
        ppt = ppt_separable(s.rho_joint, s.dims, settings)
    return Baselines(schmidt_rank=rank,
                     ppt_separable=ppt.separable if ppt is not None else None,
                     ppt_conclusive=ppt.conclusive if ppt is not None else None)


def classify(s: JointScenario, settings: Settings = DEFAULT_SETTINGS) -> RelationVerdict:
    """
    Classify a joint scenario as Entangled, IntensiveOnly or Separable.

    The local PSAs are the Born valuations of the two reduced states over graph_a and
    graph_b. The intensive and effective deciders run independently and the pair of
    booleans is looked up in VERDICT_TABLE; an effective relation without an intensive
    one is reported as EffectiveOnlyAnomaly and logged.
    """
    rho_a = partial_trace(s.rho_joint, s.dims, Side.A, settings)
    rho_b = partial_trace(s.rho_joint, s.dims, Side.B, settings)
    psa_a = psa_from_density(rho_a, s.graph_a, settings)
    psa_b = psa_from_density(rho_b, s.graph_b, settings)

    intensive_result = intensive_related(psa_a, psa_b, settings, s.intensive_matching)
    effective_result = effective_related(s, settings)
    intensive = isinstance(intensive_result, IntensiveWitness)
    effective = isinstance(effective_result, EffectiveWitness)
    classification = VERDICT_TABLE[(intensive, effective)]

    if classification is Classification.EFFECTIVE_ONLY_ANOMALY:
        logger.warning(f"Scenario '{s.name}': effective relation without intensive relation "
                       f"({intensive_result.reason.value}: {intensive_result.detail})")
    logger.info(f"Scenario '{s.name}' classified as {classification.value}")

    return RelationVerdict(
        intensive=intensive,
        effective=effective,
        classification=classification,
        intensive_witness=intensive_result if intensive else None,
        intensive_failure=None if intensive else intensive_result,
        effective_witness=effective_result if effective else None,
        effective_failure=None if effective else effective_result,
        baselines=_baselines(s, settings),
        psa_a=psa_a,
        psa_b=psa_b,
    )
