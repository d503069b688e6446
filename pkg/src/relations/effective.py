# src/relations/effective.py

from typing import List, Union, Sequence, Optional

import numpy as np

from .models import (JointScenario, ContextPair, PairOutcome, EffectiveWitness, NotRelated,
                     NotRelatedReason, RelationMode, CorrelationSign)
from ..linalg.kernel import tensor_product
from ..powers.models import Context
from ..powers.graph import maximal_contexts
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import NumericalError, NonExhaustiveContextError, GraphError
from ..utils.logger import get_logger

logger = get_logger("relations.effective")


def joint_outcome_distribution(s: JointScenario, c1: Context, c2: Context,
                               settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """
    Joint outcome probabilities p(i, j) = Tr(rho (P_i ⊗ Q_j)) for context c1 of graph_a
    and c2 of graph_b. Rows follow c1.node_ids, columns c2.node_ids.

    Raises:
        NonExhaustiveContextError: a context does not resolve the identity
        NumericalError: an entry below -tol_num or a total away from 1
    """
    for side, context in (("a", c1), ("b", c2)):
        if not context.resolves_identity:
            raise NonExhaustiveContextError(f"context {context.node_ids} on side {side} does not resolve the identity")
    rho = s.rho_joint.matrix
    p = np.zeros((len(c1), len(c2)))
    for i, a in enumerate(c1.node_ids):
        for j, b in enumerate(c2.node_ids):
            joint = tensor_product(s.graph_a.power(a).matrix, s.graph_b.power(b).matrix, settings)
            p[i, j] = float(np.real(np.trace(rho @ joint)))
    if p.min() < -settings.tol_num:
        raise NumericalError(f"joint probability {p.min():.12g} is negative")
    p = np.clip(p, 0.0, 1.0)
    total = float(p.sum())
    if abs(total - 1.0) > settings.tol_num:
        raise NumericalError(f"joint probabilities sum to {total:.12g}")
    return p


def tested_pairs(s: JointScenario, settings: Settings = DEFAULT_SETTINGS) -> List[ContextPair]:
    """
    Context pairs a scenario is judged on: the designated pairs, or every cross pair of
    identity-resolving maximal contexts in all-matched mode.
    """
    if s.mode is RelationMode.DESIGNATED_PAIRS:
        if not s.context_pairs:
            raise GraphError("designated mode needs at least one context pair")
        return list(s.context_pairs)
    side_a = [c for c in maximal_contexts(s.graph_a, settings) if c.resolves_identity]
    side_b = [c for c in maximal_contexts(s.graph_b, settings) if c.resolves_identity]
    if not side_a or not side_b:
        raise GraphError("all-matched mode needs identity-resolving contexts on both sides")
    pairs = []
    for i, ca in enumerate(side_a):
        for j, cb in enumerate(side_b):
            matching = tuple(k % len(cb) for k in range(len(ca)))
            pairs.append(ContextPair(ca, cb, matching, label=f"a{i}|b{j}"))
    return pairs


def evaluate_pair(p: np.ndarray, pair: ContextPair, threshold: float) -> PairOutcome:
    """
    Best outcome function tau(i) = argmax_j p(i, j) on one pair.

    The pair is related when tau captures at least 1 - threshold of the mass and the
    distribution is not a product of its marginals (constant outcomes carry no correlation).
    Rows without mass follow the designated matching.
    """
    row_mass = p.sum(axis=1)
    col_mass = p.sum(axis=0)
    outcome_map = []
    for i in range(p.shape[0]):
        if row_mass[i] <= threshold and pair.matching[i] < p.shape[1]:
            outcome_map.append(pair.matching[i])
        else:
            outcome_map.append(int(np.argmax(p[i])))
    captured = float(sum(p[i, outcome_map[i]] for i in range(p.shape[0])))
    leak = max(0.0, float(p.sum()) - captured)
    dependence = float(np.max(np.abs(p - np.outer(row_mass, col_mass))))

    supported = [i for i in range(p.shape[0]) if row_mass[i] > threshold]
    anti = pair.anti_matching()
    if all(outcome_map[i] == pair.matching[i] for i in supported):
        sign = CorrelationSign.CORRELATED
    elif all(outcome_map[i] == anti[i] for i in supported):
        sign = CorrelationSign.ANTI_CORRELATED
    else:
        sign = CorrelationSign.MIXED
    within_leak = leak <= threshold
    return PairOutcome(pair=pair, outcome_map=tuple(outcome_map), captured_mass=captured, leak=leak,
                       dependence=dependence, sign=sign, within_leak=within_leak,
                       related=within_leak and dependence > threshold)


def _failure(outcome: PairOutcome, reason: Optional[NotRelatedReason] = None) -> NotRelated:
    if reason is None:
        reason = NotRelatedReason.INDEPENDENT if outcome.within_leak else NotRelatedReason.LEAK
    return NotRelated(reason=reason, detail=f"captured mass {outcome.captured_mass:.12g}",
                      worst_pair=outcome.pair.label, leak=outcome.leak)


def aggregate(outcomes: Sequence[PairOutcome], mode: RelationMode) -> Union[EffectiveWitness, NotRelated]:
    """Combine per-pair outcomes into the effective verdict of a scenario"""
    if mode is RelationMode.DESIGNATED_PAIRS:
        chosen = list(outcomes)
        failed = [o for o in chosen if not o.related]
        if failed:
            worst = max(failed, key=lambda o: o.leak)
            return _failure(worst)
    else:
        chosen = []
        by_context = {}
        for o in outcomes:
            by_context.setdefault(o.pair.context_a.node_ids, []).append(o)
        for context_ids, candidates in by_context.items():
            partner = next((o for o in candidates if o.related), None)
            if partner is None:
                worst = min(candidates, key=lambda o: o.leak)
                return _failure(worst, NotRelatedReason.NO_PARTNER)
            chosen.append(partner)

    signs = {o.sign for o in chosen}
    if signs == {CorrelationSign.CORRELATED}:
        sign = CorrelationSign.CORRELATED
    elif signs == {CorrelationSign.ANTI_CORRELATED}:
        sign = CorrelationSign.ANTI_CORRELATED
    else:
        sign = CorrelationSign.MIXED
    return EffectiveWitness(pair_outcomes=tuple(chosen), correlation_sign=sign,
                            max_leak=max(o.leak for o in chosen))


def effective_related(s: JointScenario, settings: Settings = DEFAULT_SETTINGS
                      ) -> Union[EffectiveWitness, NotRelated]:
    """
    Decide whether every tested effective valuation on side a determines one on side b.

    Returns:
        EffectiveWitness with the outcome function of each pair, or NotRelated with the
        worst pair and its leak
    """
    outcomes = []
    for pair in tested_pairs(s, settings):
        p = joint_outcome_distribution(s, pair.context_a, pair.context_b, settings)
        outcome = evaluate_pair(p, pair, settings.tol_effective)
        logger.debug(f"Pair {pair.label}: captured {outcome.captured_mass:.6f}, "
                     f"dependence {outcome.dependence:.6f}, related={outcome.related}")
        outcomes.append(outcome)
    return aggregate(outcomes, s.mode)
