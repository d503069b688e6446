# src/psa/binary_search.py

from typing import Dict, List, Union, Optional

from .models import BinaryValuation, NonexistenceCertificate
from ..powers.models import PowerGraph, Context
from ..powers.graph import maximal_contexts
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import NonExhaustiveContextError, SearchBudgetError
from ..utils.logger import get_logger

logger = get_logger("psa.binary")


class _Search:
    """Backtracking over 'exactly one true node per context' assignments"""

    def __init__(self, scope: List[Context], nodes: List[int], budget: int):
        self.scope = scope
        self.budget = budget
        self.branches = 0
        self.assignment: Dict[int, Optional[int]] = {n: None for n in nodes}
        self.contexts_of: Dict[int, List[int]] = {n: [] for n in nodes}
        for index, context in enumerate(scope):
            for node in context.node_ids:
                self.contexts_of[node].append(index)

    def _open_candidates(self, context: Context) -> Optional[List[int]]:
        """Unassigned nodes of a context still lacking its true node; None if already satisfied"""
        if any(self.assignment[n] == 1 for n in context.node_ids):
            return None
        return [n for n in context.node_ids if self.assignment[n] is None]

    def _consistent(self) -> bool:
        for context in self.scope:
            ones = sum(1 for n in context.node_ids if self.assignment[n] == 1)
            if ones > 1:
                return False
            if ones == 0 and all(self.assignment[n] == 0 for n in context.node_ids):
                return False
        return True

    def run(self) -> bool:
        # most constrained open context first, lowest index on ties
        best = None
        for context in self.scope:
            candidates = self._open_candidates(context)
            if candidates is None:
                continue
            if not candidates:
                return False
            if best is None or len(candidates) < len(best):
                best = candidates
        if best is None:
            return True

        for node in best:
            self.branches += 1
            if self.branches > self.budget:
                raise SearchBudgetError(self.branches)
            changed = [node]
            self.assignment[node] = 1
            for index in self.contexts_of[node]:
                for other in self.scope[index].node_ids:
                    if other != node and self.assignment[other] is None:
                        self.assignment[other] = 0
                        changed.append(other)
            if self._consistent() and self.run():
                return True
            for n in changed:
                self.assignment[n] = None
        return False


def search_binary_valuation(g: PowerGraph, budget: Optional[int] = None,
                            settings: Settings = DEFAULT_SETTINGS
                            ) -> Union[BinaryValuation, NonexistenceCertificate]:
    """
    Exhaustive search for a binary valuation: exactly one node valued 1 in every
    identity-resolving maximal context, consistently across shared nodes.

    Maximal contexts that do not resolve the identity are outside the scope.
    Branches are explored in ascending node order, so the returned assignment is the
    first one in that order.

    Returns:
        BinaryValuation, or NonexistenceCertificate when the search space is exhausted

    Raises:
        NonExhaustiveContextError: no maximal context resolves the identity
        SearchBudgetError: more than `budget` branches (default settings.search_budget)
    """
    budget = settings.search_budget if budget is None else budget
    contexts = maximal_contexts(g, settings)
    scope = [c for c in contexts if c.resolves_identity]
    if not scope:
        raise NonExhaustiveContextError("no maximal context of the graph resolves the identity")
    skipped = len(contexts) - len(scope)
    if skipped:
        logger.info(f"{skipped} maximal contexts do not resolve the identity and are outside the search scope")

    search = _Search(scope, list(g.node_ids), budget)
    found = search.run()
    logger.info(f"Binary valuation search explored {search.branches} branches over {len(scope)} contexts")
    if not found:
        return NonexistenceCertificate(branches_explored=search.branches, contexts_checked=len(scope))
    assignment = {n: (v if v is not None else 0) for n, v in search.assignment.items()}
    return BinaryValuation(assignment=assignment, scope=tuple(scope))


def is_binary_valuation(assignment: Dict[int, int], scope: List[Context]) -> bool:
    """Check the exactly-one rule on every context of the scope"""
    return all(sum(assignment.get(n, 0) for n in c.node_ids) == 1 for c in scope)
