# src/cli/commands.py

from typing import Dict, Any, Optional, Tuple

from ..version import __version__
from ..linalg.kernel import frobenius_distance
from ..powers.graph import maximal_contexts, contexts_contained_check
from ..powers.models import PowerGraph
from ..psa.binary_search import search_binary_valuation
from ..psa.models import BinaryValuation
from ..psa.valuation import psa_from_density, density_from_psa
from ..relations.classifier import classify
from ..relations.effective import tested_pairs, joint_outcome_distribution
from ..relations.models import Classification, RelationMode, JointScenario, RelationVerdict
from ..report.report_writer import verdict_section, sampling_section, psa_rows
from ..sampler.models import PRNG_NAME
from ..sampler.sampler import run_experiment, empirical_verdict
from ..scenario.parser import ScenarioSpec, build_graphs, build_joint_scenario
from ..utils.errors import SamplingError, NotTomographicallyCompleteError
from ..utils.logger import get_logger

logger = get_logger("cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ANOMALY = 2

Report = Dict[str, Any]


def _metadata(spec: ScenarioSpec, seed: Optional[int] = None) -> Dict[str, Any]:
    return {
        "tool": "psakit",
        "version": __version__,
        "seed": seed,
        "prng": PRNG_NAME,
        "tolerances": spec.settings.as_dict(),
    }


def _exit_code(verdict: RelationVerdict) -> int:
    return EXIT_ANOMALY if verdict.classification is Classification.EFFECTIVE_ONLY_ANOMALY else EXIT_OK


def _joint_tables(s: JointScenario, spec: ScenarioSpec) -> Dict[str, Any]:
    tables = {}
    for pair in tested_pairs(s, spec.settings):
        tables[pair.label] = {
            "rows": list(pair.context_a.node_ids),
            "columns": list(pair.context_b.node_ids),
            "matching": list(pair.matching),
            "probabilities": joint_outcome_distribution(s, pair.context_a, pair.context_b, spec.settings),
        }
    return tables


def _relation_report(command: str, spec: ScenarioSpec, mode: Optional[RelationMode]) -> Tuple[Report, JointScenario, RelationVerdict]:
    s = build_joint_scenario(spec, mode)
    verdict = classify(s, spec.settings)
    report = {
        "command": command,
        "scenario": spec.name,
        "mode": s.mode.value,
        "verdict": verdict_section(verdict),
        "psa_tables": {"a": psa_rows(verdict.psa_a), "b": psa_rows(verdict.psa_b)},
        "joint_tables": _joint_tables(s, spec),
        "echo": spec.to_dict(),
    }
    # the echo describes the run as executed, command-line overrides included
    report["echo"]["mode"] = s.mode.value
    return report, s, verdict


def cmd_classify(spec: ScenarioSpec, mode: Optional[RelationMode] = None) -> Tuple[Report, int]:
    """
    Classify a bipartite scenario.

    Returns:
        (report, exit code): exit code 2 for an EffectiveOnlyAnomaly verdict
    """
    report, _, verdict = _relation_report("classify", spec, mode)
    report["metadata"] = _metadata(spec)
    return report, _exit_code(verdict)


def cmd_sample(spec: ScenarioSpec, shots: Optional[int] = None, seed: Optional[int] = None,
               stat_threshold: Optional[float] = None) -> Tuple[Report, int]:
    """
    Exact classification plus a seeded sampling run over every tested context pair.
    shots and seed default to the scenario's sampling block.
    """
    sampling = spec.sampling or {}
    shots = shots if shots is not None else sampling.get("shots")
    seed = seed if seed is not None else sampling.get("seed")
    if shots is None or seed is None:
        raise SamplingError("shots and seed are required (command line or the scenario's 'sampling' block)")

    report, s, verdict = _relation_report("sample", spec, None)
    report["echo"]["sampling"] = {"shots": shots, "seed": seed}
    run = run_experiment(s, shots, seed, spec.settings)
    convergence = empirical_verdict(run, stat_threshold, spec.settings)
    report["sampling"] = sampling_section(run, convergence)
    report["sampling"]["exact_effective"] = verdict.effective
    report["sampling"]["agrees_with_exact"] = convergence.empirical_effective == verdict.effective
    report["metadata"] = _metadata(spec, seed)
    if convergence.empirical_effective != verdict.effective:
        logger.warning(f"Empirical verdict ({convergence.empirical_effective}) disagrees with the exact one "
                       f"({verdict.effective}) at {shots} shots")
    return report, _exit_code(verdict)


def _graph_section(g: PowerGraph, spec: ScenarioSpec) -> Dict[str, Any]:
    contexts = maximal_contexts(g, spec.settings)
    return {
        "dim": g.dim,
        "node_count": len(g),
        "edge_count": g.edge_count(),
        "nodes": [{"id": p.id, "label": p.display_name(), "rank": p.rank} for p in g.powers],
        "maximal_contexts": [{"node_ids": list(c.node_ids), "size": len(c),
                              "resolves_identity": c.resolves_identity} for c in contexts],
        "contains_all_contexts": contexts_contained_check(g, spec.settings),
    }


def _reconstruction(psa, dim: int, spec: ScenarioSpec) -> Dict[str, Any]:
    try:
        rho = density_from_psa(psa, dim, spec.settings)
    except NotTomographicallyCompleteError as e:
        return {"complete": False, "rank": e.rank, "needed": e.needed}
    return {"complete": True, "frobenius_error": frobenius_distance(rho.matrix, spec.state.matrix)}


def cmd_graph(spec: ScenarioSpec) -> Report:
    """
    List the nodes and maximal contexts of each power graph in the scenario.
    A single-system scenario with a state also gets its PSA and a reconstruction check.
    """
    graph_a, graph_b = build_graphs(spec)
    report = {"command": "graph", "scenario": spec.name, "echo": spec.to_dict(), "metadata": _metadata(spec)}
    if graph_b is None:
        report["graphs"] = {"system": _graph_section(graph_a, spec)}
        if spec.state is not None:
            psa = psa_from_density(spec.state, graph_a, spec.settings)
            report["psa_tables"] = {"system": psa_rows(psa)}
            report["reconstruction"] = _reconstruction(psa, graph_a.dim, spec)
    else:
        report["graphs"] = {"a": _graph_section(graph_a, spec), "b": _graph_section(graph_b, spec)}
    return report


def _ks_section(g: PowerGraph, spec: ScenarioSpec, budget: Optional[int]) -> Dict[str, Any]:
    result = search_binary_valuation(g, budget, spec.settings)
    if isinstance(result, BinaryValuation):
        true_nodes = list(result.true_nodes())
        return {
            "exists": True,
            "true_nodes": true_nodes,
            "true_labels": [g.power(n).display_name() for n in true_nodes],
            "contexts_checked": len(result.scope),
            "summary": f"binary valuation found; true nodes: {true_nodes}",
        }
    return {
        "exists": False,
        "branches_explored": result.branches_explored,
        "contexts_checked": result.contexts_checked,
        "summary": f"no binary valuation exists; branches explored: {result.branches_explored}",
    }


def cmd_ks(spec: ScenarioSpec, budget: Optional[int] = None) -> Report:
    """Binary-valuation search over each power graph of the scenario"""
    graph_a, graph_b = build_graphs(spec)
    report = {"command": "ks", "scenario": spec.name, "echo": spec.to_dict(), "metadata": _metadata(spec)}
    if graph_b is None:
        report["ks"] = {"system": _ks_section(graph_a, spec, budget)}
    else:
        report["ks"] = {"a": _ks_section(graph_a, spec, budget), "b": _ks_section(graph_b, spec, budget)}
    for side, result in report["ks"].items():
        logger.info(f"{spec.name} ({side}): {result['summary']}")
    return report
