# src/report/report_writer.py

import io
import json
import math
import os
from typing import Dict, Any, Optional, List

import numpy as np
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ..psa.models import PSA
from ..relations.models import RelationVerdict, NotRelated, PairOutcome
from ..sampler.models import ConvergenceReport, ExperimentRun
from ..utils.logger import get_logger

logger = get_logger("report")

SIGNIFICANT_DIGITS = 12


def _round(value: float):
    # non-finite floats, e.g. an unbounded z-score, are written as strings
    if not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    rounded = float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    return 0.0 if rounded == 0 else rounded


def normalise(value: Any) -> Any:
    """Recursively convert numpy values and round floats to 12 significant digits"""
    if isinstance(value, dict):
        return {str(k): normalise(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalise(v) for v in value]
    if isinstance(value, np.ndarray):
        return normalise(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return [_round(value.real), _round(value.imag)]
    return value


def dumps(report: Dict[str, Any]) -> str:
    """Deterministic JSON: sorted keys, fixed float precision"""
    return json.dumps(normalise(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def psa_rows(psa: PSA) -> List[Dict[str, Any]]:
    return [{"id": node_id, "label": label, "potentia": value} for node_id, label, value in psa.table()]


def _not_related(failure: NotRelated) -> Dict[str, Any]:
    return {"reason": failure.reason.value, "detail": failure.detail,
            "worst_pair": failure.worst_pair, "leak": failure.leak}


def _pair_outcome(outcome: PairOutcome) -> Dict[str, Any]:
    return {"label": outcome.pair.label, "outcome_map": list(outcome.outcome_map),
            "captured_mass": outcome.captured_mass, "leak": outcome.leak,
            "dependence": outcome.dependence, "sign": outcome.sign.value}


def verdict_section(verdict: RelationVerdict) -> Dict[str, Any]:
    section = {
        "classification": verdict.classification.value,
        "intensive": verdict.intensive,
        "effective": verdict.effective,
        "intensive_witness": None,
        "intensive_failure": None,
        "effective_witness": None,
        "effective_failure": None,
        "baselines": {
            "schmidt_rank": verdict.baselines.schmidt_rank,
            "ppt_separable": verdict.baselines.ppt_separable,
            "ppt_conclusive": verdict.baselines.ppt_conclusive,
        },
    }
    if verdict.intensive_witness:
        section["intensive_witness"] = {"mapping": verdict.intensive_witness.mapping,
                                        "max_potentia_gap": verdict.intensive_witness.max_potentia_gap}
    if verdict.intensive_failure:
        section["intensive_failure"] = _not_related(verdict.intensive_failure)
    if verdict.effective_witness:
        witness = verdict.effective_witness
        section["effective_witness"] = {"correlation_sign": witness.correlation_sign.value,
                                        "max_leak": witness.max_leak,
                                        "pairs": [_pair_outcome(o) for o in witness.pair_outcomes]}
    if verdict.effective_failure:
        section["effective_failure"] = _not_related(verdict.effective_failure)
    return section


def sampling_section(run: ExperimentRun, convergence: ConvergenceReport) -> Dict[str, Any]:
    return {
        "shots": run.shots,
        "seed": run.seed,
        "prng": run.prng,
        "tallies": {pair.label: {"rows": list(pair.context_a.node_ids), "columns": list(pair.context_b.node_ids),
                                 "counts": run.tallies[pair.label]} for pair in run.pairs},
        "convergence": {
            "empirical_effective": convergence.empirical_effective,
            "stat_threshold": convergence.stat_threshold,
            "z_worst": convergence.z_worst,
            "per_pair_tv_distance": convergence.per_pair_tv_distance,
            "per_pair_captured_mass": convergence.per_pair_captured_mass,
        },
    }


class ReportWriter:
    """Writes reports as JSON (the contract) or as rich tables"""

    def __init__(self, out_path: Optional[str] = None, fmt: str = "json"):
        self.out_path = out_path
        self.fmt = fmt

    def write(self, report: Dict[str, Any]):
        text = dumps(report) if self.fmt == "json" else self.render_table(report)
        if self.out_path:
            directory = os.path.dirname(self.out_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.out_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
            logger.info(f"Report written to {self.out_path}")
        else:
            print(text, end="")

    def render_table(self, report: Dict[str, Any]) -> str:
        """Human-readable rendering of a report"""
        buffer = io.StringIO()
        console = Console(file=buffer, width=110, force_terminal=False, color_system=None)
        self._render(console, normalise(report))
        return buffer.getvalue()

    def _render(self, console: Console, report: Dict[str, Any]):
        title = f"{report.get('command', 'report')}: {report.get('scenario', '')}"
        console.print(Panel(title, style="bold blue"))

        verdict = report.get("verdict")
        if verdict:
            table = Table(title="Verdict", show_header=True)
            table.add_column("Classification")
            table.add_column("Intensive")
            table.add_column("Effective")
            table.add_column("Schmidt rank")
            table.add_column("PPT separable")
            baselines = verdict["baselines"]
            table.add_row(verdict["classification"], str(verdict["intensive"]), str(verdict["effective"]),
                          str(baselines["schmidt_rank"]), str(baselines["ppt_separable"]))
            console.print(table)
            for key in ("intensive_failure", "effective_failure"):
                if verdict.get(key):
                    failure = verdict[key]
                    console.print(f"{key.replace('_', ' ')}: {failure['reason']} {failure['detail']}")

        for side, rows in sorted(report.get("psa_tables", {}).items()):
            table = Table(title=f"PSA side {side}")
            table.add_column("Node", justify="right")
            table.add_column("Label")
            table.add_column("Potentia", justify="right")
            for row in rows:
                table.add_row(str(row["id"]), str(row["label"]), f"{row['potentia']:.6f}")
            console.print(table)

        for label, joint in sorted(report.get("joint_tables", {}).items()):
            table = Table(title=f"Joint distribution {label}")
            table.add_column("a \\ b")
            for column in joint["columns"]:
                table.add_column(str(column), justify="right")
            for row_id, values in zip(joint["rows"], joint["probabilities"]):
                table.add_row(str(row_id), *(f"{v:.6f}" for v in values))
            console.print(table)

        for side, graph in sorted(report.get("graphs", {}).items()):
            table = Table(title=f"Maximal contexts ({side}, {graph['node_count']} nodes)")
            table.add_column("Nodes")
            table.add_column("Resolves identity")
            for context in graph["maximal_contexts"]:
                table.add_row(", ".join(str(n) for n in context["node_ids"]), str(context["resolves_identity"]))
            console.print(table)

        for side, result in sorted(report.get("ks", {}).items()):
            console.print(f"binary valuation ({side}): {result['summary']}")

        sampling = report.get("sampling")
        if sampling:
            convergence = sampling["convergence"]
            table = Table(title=f"Sampling ({sampling['shots']} shots, seed {sampling['seed']})")
            table.add_column("Pair")
            table.add_column("TV distance", justify="right")
            table.add_column("Captured mass", justify="right")
            for label, distance in sorted(convergence["per_pair_tv_distance"].items()):
                table.add_row(label, f"{distance:.6f}", f"{convergence['per_pair_captured_mass'][label]:.6f}")
            console.print(table)
            console.print(f"empirical effective: {convergence['empirical_effective']}, "
                          f"worst z: {convergence['z_worst']}")
