# src/sampler/sampler.py

import math
from typing import Optional

import numpy as np
from tqdm import tqdm

from .models import ExperimentRun, ConvergenceReport
from ..powers.models import Context
from ..relations.models import JointScenario, EffectiveWitness
from ..relations.effective import joint_outcome_distribution, tested_pairs, evaluate_pair, aggregate
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import SamplingError
from ..utils.logger import get_logger

logger = get_logger("sampler")

MIN_SHOTS_FOR_VERDICT = 100


def _generator(seed: int, pair_index: int, batch_index: int) -> np.random.Generator:
    """Counter-based substream keyed on (seed, pair index, batch index)"""
    sequence = np.random.SeedSequence(seed, spawn_key=(pair_index, batch_index))
    return np.random.Generator(np.random.Philox(sequence))


def _sampling_distribution(s: JointScenario, c1: Context, c2: Context, settings: Settings) -> np.ndarray:
    p = joint_outcome_distribution(s, c1, c2, settings)
    p = np.where(p <= settings.tol_num, 0.0, p)
    return p / p.sum()


def sample_joint(s: JointScenario, c1: Context, c2: Context, shots: int, seed: int,
                 pair_index: int = 0, settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """
    Draw `shots` outcome pairs jointly from the exact joint distribution of (c1, c2).

    Shots are split into batches of settings.batch_size, each with its own Philox
    substream, and the per-batch tallies are summed, so the result only depends on
    (seed, pair_index, shots, inputs).

    Returns:
        np.ndarray: integer count matrix, rows c1.node_ids, columns c2.node_ids
    """
    if shots < 1:
        raise SamplingError(f"shots must be positive, got {shots}")
    if not 0 <= seed < 2 ** 64:
        raise SamplingError(f"seed must be an unsigned 64-bit integer, got {seed}")
    p = _sampling_distribution(s, c1, c2, settings)
    flat = p.reshape(-1)
    counts = np.zeros(flat.size, dtype=np.int64)
    batches = math.ceil(shots / settings.batch_size)
    remaining = shots
    for batch_index in tqdm(range(batches), desc="Sampling", unit="batch", leave=False,
                            disable=None if batches > 1 else True):
        size = min(settings.batch_size, remaining)
        counts += _generator(seed, pair_index, batch_index).multinomial(size, flat)
        remaining -= size
    return counts.reshape(p.shape)


def run_experiment(s: JointScenario, shots: int, seed: int, settings: Settings = DEFAULT_SETTINGS) -> ExperimentRun:
    """Sample every tested context pair of the scenario"""
    pairs = tuple(tested_pairs(s, settings))
    tallies = {}
    for index, pair in enumerate(pairs):
        tallies[pair.label] = sample_joint(s, pair.context_a, pair.context_b, shots, seed, index, settings)
    logger.info(f"Sampled {shots} shots for {len(pairs)} context pairs of '{s.name}' (seed {seed})")
    return ExperimentRun(scenario=s, seed=seed, shots=shots, pairs=pairs, tallies=tallies)


def _z_worst(counts: np.ndarray, p: np.ndarray, shots: int) -> float:
    expected = shots * p
    worst = 0.0
    for c, e, q in zip(counts.reshape(-1), expected.reshape(-1), p.reshape(-1)):
        if 0.0 < q < 1.0:
            worst = max(worst, abs(c - e) / math.sqrt(shots * q * (1.0 - q)))
        elif c != round(e):
            worst = math.inf
    return worst


def empirical_verdict(run: ExperimentRun, stat_threshold: Optional[float] = None,
                      settings: Settings = DEFAULT_SETTINGS) -> ConvergenceReport:
    """
    Judge the effective relation from sampled frequencies.

    The best outcome function must capture at least 1 - stat_threshold of the empirical
    mass on every tested pair (aggregated the same way as the exact decider).
    Total variation distances and the largest standardised deviation are measured
    against the exact joint distribution.
    """
    threshold = settings.stat_threshold if stat_threshold is None else stat_threshold
    if run.shots < MIN_SHOTS_FOR_VERDICT:
        raise SamplingError(f"an empirical verdict needs at least {MIN_SHOTS_FOR_VERDICT} shots, got {run.shots}")

    tv_distances, captured, outcomes = {}, {}, []
    z_worst = 0.0
    for pair in run.pairs:
        counts = run.tallies[pair.label]
        frequencies = counts / run.shots
        exact = _sampling_distribution(run.scenario, pair.context_a, pair.context_b, settings)
        tv_distances[pair.label] = min(1.0, 0.5 * float(np.abs(frequencies - exact).sum()))
        z_worst = max(z_worst, _z_worst(counts, exact, run.shots))
        outcome = evaluate_pair(frequencies, pair, threshold)
        captured[pair.label] = outcome.captured_mass
        outcomes.append(outcome)

    verdict = aggregate(outcomes, run.scenario.mode)
    return ConvergenceReport(per_pair_tv_distance=tv_distances,
                             empirical_effective=isinstance(verdict, EffectiveWitness),
                             z_worst=z_worst, stat_threshold=threshold,
                             per_pair_captured_mass=captured)
