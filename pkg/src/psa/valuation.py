# src/psa/valuation.py

from typing import Sequence

import numpy as np

from .models import PSA, PSASource, EffectiveDistribution
from ..linalg.operators import DensityMatrix
from ..linalg.kernel import eigen_hermitian
from ..powers.models import Power, PowerGraph, Context
from ..powers.graph import maximal_contexts
from ..utils.config_loader import Settings, DEFAULT_SETTINGS
from ..utils.errors import (DimensionError, NumericalError, InvalidPSAError, InvalidStateError,
                            NotTomographicallyCompleteError, InconsistentPSAError,
                            NonExhaustiveContextError, GraphError)
from ..utils.logger import get_logger

logger = get_logger("psa")


def born_potentia(rho: DensityMatrix, p: Power, settings: Settings = DEFAULT_SETTINGS) -> float:
    """
    Born rule Tr(rho P), clamped into [0, 1] when within tol_num of the boundary.

    Raises:
        DimensionError: rho and P act on different dimensions
        NumericalError: value outside [-tol_num, 1 + tol_num]
    """
    if rho.dim != p.projector.dim:
        raise DimensionError(f"state of dimension {rho.dim} cannot value a power of dimension {p.projector.dim}")
    value = float(np.real(np.trace(rho.matrix @ p.matrix)))
    if value < -settings.tol_num or value > 1.0 + settings.tol_num:
        raise NumericalError(f"Born value {value:.12g} for {p.display_name()} is outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def psa_from_density(rho: DensityMatrix, g: PowerGraph, settings: Settings = DEFAULT_SETTINGS) -> PSA:
    """Assign every power of the graph its Born potentia under rho"""
    potentia = tuple(born_potentia(rho, power, settings) for power in g.powers)
    return PSA(graph=g, potentia=potentia, source=PSASource.FROM_DENSITY, density=rho)


def explicit_psa(g: PowerGraph, values: Sequence[float], settings: Settings = DEFAULT_SETTINGS) -> PSA:
    """
    PSA from explicitly given potentia, one per node in node order.

    Raises:
        InvalidPSAError: wrong length, value outside [0, 1], or an identity-resolving
            context whose potentia do not sum to 1
    """
    values = tuple(float(v) for v in values)
    if len(values) != len(g):
        raise InvalidPSAError(f"expected {len(g)} potentia values, got {len(values)}")
    for node_id, value in enumerate(values):
        if not 0.0 <= value <= 1.0:
            raise InvalidPSAError(f"potentia of node {node_id} is {value:.12g}, outside [0, 1]")
    for context in maximal_contexts(g, settings):
        if context.resolves_identity:
            total = sum(values[i] for i in context.node_ids)
            if abs(total - 1.0) > settings.tol_num:
                raise InvalidPSAError(f"context {context.node_ids} sums to {total:.12g}, expected 1")
    return PSA(graph=g, potentia=values, source=PSASource.EXPLICIT)


def _design_row(matrix: np.ndarray) -> np.ndarray:
    """Real coefficients of Tr(rho P) in the parameters (rho_aa, Re rho_ab, Im rho_ab) for a < b"""
    d = matrix.shape[0]
    upper = np.triu_indices(d, k=1)
    return np.concatenate([
        np.real(np.diag(matrix)),
        2.0 * np.real(matrix[upper]),
        2.0 * np.imag(matrix[upper]),
    ])


def _assemble(parameters: np.ndarray, d: int) -> np.ndarray:
    upper = np.triu_indices(d, k=1)
    m = len(upper[0])
    rho = np.diag(parameters[:d]).astype(np.complex128)
    rho[upper] = parameters[d:d + m] + 1j * parameters[d + m:]
    lower = (upper[1], upper[0])
    rho[lower] = np.conj(rho[upper])
    return rho


def density_from_psa(psa: PSA, dim: int, settings: Settings = DEFAULT_SETTINGS) -> DensityMatrix:
    """
    Recover the unique density matrix whose Born values reproduce the PSA.

    Solves the linear system Tr(rho P_i) = Psi(P_i) by least squares over the d^2 real
    parameters of a Hermitian matrix, then projects onto the PSD trace-one cone when the
    defects are within tol_psd.

    Raises:
        NotTomographicallyCompleteError: the projectors do not span the Hermitian operators
        InconsistentPSAError: residual above tol_recon, or the solution is not a state
    """
    g = psa.graph
    if g.dim != dim:
        raise DimensionError(f"PSA graph has dimension {g.dim}, requested {dim}")
    design = np.array([_design_row(p.matrix) for p in g.powers])
    targets = np.array(psa.potentia)
    needed = dim * dim
    rank = int(np.linalg.matrix_rank(design))
    if rank < needed:
        raise NotTomographicallyCompleteError(rank, needed)

    parameters, _, _, _ = np.linalg.lstsq(design, targets, rcond=None)
    residual = float(np.linalg.norm(design @ parameters - targets))
    if residual > settings.tol_recon:
        raise InconsistentPSAError(f"reconstruction residual {residual:.12g} exceeds tol_recon", residual)

    rho = _assemble(parameters, dim)
    rho = (rho + rho.conj().T) / 2
    values, vectors = eigen_hermitian(rho)
    trace_defect = abs(float(values.sum()) - 1.0)
    if values[-1] < -settings.tol_psd or trace_defect > settings.tol_psd:
        raise InconsistentPSAError(
            f"reconstructed operator is not a state (min eigenvalue {values[-1]:.12g}, "
            f"trace defect {trace_defect:.12g})", residual)
    if values[-1] < 0 or trace_defect > 0:
        clipped = np.clip(values, 0.0, None)
        clipped = clipped / clipped.sum()
        rho = (vectors * clipped) @ vectors.conj().T
    logger.debug(f"Reconstructed density matrix of dimension {dim} (residual {residual:.3e})")
    return DensityMatrix.from_matrix(rho, settings)


def vector_from_psa(psa: PSA, dim: int, settings: Settings = DEFAULT_SETTINGS) -> np.ndarray:
    """
    Recover the normalised vector behind a pure-state PSA.
    The global phase is fixed so that the first non-negligible component is real and positive.

    Raises:
        InvalidStateError: the reconstructed state is not pure
    """
    rho = density_from_psa(psa, dim, settings)
    values, vectors = eigen_hermitian(rho)
    if values[0] < 1.0 - settings.tol_recon:
        raise InvalidStateError(f"PSA describes a mixed state (largest eigenvalue {values[0]:.12g})")
    vector = vectors[:, 0]
    lead = vector[np.flatnonzero(np.abs(vector) > settings.tol_num)[0]]
    return vector * (np.conj(lead) / abs(lead))


def restrict_psa(psa: PSA, context: Context) -> PSA:
    """The restriction of a PSA to one context, as a PSA over the induced subgraph"""
    for node_id in context.node_ids:
        if node_id >= len(psa.graph):
            raise GraphError(f"node {node_id} is not in the PSA's graph")
    subgraph = psa.graph.subgraph(context.node_ids)
    potentia = tuple(psa.potentia[i] for i in context.node_ids)
    return PSA(graph=subgraph, potentia=potentia, source=psa.source, density=psa.density)


def effective_distribution(psa: PSA, c: Context) -> EffectiveDistribution:
    """
    Law of the effective valuation over a context: outcome P_k with probability Psi(P_k).

    Raises:
        NonExhaustiveContextError: the context does not resolve the identity
    """
    if not c.resolves_identity:
        raise NonExhaustiveContextError(f"context {c.node_ids} does not resolve the identity")
    for node_id in c.node_ids:
        if node_id >= len(psa.graph):
            raise GraphError(f"node {node_id} is not in the PSA's graph")
    return EffectiveDistribution(context=c, probabilities={i: psa.potentia[i] for i in c.node_ids})
