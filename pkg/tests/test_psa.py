# tests/test_psa.py

import numpy as np
import pytest

from src.linalg.kernel import projector_onto
from src.linalg.operators import DensityMatrix
from src.powers.bases import computational, fourier, mutually_unbiased_bases
from src.powers.graph import generate_graph_from_bases, maximal_contexts
from src.powers.models import Context
from src.psa.models import PSASource
from src.psa.valuation import (psa_from_density, explicit_psa, density_from_psa, vector_from_psa,
                               restrict_psa, effective_distribution, born_potentia)
from src.scenario.parser import build_graphs
from src.utils.errors import (NotTomographicallyCompleteError, InconsistentPSAError, InvalidStateError,
                              InvalidPSAError, NonExhaustiveContextError, DimensionError)

from conftest import load_spec, random_density


def test_born_values_of_zero_ket(qubit_zx_graph):
    psa = psa_from_density(DensityMatrix.from_vector([1, 0]), qubit_zx_graph)
    assert psa.source is PSASource.FROM_DENSITY
    assert np.allclose(psa.potentia, [1, 0, 0.5, 0.5])
    assert psa.table()[2] == (2, "x+", pytest.approx(0.5))


def test_born_value_dimension_mismatch(qubit_zx_graph):
    with pytest.raises(DimensionError):
        born_potentia(DensityMatrix.from_matrix(np.eye(3) / 3), qubit_zx_graph.power(0))


def test_plus_i_over_qubit_mubs():
    spec = load_spec("qubit_plus_i")
    graph, _ = build_graphs(spec)
    psa = psa_from_density(spec.state, graph)
    assert graph.labels() == ["z0", "z1", "x+", "x-", "y+", "y-"]
    assert np.allclose(psa.potentia, [0.5, 0.5, 0.5, 0.5, 1.0, 0.0])


def test_every_identity_resolving_context_sums_to_one(rng):
    graph = generate_graph_from_bases(mutually_unbiased_bases(3))
    psa = psa_from_density(DensityMatrix.from_matrix(random_density(rng, 3)), graph)
    for context in maximal_contexts(graph):
        assert sum(psa.value(i) for i in context.node_ids) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3])
def test_reconstruction_recovers_random_states(d):
    rng = np.random.default_rng(100 + d)
    graph = generate_graph_from_bases(mutually_unbiased_bases(d))
    for _ in range(50):
        rho = DensityMatrix.from_matrix(random_density(rng, d))
        recovered = density_from_psa(psa_from_density(rho, graph), d)
        assert np.linalg.norm(recovered.matrix - rho.matrix) <= 1e-8


def test_reconstruction_of_die_over_its_faces_is_incomplete():
    spec = load_spec("die")
    graph, _ = build_graphs(spec)
    with pytest.raises(NotTomographicallyCompleteError) as exc:
        density_from_psa(psa_from_density(spec.state, graph), 6)
    assert (exc.value.rank, exc.value.needed) == (6, 36)


def test_reconstruction_needs_a_spanning_graph():
    graph = generate_graph_from_bases([computational(2)])
    psa = psa_from_density(DensityMatrix.from_vector([1, 0]), graph)
    with pytest.raises(NotTomographicallyCompleteError) as exc:
        density_from_psa(psa, 2)
    assert (exc.value.rank, exc.value.needed) == (2, 4)


def test_vector_from_psa_fixes_global_phase(qubit_zxy_graph):
    psa = psa_from_density(DensityMatrix.from_vector(np.array([1j, -1]) / np.sqrt(2)), qubit_zxy_graph)
    assert np.allclose(vector_from_psa(psa, 2), np.array([1, 1j]) / np.sqrt(2))


def test_vector_from_psa_rejects_mixed_states(qubit_zxy_graph):
    psa = psa_from_density(DensityMatrix.from_matrix(np.eye(2) / 2), qubit_zxy_graph)
    with pytest.raises(InvalidStateError):
        vector_from_psa(psa, 2)


def test_sharp_values_on_three_bases_are_not_a_state(qubit_zxy_graph):
    psa = explicit_psa(qubit_zxy_graph, [1, 0, 1, 0, 1, 0])
    assert psa.source is PSASource.EXPLICIT
    with pytest.raises(InconsistentPSAError):
        density_from_psa(psa, 2)


def test_explicit_psa_validation(qubit_zx_graph):
    with pytest.raises(InvalidPSAError):
        explicit_psa(qubit_zx_graph, [1, 0, 0.5])
    with pytest.raises(InvalidPSAError):
        explicit_psa(qubit_zx_graph, [1.5, -0.5, 0.5, 0.5])
    with pytest.raises(InvalidPSAError):
        explicit_psa(qubit_zx_graph, [0.5, 0.4, 0.5, 0.5])
    assert explicit_psa(qubit_zx_graph, [0.25, 0.75, 1, 0]).value(1) == 0.75


def test_restriction_to_a_context(qubit_zx_graph):
    psa = psa_from_density(DensityMatrix.from_vector([1, 0]), qubit_zx_graph)
    restricted = restrict_psa(psa, maximal_contexts(qubit_zx_graph)[1])
    assert len(restricted.graph) == 2
    assert restricted.graph.labels() == ["x+", "x-"]
    assert np.allclose(restricted.potentia, [0.5, 0.5])


def test_effective_distribution_of_die():
    spec = load_spec("die")
    graph, _ = build_graphs(spec)
    psa = psa_from_density(spec.state, graph)
    distribution = effective_distribution(psa, maximal_contexts(graph)[0])
    assert distribution.outcomes() == tuple(range(6))
    assert np.allclose(list(distribution.probabilities.values()), 1 / 6)


def test_effective_distribution_needs_a_resolving_context(qubit_zx_graph):
    psa = psa_from_density(DensityMatrix.from_vector([1, 0]), qubit_zx_graph)
    with pytest.raises(NonExhaustiveContextError):
        effective_distribution(psa, Context(node_ids=(0,), is_maximal=False, resolves_identity=False))


def _graph_for(d: int):
    if d == 4:
        return generate_graph_from_bases([computational(4), fourier(4)])
    return generate_graph_from_bases(mutually_unbiased_bases(d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_contexts_sum_to_one_for_random_states(d):
    rng = np.random.default_rng(200 + d)
    graph = _graph_for(d)
    contexts = [c for c in maximal_contexts(graph) if c.resolves_identity]
    assert contexts
    for _ in range(200):
        psa = psa_from_density(DensityMatrix.from_matrix(random_density(rng, d)), graph)
        for context in contexts:
            assert sum(psa.value(i) for i in context.node_ids) == pytest.approx(1.0, abs=1e-12)


def _completion(rng, v):
    """An orthonormal basis whose first column is v, the rest drawn at random"""
    d = v.shape[0]
    columns = np.column_stack([v] + [rng.standard_normal(d) + 1j * rng.standard_normal(d) for _ in range(d - 1)])
    q, r = np.linalg.qr(columns)
    q[:, 0] = v
    return q


@pytest.mark.parametrize("d", [3, 4])
def test_potentia_does_not_depend_on_the_surrounding_basis(d):
    rng = np.random.default_rng(300 + d)
    for _ in range(50):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        rho = DensityMatrix.from_matrix(random_density(rng, d))
        target = projector_onto(v)
        values = []
        for basis in (_completion(rng, v), _completion(rng, v * np.exp(0.7j))):
            graph = generate_graph_from_bases([basis, computational(d)])
            node = graph.locate(target, 1e-8)
            assert node is not None
            values.append(psa_from_density(rho, graph).value(node))
        assert abs(values[0] - values[1]) <= 1e-12
