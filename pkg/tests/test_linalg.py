# tests/test_linalg.py

import numpy as np
import pytest

from src.linalg.kernel import (tensor_product, partial_trace, partial_transpose, eigen_hermitian,
                               commutator_norm, Side)
from src.linalg.operators import (DensityMatrix, HermitianOperator, as_complex_matrix, matrix_from_pairs,
                                  is_pure)
from src.scenario.presets import bell_state
from src.utils.config_loader import Settings
from src.utils.errors import DimensionError, NotHermitianError, InvalidStateError, NumericalError

from conftest import random_density


def test_tensor_product_matches_index_formula(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    expected = np.zeros((6, 6), dtype=complex)
    for i in range(2):
        for j in range(3):
            for k in range(2):
                for l in range(3):
                    expected[i * 3 + j, k * 3 + l] = a[i, k] * b[j, l]
    assert np.allclose(tensor_product(a, b), expected)


def test_tensor_product_of_vectors_is_a_vector():
    v = tensor_product(np.array([1, 0]), np.array([0, 1]))
    assert v.shape == (4,)
    assert np.allclose(v, [0, 1, 0, 0])


def test_tensor_product_respects_max_dim():
    with pytest.raises(DimensionError):
        tensor_product(np.eye(4), np.eye(2), Settings(max_dim=4))


def test_partial_trace_of_bell_state_is_maximally_mixed():
    rho = bell_state("bell_phi_plus")
    for side in (Side.A, Side.B):
        assert np.allclose(partial_trace(rho, (2, 2), side).matrix, np.eye(2) / 2)


def test_partial_trace_recovers_product_factors(rng):
    rho_a, rho_b = random_density(rng, 2), random_density(rng, 3)
    joint = DensityMatrix.from_matrix(np.kron(rho_a, rho_b))
    assert np.allclose(partial_trace(joint, (2, 3), Side.A).matrix, rho_a)
    assert np.allclose(partial_trace(joint, (2, 3), Side.B).matrix, rho_b)


def test_partial_trace_rejects_wrong_dims():
    with pytest.raises(DimensionError):
        partial_trace(bell_state("bell_phi_plus"), (2, 3), Side.A)


def test_partial_transpose_index_layout():
    m = np.arange(16).reshape(4, 4)
    assert np.array_equal(partial_transpose(m, (2, 2), Side.A).real,
                          [[0, 1, 8, 9], [4, 5, 12, 13], [2, 3, 10, 11], [6, 7, 14, 15]])
    assert np.array_equal(partial_transpose(m, (2, 2), Side.B).real,
                          [[0, 4, 2, 6], [1, 5, 3, 7], [8, 12, 10, 14], [9, 13, 11, 15]])


def test_partial_transpose_is_an_involution(rng):
    m = random_density(rng, 6)
    assert np.allclose(partial_transpose(partial_transpose(m, (2, 3)), (2, 3)), m)


def test_not_hermitian_reports_defect():
    with pytest.raises(NotHermitianError) as exc:
        HermitianOperator.from_matrix([[0, 1], [0, 0]])
    assert exc.value.message.startswith("hermiticity_defect=")
    assert exc.value.defect == pytest.approx(np.sqrt(2))


def test_trace_defect_is_named():
    with pytest.raises(InvalidStateError) as exc:
        DensityMatrix.from_matrix(np.diag([0.6, 0.5]))
    assert exc.value.message == "trace_defect=0.1"


def test_negative_eigenvalue_is_named():
    with pytest.raises(InvalidStateError) as exc:
        DensityMatrix.from_matrix(np.diag([1.2, -0.2]))
    assert exc.value.message.startswith("min_eigenvalue=-0.2")


def test_from_vector_checks_norm():
    with pytest.raises(InvalidStateError):
        DensityMatrix.from_vector([1, 1])
    assert is_pure(DensityMatrix.from_vector([0, 1]))
    assert not is_pure(DensityMatrix.from_matrix(np.eye(2) / 2))


def test_eigen_hermitian_sorts_descending():
    values, vectors = eigen_hermitian(np.diag([0.1, 0.7, 0.2]))
    assert np.allclose(values, [0.7, 0.2, 0.1])
    assert np.allclose(np.abs(vectors[:, 0]), [0, 1, 0])


def test_commutator_norm():
    z = np.diag([1, -1])
    x = np.array([[0, 1], [1, 0]])
    assert commutator_norm(z, z) == 0.0
    assert commutator_norm(z, x) == pytest.approx(np.linalg.norm(z @ x - x @ z))
    with pytest.raises(DimensionError):
        commutator_norm(z, np.eye(3))


def test_matrix_from_pairs():
    m = matrix_from_pairs([[[1, 0], [0, 1]], [[0, -1], [0, 0]]])
    assert np.array_equal(m, np.array([[1, 1j], [-1j, 0]]))
    with pytest.raises(DimensionError):
        matrix_from_pairs([[1, 0], [0, 1]])


def test_non_finite_entries_are_rejected():
    with pytest.raises(NumericalError):
        as_complex_matrix([[np.nan, 0], [0, 1]])
    with pytest.raises(DimensionError):
        as_complex_matrix(np.zeros((2, 3)), square=True)


def _random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


@pytest.mark.parametrize("d", range(1, 9))
def test_eigen_hermitian_reconstructs_random_matrices(rng, d):
    for _ in range(5):
        a = _random_hermitian(rng, d)
        values, vectors = eigen_hermitian(a)
        assert np.all(np.diff(values) <= 0)
        assert np.allclose(vectors.conj().T @ vectors, np.eye(d), atol=1e-10)
        rebuilt = (vectors * values) @ vectors.conj().T
        assert np.linalg.norm(a - rebuilt) <= 1e-8 * max(np.linalg.norm(a), 1.0)


def test_eigenvectors_of_sigma_x_are_plus_and_minus():
    values, vectors = eigen_hermitian(np.array([[0, 1], [1, 0]]))
    assert np.allclose(values, [1, -1])
    plus, minus = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)
    assert abs(np.vdot(plus, vectors[:, 0])) == pytest.approx(1.0)
    assert abs(np.vdot(minus, vectors[:, 1])) == pytest.approx(1.0)


@pytest.mark.parametrize("d", [2, 5, 8])
def test_commutator_norm_is_symmetric_and_vanishes_on_polynomials(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    assert commutator_norm(a, b) == pytest.approx(commutator_norm(b, a))
    poly = a @ a @ a - 2 * a @ a + 3 * np.eye(d)
    scale = np.linalg.norm(a) * np.linalg.norm(poly)
    assert commutator_norm(a, poly) <= 1e-8 * scale
    assert commutator_norm(a, np.eye(d)) <= 1e-12


def test_tensor_product_mixed_product_property(rng):
    a, c = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(2))
    b, d = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(2))
    left = tensor_product(a, b) @ tensor_product(c, d)
    assert np.allclose(left, tensor_product(a @ c, b @ d), atol=1e-12)


def test_phi_plus_has_unit_zz_correlation():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    zz = tensor_product(np.diag([1, -1]), np.diag([1, -1]))
    assert np.vdot(phi, zz @ phi).real == pytest.approx(1.0)
