import numpy as np
import pytest

from compact import normalize_spectrum
from errors import NormalityError, NotCyclicError, ResolutionError, ValidationError
from selection import build_selection
from spectral import (AtomicMeasure, NormalMatrix, build_model, build_transport, hermitian_model,
                      intertwining_error, lift, polynomial_check, pushforward, random_normal,
                      random_unitary, reconstruct, reconstruction_bound, reconstruction_error,
                      unit_vector)
from tests.conftest import roots_of_unity_normal


def model_chain(a, depth, x=None):
    """A -> (mu, gamma, T, B, phi_d(B)) at the given depth"""
    model = build_model(NormalMatrix.from_array(a), x)
    frame, cover = normalize_spectrum(model.atom_values, depth)
    table = build_selection(cover)
    mu = model.measure
    gamma = pushforward(mu, table, frame)
    return model, frame, table, mu, gamma


def test_non_normal_input_is_rejected():
    with pytest.raises(NormalityError, match='normality check failed') as e:
        NormalMatrix.from_array([[0, 1], [0, 0]])
    assert e.value.exit_code == 3


def test_non_square_input_is_rejected():
    with pytest.raises(ValidationError):
        NormalMatrix.from_array(np.zeros((2, 3)))


def test_matrix_json_round_trip(rng):
    a = NormalMatrix.from_array(random_normal(4, rng))
    assert np.allclose(NormalMatrix.from_dict(a.to_dict()).entries, a.entries)


def test_diagonal_model():
    model = build_model(NormalMatrix.from_array(np.diag([1j, -1j])))
    assert np.allclose(model.atom_values, [-1j, 1j])
    assert np.allclose(model.weights, [0.5, 0.5])
    assert model.is_cyclic
    assert model.multiplication_residual() < 1e-12


def test_repeated_eigenvalues_merge_into_one_atom():
    model = build_model(NormalMatrix.from_array(np.eye(3)))
    assert len(model.atom_values) == 1
    assert model.weights.tolist() == pytest.approx([1.0])
    assert not model.is_cyclic
    with pytest.raises(NotCyclicError):
        model.cyclic_basis()


def test_orthogonal_vector_is_not_cyclic():
    with pytest.raises(NotCyclicError, match='not cyclic for this vector'):
        build_model(NormalMatrix.from_array(np.diag([1.0, 2.0])), np.array([1, 0], dtype=complex))


def test_vector_choices():
    assert np.allclose(unit_vector(4), np.full(4, 0.5))
    assert np.allclose(unit_vector(2, '3,4'), [0.6, 0.8])
    with pytest.raises(ValidationError):
        unit_vector(3, '1,2')
    with pytest.raises(ValidationError):
        unit_vector(2, '0,0')


@pytest.mark.parametrize('solver', ['schur', 'eig'])
def test_eigenpairs_reproduce_random_normal(rng, solver):
    model = build_model(NormalMatrix.from_array(random_normal(8, rng)), solver=solver)
    assert model.eigen_residual() < 1e-10
    assert model.unitarity_defect() < 1e-10
    assert model.measure.total_mass == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize('depth', [3, 4, 5])
def test_reconstruction_within_one_cell(rng, depth):
    for _ in range(20):
        n = int(rng.integers(1, 17))
        model, frame, table, mu, gamma = model_chain(random_normal(n, rng), depth)
        phi_b = reconstruct(hermitian_model(gamma), table, frame)
        assert reconstruction_error(mu, gamma, phi_b, table, frame) <= reconstruction_bound(frame, depth)


def test_pushforward_keeps_mass(rng):
    _, _, _, mu, gamma = model_chain(random_normal(10, rng), 3)
    assert gamma.total_mass == pytest.approx(mu.total_mass, abs=1e-12)
    assert np.all(np.diff(gamma.labels) > 0)


def test_transport_is_unitary(rng):
    model, frame, table, mu, gamma = model_chain(roots_of_unity_normal(8, rng), 3)
    transport = build_transport(mu, gamma, table, frame)
    assert transport.unitarity_defect() < 1e-12
    for _ in range(100):
        g = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert transport.norm_ratio(g) == pytest.approx(1.0, abs=1e-12)


def test_transport_adjoint_identity(rng):
    _, frame, table, mu, gamma = model_chain(roots_of_unity_normal(6, rng), 3)
    transport = build_transport(mu, gamma, table, frame)
    g = rng.normal(size=6) + 1j * rng.normal(size=6)
    f = rng.normal(size=6) + 1j * rng.normal(size=6)
    lhs = np.sum(mu.weights * transport.apply(g) * f.conj())
    rhs = np.sum(gamma.weights * g * transport.adjoint_apply(f).conj())
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert np.allclose(transport.apply(transport.adjoint_apply(f)), f, atol=1e-12)


def test_colliding_eigenvalues_need_more_depth():
    a = np.diag([0.0, 1e-4, 1.0])
    _, frame, table, mu, gamma = model_chain(a, 1)
    assert len(gamma) < len(mu)
    with pytest.raises(ResolutionError, match='increase --depth'):
        build_transport(mu, gamma, table, frame)


def test_intertwining_and_lift(rng):
    depth = 4
    a = roots_of_unity_normal(5, rng)
    model, frame, table, mu, gamma = model_chain(a, depth)
    transport = build_transport(mu, gamma, table, frame)
    phi_b = reconstruct(hermitian_model(gamma), table, frame)
    bound = reconstruction_bound(frame, depth)
    assert intertwining_error(mu, transport, phi_b) <= bound + 1e-12
    lifted = lift(model, transport, phi_b)
    assert np.linalg.norm(a - lifted, 2) <= bound + 1e-8 * model.matrix.norm


def test_polynomial_functions_of_the_model(rng):
    a = roots_of_unity_normal(4, rng)
    model, frame, table, mu, gamma = model_chain(a, 5)
    transport = build_transport(mu, gamma, table, frame)
    phi_b = reconstruct(hermitian_model(gamma), table, frame)
    coarse = reconstruction_bound(frame, 5)
    # p(z) = 1 + z^2 is 2-Lipschitz on the unit disk plus one cell
    assert polynomial_check(model, transport, phi_b, [1, 0, 1]) <= 2.5 * coarse


def test_hermitian_model_needs_unit_interval():
    with pytest.raises(ValidationError):
        hermitian_model(AtomicMeasure(np.array([1.5]), np.array([1.0])))


def test_weights_are_squared_eigenvector_overlaps(rng):
    q = random_unitary(6, rng)
    eigs = np.array([0.5, 1j, -1.0, -0.7j, 1 + 1j, 0.2 - 0.3j])
    x = unit_vector(6, 'random', rng)
    model = build_model(NormalMatrix.from_array(q @ np.diag(eigs) @ q.conj().T), x)
    expected = np.abs(q.conj().T @ x) ** 2
    for value, weight in zip(eigs, expected):
        k = int(np.argmin(np.abs(model.atom_values - value)))
        assert model.weights[k] == pytest.approx(weight, abs=1e-10)
    assert model.weights.sum() == pytest.approx(1.0)
