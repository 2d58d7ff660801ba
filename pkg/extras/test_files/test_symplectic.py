"""
Tests for symplectic core types, Bloch-Messiah and the triviality classifier
"""
import numpy as np
import pytest
from scipy.stats import ortho_group, unitary_group

from symplectic import (
    PassivePair,
    QuadSymplectic,
    ModeUnitary,
    bloch_messiah,
    classify_trivial,
    is_symplectic,
    normalize_postprocessing,
    omega,
    unitary_to_quad_symplectic,
)
from utils.errors import DimensionMismatch, InvalidFactor, NonUnitary, NotSymplectic

PHI = (1 + np.sqrt(5)) / 2
CZ = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 1.0, 1.0, 0.0],
    [1.0, 0.0, 0.0, 1.0],
])
FOURIER = np.array([[0.0, -1.0], [1.0, 0.0]])


def random_unitary(n_modes, rng):
    if n_modes == 1:
        return np.array([[np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))]])
    return unitary_group.rvs(n_modes, random_state=rng)


def random_orthogonal(n_modes, rng):
    if n_modes == 1:
        return np.array([[rng.choice([-1.0, 1.0])]])
    return ortho_group.rvs(n_modes, random_state=rng)


def random_passive(n_modes, rng):
    return unitary_to_quad_symplectic(random_unitary(n_modes, rng)).matrix


def measurement_factor(n_modes, rng):
    """[[O, 0], [0, O]] . diag(R^-1, R) with random O and positive diagonal R."""
    O = random_orthogonal(n_modes, rng)
    R = np.diag(rng.uniform(0.3, 3.0, n_modes))
    zeros = np.zeros((n_modes, n_modes))
    return np.block([[O, zeros], [zeros, O]]) @ np.block([[np.linalg.inv(R), zeros], [zeros, R]])


def test_identity_unitary_maps_to_identity():
    S = unitary_to_quad_symplectic(np.eye(2))
    assert np.array_equal(S.matrix, np.eye(4))


def test_phase_shift_is_fourier_matrix():
    S = unitary_to_quad_symplectic(np.array([[1j]]))
    assert np.allclose(S.matrix, FOURIER)


def test_haar_unitary_is_symplectic():
    S = unitary_to_quad_symplectic(unitary_group.rvs(4, random_state=7))
    assert is_symplectic(S.matrix, tol=1e-10)


def test_is_symplectic_examples():
    assert is_symplectic(np.eye(4), tol=1e-12)
    assert is_symplectic(CZ, tol=1e-12)
    assert not is_symplectic(2 * np.array([[1.0, 1.0], [0.0, 1.0]]), tol=1e-12)


def test_constructors_reject_invalid_matrices():
    with pytest.raises(NonUnitary):
        ModeUnitary(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DimensionMismatch):
        QuadSymplectic(np.eye(3))
    with pytest.raises(NotSymplectic):
        QuadSymplectic(2 * np.eye(2))


def test_quad_symplectic_blocks():
    S = QuadSymplectic(CZ)
    assert S.n_modes == 2
    assert np.array_equal(S.C, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.array_equal(S.A, np.eye(2))


def test_bloch_messiah_identity():
    factors = bloch_messiah(np.eye(4))
    assert np.allclose(factors.squeeze, [1.0, 1.0])
    assert np.allclose(factors.left.matrix, np.eye(4))
    assert np.allclose(factors.right.matrix, np.eye(4))


def test_bloch_messiah_cz_closed_form():
    factors = bloch_messiah(CZ)
    root = np.sqrt(5 + 2 * np.sqrt(5))
    x = (1 + np.sqrt(5)) / (2 * root)
    y = (3 + np.sqrt(5)) / (2 * root)
    assert np.allclose(1.0 / factors.squeeze, [PHI, PHI], atol=1e-10)
    assert np.allclose(np.abs(factors.left.X), x * np.eye(2), atol=1e-10)
    assert np.allclose(np.abs(factors.left.Y), y * np.fliplr(np.eye(2)), atol=1e-10)
    assert np.allclose(factors.recompose(), CZ, atol=1e-10)


def test_bloch_messiah_round_trip():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for case in range(1000):
        n_modes = int(rng.integers(1, 9))
        squeeze = np.sort(rng.uniform(0.05, 1.0, n_modes))[::-1]
        middle = np.diag(np.concatenate([1.0 / squeeze, squeeze]))
        S = random_passive(n_modes, rng) @ middle @ random_passive(n_modes, rng)
        factors = bloch_messiah(S)
        worst = max(worst, np.linalg.norm(factors.recompose() - S))
        assert np.allclose(factors.squeeze, squeeze, atol=1e-8), f"case {case}"
        assert is_symplectic(factors.left.matrix, tol=1e-8)
        assert is_symplectic(factors.right.matrix, tol=1e-8)
    assert worst <= 1e-8


def test_classify_fourier_is_trivial():
    outcome = classify_trivial(FOURIER)
    assert outcome.kind == "Trivial"
    assert np.allclose(outcome.recompose(), FOURIER)


def test_classify_cz_requires_ancillas():
    outcome = classify_trivial(CZ)
    assert outcome.kind == "RequiresAncillas"
    assert outcome.n_modes == 2
    assert outcome.y_norm > 1.0


def test_classify_pure_squeezer():
    outcome = classify_trivial(np.diag([0.5, 2.0]))
    assert outcome.kind == "Trivial"
    assert np.allclose(outcome.O, np.eye(1))
    assert np.allclose(outcome.R, [[2.0]])


def test_classify_identity():
    outcome = classify_trivial(np.eye(4))
    assert outcome.kind == "Trivial"
    assert np.allclose(outcome.O, np.eye(2))
    assert np.allclose(outcome.R, np.eye(2))


def test_measurement_only_family_is_trivial():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n_modes = int(rng.integers(1, 4))
        S = measurement_factor(n_modes, rng) @ random_passive(n_modes, rng)
        outcome = classify_trivial(S)
        assert outcome.kind == "Trivial"
        assert np.allclose(outcome.recompose(), S, atol=1e-8)


def test_classification_survives_left_post_processing():
    rng = np.random.default_rng(13)
    for _ in range(100):
        factor = measurement_factor(2, rng)
        assert classify_trivial(factor @ CZ).kind == "RequiresAncillas"
        trivial = measurement_factor(2, rng) @ random_passive(2, rng)
        assert classify_trivial(factor @ trivial).kind == "Trivial"

    for _ in range(50):
        n_modes = int(rng.integers(1, 4))
        squeeze = np.sort(rng.uniform(0.2, 0.8, n_modes))[::-1]
        middle = np.diag(np.concatenate([1.0 / squeeze, squeeze]))
        S = random_passive(n_modes, rng) @ middle @ random_passive(n_modes, rng)
        before = classify_trivial(S).kind
        assert classify_trivial(measurement_factor(n_modes, rng) @ S).kind == before


def test_bloch_messiah_degenerate_squeeze():
    rng = np.random.default_rng(3)
    squeeze = np.array([0.5, 0.5, 0.2])
    middle = np.diag(np.concatenate([1.0 / squeeze, squeeze]))
    S = random_passive(3, rng) @ middle @ random_passive(3, rng)
    factors = bloch_messiah(S)
    assert np.allclose(factors.squeeze, squeeze, atol=1e-10)
    assert np.linalg.norm(factors.recompose() - S) <= 1e-8


def test_normalize_single_orthogonal():
    O1 = ortho_group.rvs(3, random_state=1)
    O, R, O_prime = normalize_postprocessing([("O", O1)])
    assert np.allclose(O, O1)
    assert np.allclose(R, np.eye(3))
    assert np.allclose(O_prime, np.eye(3))


def test_normalize_orthogonal_closure():
    O1 = ortho_group.rvs(3, random_state=2)
    O2 = ortho_group.rvs(3, random_state=3)
    O, R, O_prime = normalize_postprocessing([("O", O1), ("O", O2)])
    assert np.allclose(R, np.eye(3))
    assert np.allclose(O @ R @ O_prime, O1 @ O2, atol=1e-10)


def test_normalize_mixed_chain():
    rng = np.random.default_rng(5)
    R1 = np.diag(rng.uniform(0.5, 2.0, 3))
    R2 = np.diag(rng.uniform(0.5, 2.0, 3))
    O1 = ortho_group.rvs(3, random_state=rng)
    O, R, O_prime = normalize_postprocessing([("R", R1), ("O", O1), ("R", R2)])
    assert np.allclose(O @ R @ O_prime, R1 @ O1 @ R2, atol=1e-10)
    assert np.allclose(O @ O.T, np.eye(3), atol=1e-10)
    assert np.all(np.diag(R) > 0)


def test_normalize_rejects_bad_factors():
    with pytest.raises(InvalidFactor):
        normalize_postprocessing([("O", np.array([[1.0, 1.0], [0.0, 1.0]]))])
    with pytest.raises(InvalidFactor):
        normalize_postprocessing([("R", np.diag([1.0, -1.0]))])
    with pytest.raises(DimensionMismatch):
        normalize_postprocessing([("O", np.eye(2)), ("O", np.eye(3))])


def test_passive_pair_matches_unitary():
    U = unitary_group.rvs(3, random_state=9)
    pair = PassivePair(U.real, U.imag)
    assert np.allclose(pair.unitary, U)
    form = omega(3)
    assert np.allclose(pair.matrix @ form @ pair.matrix.T, form)
