"""
Tests for the detection-transformation parameterization
"""
import numpy as np
import pytest
from scipy.stats import unitary_group

from mbqc import (
    AngleVector,
    RotationPlan,
    assemble_umhd,
    build_delta_lo,
    build_postprocessing,
    default_rotation_plan,
    dof_balance,
    dof_lower_bound,
    full_rotation_plan,
)
from symplectic import ModeUnitary
from utils.errors import DimensionMismatch, PlanMismatch


def test_zero_phases_give_identity():
    assert np.array_equal(build_delta_lo(np.zeros(3)).matrix, np.eye(3))


def test_quarter_phase_on_first_mode():
    expected = np.diag([1j, 1, 1])
    assert np.allclose(build_delta_lo([np.pi / 2, 0, 0]).matrix, expected)


def test_zero_rotations_give_identity():
    plan = default_rotation_plan(2, 4)
    assert np.array_equal(build_postprocessing(np.zeros(len(plan)), plan), np.eye(6))


def test_single_rotation_swaps_modes():
    plan = RotationPlan(4, ((0, 3),))
    rotation = build_postprocessing([np.pi / 2], plan)
    expected = np.eye(4)
    expected[0, 0] = expected[3, 3] = 0.0
    expected[0, 3] = -1.0
    expected[3, 0] = 1.0
    assert np.allclose(rotation, expected, atol=1e-15)


def test_single_input_plan_has_three_angles():
    plan = default_rotation_plan(1, 3)
    assert len(plan) == 3
    assert plan.touches([3])


def test_default_plan_counts():
    assert len(default_rotation_plan(2, 4)) == 2 * 4 + 1
    assert len(full_rotation_plan(4)) == 6


def test_rotation_plan_rejects_bad_pairs():
    with pytest.raises(PlanMismatch):
        RotationPlan(3, ((0, 0),))
    with pytest.raises(PlanMismatch):
        RotationPlan(3, ((0, 3),))
    with pytest.raises(PlanMismatch):
        build_postprocessing([0.1, 0.2], RotationPlan(3, ((0, 1),)))


def test_postprocessing_is_orthogonal_and_periodic():
    plan = full_rotation_plan(5)
    theta = np.random.default_rng(3).uniform(-10, 10, len(plan))
    rotation = build_postprocessing(theta, plan)
    assert np.allclose(rotation @ rotation.T, np.eye(5), atol=1e-12)
    assert np.allclose(build_postprocessing(theta + 2 * np.pi, plan), rotation, atol=1e-12)


def test_assemble_with_zero_angles_returns_basis():
    U_T = ModeUnitary(unitary_group.rvs(4, random_state=1))
    plan = default_rotation_plan(1, 3)
    U = assemble_umhd(np.zeros(3), np.zeros(4), U_T, plan)
    assert np.allclose(U.matrix, U_T.matrix, atol=1e-15)


def test_assemble_is_unitary():
    U_T = ModeUnitary(unitary_group.rvs(6, random_state=2))
    plan = default_rotation_plan(2, 4)
    rng = np.random.default_rng(4)
    U = assemble_umhd(rng.uniform(0, 6, len(plan)), rng.uniform(0, 6, 6), U_T, plan)
    assert np.allclose(U.matrix @ U.matrix.conj().T, np.eye(6), atol=1e-12)


def test_assemble_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        assemble_umhd(np.zeros(3), np.zeros(3), ModeUnitary.identity(4), default_rotation_plan(1, 3))


def test_angle_vector_layout():
    angles = AngleVector.from_flat(np.arange(7.0), 4, 3)
    assert np.array_equal(angles.phi, [0, 1, 2, 3])
    assert np.array_equal(angles.theta, [4, 5, 6])
    assert np.array_equal(angles.flat(), np.arange(7.0))
    with pytest.raises(PlanMismatch):
        AngleVector.from_flat(np.zeros(6), 4, 3)


def test_dof_lower_bound():
    assert dof_lower_bound(1) == 2
    assert dof_lower_bound(2) == 3
    assert dof_lower_bound(4) == 6


def test_dof_balance_at_bound():
    for n in (2, 4, 6):
        required, available = dof_balance(n, dof_lower_bound(n))
        assert available >= required
    assert dof_balance(2, 2)[1] < dof_balance(2, 2)[0]


def test_plan_with_outputs_rejects_ancilla_only_pairs():
    assert default_rotation_plan(1, 3).outputs == (3,)
    with pytest.raises(PlanMismatch):
        RotationPlan(4, ((0, 1),), outputs=(3,))
    with pytest.raises(PlanMismatch):
        RotationPlan(4, ((0, 3),), outputs=(4,))
    with pytest.raises(PlanMismatch):
        RotationPlan(4, ((3, 0), (1, 2))).with_outputs([3])
    assert RotationPlan(4, ((3, 0),)).with_outputs([3]) == RotationPlan(4, ((3, 0),), (3,))


def test_angle_vector_checks_declared_sizes():
    angles = AngleVector(np.zeros(4), np.zeros(3), 4, 3)
    assert angles.wrapped().n_rotations == 3
    with pytest.raises(PlanMismatch):
        AngleVector(np.zeros(3), np.zeros(3), n_phases=4)
    with pytest.raises(PlanMismatch):
        AngleVector(np.zeros(4), np.zeros(2), n_rotations=3)


def test_assemble_is_unitary_for_random_draws():
    rng = np.random.default_rng(10)
    bases = {N: ModeUnitary(unitary_group.rvs(N, random_state=rng)) for N in range(2, 7)}
    worst = 0.0
    for _ in range(10_000):
        N = int(rng.integers(2, 7))
        n = int(rng.integers(0, N))
        plan = full_rotation_plan(N) if n == 0 else default_rotation_plan(n, N - n)
        theta = rng.uniform(-20.0, 20.0, len(plan))
        phi = rng.uniform(-20.0, 20.0, N)
        U = assemble_umhd(theta, phi, bases[N], plan).matrix
        worst = max(worst, np.max(np.abs(U @ U.conj().T - np.eye(N))))
    assert worst <= 1e-10
