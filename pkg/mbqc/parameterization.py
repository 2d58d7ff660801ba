"""
Tunable detection transformation U_MHD = O(theta) . Delta_LO(phi) . U_T and
degree-of-freedom counting.
"""
import math
from dataclasses import dataclass

import numpy as np

from symplectic.core import ModeUnitary
from utils.errors import DimensionMismatch, PlanMismatch

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class RotationPlan:
    """
    Ordered planar rotations (i, j) on `dim` modes, applied left to right.

    With `outputs` given, every pair must involve at least one output mode.
    """
    dim: int
    pairs: tuple
    outputs: tuple = None

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if i == j or not (0 <= i < self.dim and 0 <= j < self.dim):
                raise PlanMismatch(f"rotation pair ({i}, {j}) invalid for {self.dim} modes")
        object.__setattr__(self, "pairs", pairs)
        if self.outputs is not None:
            outputs = tuple(sorted({int(mode) for mode in self.outputs}))
            if any(not 0 <= mode < self.dim for mode in outputs):
                raise PlanMismatch(f"output modes {list(outputs)} out of range for {self.dim} modes")
            for i, j in pairs:
                if i not in outputs and j not in outputs:
                    raise PlanMismatch(f"rotation pair ({i}, {j}) touches no output mode {list(outputs)}")
            object.__setattr__(self, "outputs", outputs)

    def with_outputs(self, outputs):
        return RotationPlan(self.dim, self.pairs, tuple(outputs))

    def __len__(self):
        return len(self.pairs)

    def touches(self, modes):
        modes = set(modes)
        return all(i in modes or j in modes for i, j in self.pairs)


def default_rotation_plan(n, m):
    """
    Output-ancilla pairs (lexicographic), then output-output pairs.

    Outputs are modes m..m+n-1, measured ancillas 0..m-1.
    """
    outputs = range(m, m + n)
    pairs = [(output, ancilla) for output in outputs for ancilla in range(m)]
    pairs += [(a, b) for a in outputs for b in outputs if a < b]
    return RotationPlan(n + m, tuple(pairs), tuple(outputs))


def full_rotation_plan(dim):
    """All dim(dim-1)/2 planar rotations, used when every mode is read out."""
    return RotationPlan(dim, tuple((i, j) for i in range(dim) for j in range(i + 1, dim)))


def plan_length(n, m):
    return n * m + n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class AngleVector:
    """LO phases and rotation angles; sizes are checked when n_phases / n_rotations are given."""
    phi: np.ndarray
    theta: np.ndarray
    n_phases: int = None
    n_rotations: int = None

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float).reshape(-1)
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if self.n_phases is not None and phi.size != self.n_phases:
            raise PlanMismatch(f"expected {self.n_phases} LO phases, got {phi.size}")
        if self.n_rotations is not None and theta.size != self.n_rotations:
            raise PlanMismatch(f"expected {self.n_rotations} rotation angles, got {theta.size}")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_flat(cls, values, n_phases, n_rotations):
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size != n_phases + n_rotations:
            raise PlanMismatch(
                f"expected {n_phases + n_rotations} angles ({n_phases} phases, "
                f"{n_rotations} rotations), got {values.size}"
            )
        return cls(values[:n_phases], values[n_phases:], n_phases, n_rotations)

    def flat(self):
        return np.concatenate([self.phi, self.theta])

    def wrapped(self):
        return AngleVector(np.mod(self.phi, TWO_PI), np.mod(self.theta, TWO_PI), self.n_phases, self.n_rotations)


def build_delta_lo(phi):
    """Local-oscillator phases diag(e^{i phi_k})."""
    phi = np.asarray(phi, dtype=float).reshape(-1)
    return ModeUnitary(np.diag(np.exp(1j * np.mod(phi, TWO_PI))))


def givens_rotation(dim, i, j, angle):
    rotation = np.eye(dim)
    c, s = np.cos(angle), np.sin(angle)
    rotation[i, i] = rotation[j, j] = c
    rotation[i, j] = -s
    rotation[j, i] = s
    return rotation


def build_postprocessing(theta, plan):
    """
    Product of planar rotations in plan order.

    Args:
        theta: One angle per plan entry
        plan: RotationPlan

    Returns:
        Real orthogonal dim x dim matrix
    """
    theta = np.mod(np.asarray(theta, dtype=float).reshape(-1), TWO_PI)
    if theta.size != len(plan):
        raise PlanMismatch(f"plan has {len(plan)} rotations, got {theta.size} angles")
    result = np.eye(plan.dim)
    for (i, j), angle in zip(plan.pairs, theta):
        result = result @ givens_rotation(plan.dim, i, j, angle)
    return result


def assemble_umhd(theta, phi, U_T, plan):
    """
    Total detection transformation O(theta) . Delta_LO(phi) . U_T.

    Args:
        theta: Rotation angles
        phi: LO phases, one per mode
        U_T: ModeUnitary (or complex matrix) of the fixed basis change
        plan: RotationPlan

    Returns:
        ModeUnitary
    """
    matrix = U_T.matrix if isinstance(U_T, ModeUnitary) else np.asarray(U_T, dtype=complex)
    dim = matrix.shape[0]
    phi = np.asarray(phi, dtype=float).reshape(-1)
    if phi.size != dim or plan.dim != dim:
        raise DimensionMismatch(f"U_T has {dim} modes, phases {phi.size}, plan {plan.dim}")
    rotation = build_postprocessing(theta, plan)
    phases = np.exp(1j * np.mod(phi, TWO_PI))
    return ModeUnitary(rotation @ (phases[:, None] * matrix))


def dof_lower_bound(n):
    """Minimal ancilla count ceil(3n/2) for reaching every n-mode symplectic."""
    if n < 1:
        raise DimensionMismatch(f"need at least one input mode, got {n}")
    return math.ceil(3 * n / 2)


def dof_balance(n, m):
    """
    Degrees of freedom of an n-mode symplectic against those tunable with m ancillas.

    Returns:
        Tuple (required, available)
    """
    required = 2 * n * n + n
    available = (n + m) + n * m + n * (n - 1) // 2
    return required, available
