"""
Core types for the symplectic group in quadrature representation.

Convention: a = (x + i p) / 2, vacuum quadrature variance 1, quadrature vectors
ordered in blocks (x_1..x_N, p_1..p_N), symplectic form omega = [[0, I], [-I, 0]].
"""
from dataclasses import dataclass

import numpy as np

from utils.errors import DimensionMismatch, NonUnitary, NotSymplectic, ValidationError

UNITARY_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10
PASSIVE_TOL = 1e-10


def omega(n_modes):
    """Symplectic form for n_modes modes in block ordering."""
    identity = np.eye(n_modes)
    zeros = np.zeros((n_modes, n_modes))
    return np.block([[zeros, identity], [-identity, zeros]])


def _as_square(matrix, name, dtype=float):
    array = np.array(matrix, dtype=dtype)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {array.shape}")
    return array


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """N x N unitary acting on annihilation operators."""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _as_square(self.matrix, "mode unitary", dtype=complex)
        residual = np.linalg.norm(matrix @ matrix.conj().T - np.eye(matrix.shape[0]))
        if residual > UNITARY_TOL:
            raise NonUnitary(f"U U^dagger deviates from identity by {residual:.3e}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim, dtype=complex))


@dataclass(frozen=True, eq=False)
class QuadSymplectic:
    """2n x 2n real symplectic matrix [[A, B], [C, D]] acting on (x, p)."""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _as_square(self.matrix, "symplectic matrix")
        if matrix.shape[0] % 2:
            raise DimensionMismatch(f"symplectic matrix needs even dimension, got {matrix.shape[0]}")
        residual = symplectic_residual(matrix)
        if residual > SYMPLECTIC_TOL:
            raise NotSymplectic(f"S omega S^T deviates from omega by {residual:.3e}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_blocks(cls, A, B, C, D):
        return cls(np.block([[np.atleast_2d(A), np.atleast_2d(B)],
                             [np.atleast_2d(C), np.atleast_2d(D)]]))

    @property
    def n_modes(self):
        return self.matrix.shape[0] // 2

    @property
    def A(self):
        n = self.n_modes
        return self.matrix[:n, :n]

    @property
    def B(self):
        n = self.n_modes
        return self.matrix[:n, n:]

    @property
    def C(self):
        n = self.n_modes
        return self.matrix[n:, :n]

    @property
    def D(self):
        n = self.n_modes
        return self.matrix[n:, n:]


@dataclass(frozen=True, eq=False)
class PassivePair:
    """
    Quadrature action [[X, -Y], [Y, X]] of the mode unitary X + iY.

    X X^T + Y Y^T = I and X Y^T = Y X^T must hold.
    """
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = _as_square(self.X, "X")
        Y = np.array(self.Y, dtype=float)
        if Y.shape != X.shape:
            raise DimensionMismatch(f"X and Y shapes differ: {X.shape} vs {Y.shape}")
        n = X.shape[0]
        closure = np.linalg.norm(X @ X.T + Y @ Y.T - np.eye(n))
        symmetry = np.linalg.norm(X @ Y.T - Y @ X.T)
        if closure > PASSIVE_TOL or symmetry > PASSIVE_TOL:
            raise ValidationError(
                f"not a passive pair (closure residual {closure:.3e}, symmetry residual {symmetry:.3e})"
            )
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @classmethod
    def identity(cls, n_modes):
        return cls(np.eye(n_modes), np.zeros((n_modes, n_modes)))

    @property
    def n_modes(self):
        return self.X.shape[0]

    @property
    def matrix(self):
        return np.block([[self.X, -self.Y], [self.Y, self.X]])

    @property
    def unitary(self):
        return self.X + 1j * self.Y


def symplectic_residual(matrix):
    """Frobenius norm of S omega S^T - omega."""
    S = np.asarray(matrix, dtype=float)
    form = omega(S.shape[0] // 2)
    return float(np.linalg.norm(S @ form @ S.T - form))


def is_symplectic(matrix, tol=1e-12):
    """
    Check the symplectic condition.

    Args:
        matrix: Square real matrix of even dimension
        tol: Frobenius tolerance on S omega S^T - omega

    Returns:
        True if the residual is within tol
    """
    S = _as_square(matrix, "matrix")
    if S.shape[0] % 2:
        raise DimensionMismatch(f"symplectic check needs even dimension, got {S.shape[0]}")
    return symplectic_residual(S) <= tol


def quad_from_unitary_matrix(U):
    """Quadrature block matrix of a complex mode matrix, without validation."""
    U = np.asarray(U, dtype=complex)
    X, Y = U.real, U.imag
    return np.block([[X, -Y], [Y, X]])


def unitary_to_quad_symplectic(U):
    """
    Quadrature action of a mode unitary: U = X + iY maps to [[X, -Y], [Y, X]].

    Args:
        U: ModeUnitary or complex matrix

    Returns:
        QuadSymplectic (orthogonal and symplectic)
    """
    if not isinstance(U, ModeUnitary):
        U = ModeUnitary(U)
    return QuadSymplectic(quad_from_unitary_matrix(U.matrix))


def passive_pair_from_unitary(U):
    if not isinstance(U, ModeUnitary):
        U = ModeUnitary(U)
    return PassivePair(U.matrix.real, U.matrix.imag)
