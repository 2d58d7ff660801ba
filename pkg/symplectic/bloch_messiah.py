"""
Bloch-Messiah decomposition, triviality classifier and post-processing normalization.

The decomposition is computed from the eigensystem of G = S S^T, which is itself
symmetric and symplectic: every eigenvalue g > 1 pairs with 1/g, and for an
eigenvector v of g the vector omega v is an eigenvector of 1/g. Taking the
eigenvectors of the eigenvalues >= 1 as the columns [X; Y] of a passive matrix
W gives S = W diag(K^{-1/2}, K^{1/2}) R with R orthogonal symplectic.

Gauge (all outputs are deterministic):
  * if S S^T is block diagonal the passive factor is chosen as diag(O, O), so
    every member of the trivially implementable family is reported with Y = 0;
  * otherwise the x-block of the squeeze carries the entries >= 1;
  * degenerate eigenspaces are rotated so that their x-rows form a symmetric
    positive semidefinite block, single vectors get a positive leading entry.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from symplectic.core import PassivePair, QuadSymplectic, omega
from utils.errors import (
    DimensionMismatch,
    InvalidFactor,
    NumericalBreakdown,
    ValidationError,
)

TRIVIAL_TOL = 1e-9
DEGENERACY_TOL = 1e-8
RECOMPOSITION_TOL = 1e-8
FACTOR_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BlochMessiahFactors:
    """S = left . diag(1/squeeze, squeeze) . right, squeeze = diag of K^{1/2}."""
    left: PassivePair
    squeeze: np.ndarray
    right: PassivePair

    def __post_init__(self):
        squeeze = np.array(self.squeeze, dtype=float)
        if np.any(squeeze <= 0):
            raise ValidationError("squeeze entries must be strictly positive")
        if np.any(np.diff(squeeze) > 0):
            raise ValidationError("squeeze entries must be sorted descending")
        squeeze.setflags(write=False)
        object.__setattr__(self, "squeeze", squeeze)

    def squeeze_matrix(self):
        return np.diag(np.concatenate([1.0 / self.squeeze, self.squeeze]))

    def recompose(self):
        return self.left.matrix @ self.squeeze_matrix() @ self.right.matrix


@dataclass(frozen=True, eq=False)
class TrivialRealization:
    """Measurement-only realization [[O, 0], [0, O]] . diag(R^-1, R) . right."""
    O: np.ndarray
    R: np.ndarray
    right: PassivePair
    y_norm: float

    kind = "Trivial"

    def recompose(self):
        n = self.O.shape[0]
        zeros = np.zeros((n, n))
        rotation = np.block([[self.O, zeros], [zeros, self.O]])
        gains = np.block([[np.linalg.inv(self.R), zeros], [zeros, self.R]])
        return rotation @ gains @ self.right.matrix


@dataclass(frozen=True, eq=False)
class RequiresAncillas:
    y_norm: float
    factors: BlochMessiahFactors

    kind = "RequiresAncillas"

    @property
    def n_modes(self):
        return self.factors.left.n_modes


def _clusters(values):
    # values sorted; groups of (numerically) equal entries
    groups = [[0]]
    for index in range(1, len(values)):
        reference = values[groups[-1][-1]]
        if abs(values[index] - reference) <= DEGENERACY_TOL * max(1.0, abs(reference)):
            groups[-1].append(index)
        else:
            groups.append([index])
    return groups


def _fix_sign(vector):
    significant = np.flatnonzero(np.abs(vector) > 1e-10)
    if significant.size and vector[significant[0]] < 0:
        return -vector
    return vector


def _canonical_basis(basis, n_rows):
    """Canonical orthonormal basis of span(basis) using its first n_rows rows."""
    d = basis.shape[1]
    if d == 1:
        return _fix_sign(basis[:, 0])[:, None]
    rows = basis[:n_rows]
    if np.linalg.matrix_rank(rows, tol=1e-8) < d:
        rows = basis
    _, _, pivots = scipy.linalg.qr(rows.T, pivoting=True)
    selected = rows[np.sort(pivots[:d])]
    rotation, _ = scipy.linalg.polar(selected.T)
    return basis @ rotation


def _complex_structure_basis(basis, form, count):
    """Pick `count` vectors u of the omega-invariant span with u orthogonal to every omega u'."""
    chosen = []
    for column in basis.T:
        candidate = column.copy()
        for _ in range(2):
            for vector in chosen:
                partner = -form @ vector
                candidate -= (vector @ candidate) * vector
                candidate -= (partner @ candidate) * partner
        norm = np.linalg.norm(candidate)
        if norm > 1e-6:
            chosen.append(candidate / norm)
        if len(chosen) == count:
            break
    if len(chosen) != count:
        raise NumericalBreakdown("could not build a complex structure on the unsqueezed subspace")
    return np.column_stack(chosen)


def _block_diagonal_gauge(S, G, n):
    values, vectors = np.linalg.eigh(G[:n, :n])
    if np.any(values <= 0):
        raise NumericalBreakdown("x-block of S S^T is not positive definite")
    columns = [_canonical_basis(vectors[:, group], n) for group in _clusters(values)]
    O = np.hstack(columns)
    zeros = np.zeros((n, n))
    W = np.block([[O, zeros], [zeros, O]])
    scale = np.concatenate([np.sqrt(values), 1.0 / np.sqrt(values)])
    right = (W.T @ S) / scale[:, None]
    return O, np.zeros((n, n)), 1.0 / np.sqrt(values), right


def _general_gauge(S, G, n):
    form = omega(n)
    values, vectors = np.linalg.eigh(G)
    above = values > 1.0 + DEGENERACY_TOL
    below = values < 1.0 - DEGENERACY_TOL
    unit = ~(above | below)
    if above.sum() != below.sum() or unit.sum() % 2:
        raise NumericalBreakdown("eigenvalues of S S^T do not come in reciprocal pairs")
    high = np.sort(values[above])
    low = np.sort(1.0 / values[below])
    if high.size and np.max(np.abs(high - low) / high) > 1e-6:
        raise NumericalBreakdown("singular values of S do not pair up within tolerance")

    columns = []
    gains = []
    n_unit = int(unit.sum()) // 2
    if n_unit:
        unit_basis = _complex_structure_basis(vectors[:, unit], form, n_unit)
        columns.append(_canonical_basis(unit_basis, n))
        gains.extend([1.0] * n_unit)

    # eigh returns ascending order, which is descending squeeze 1/sqrt(g)
    squeezed_values = values[above]
    squeezed_vectors = vectors[:, above]
    for group in _clusters(squeezed_values):
        columns.append(_canonical_basis(squeezed_vectors[:, group], n))
        gains.extend(squeezed_values[group])

    V = np.hstack(columns)
    gains = np.array(gains)
    W = np.hstack([V, -form @ V])
    scale = np.concatenate([np.sqrt(gains), 1.0 / np.sqrt(gains)])
    right = (W.T @ S) / scale[:, None]
    return V[:n], V[n:], 1.0 / np.sqrt(gains), right


def bloch_messiah(S, gauge_tol=TRIVIAL_TOL):
    """
    Decompose a symplectic matrix as passive . squeeze . passive.

    Args:
        S: QuadSymplectic or real matrix
        gauge_tol: Norm of the off-diagonal block of S S^T below which the
            block-diagonal (measurement-only) gauge is used

    Returns:
        BlochMessiahFactors
    """
    if not isinstance(S, QuadSymplectic):
        S = QuadSymplectic(S)
    matrix = S.matrix
    n = S.n_modes
    G = matrix @ matrix.T
    G = (G + G.T) / 2

    if np.linalg.norm(G[:n, n:]) <= gauge_tol:
        X, Y, squeeze, right = _block_diagonal_gauge(matrix, G, n)
    else:
        X, Y, squeeze, right = _general_gauge(matrix, G, n)

    try:
        factors = BlochMessiahFactors(
            left=PassivePair(X, Y),
            squeeze=squeeze,
            right=PassivePair(right[:n, :n], right[n:, :n]),
        )
    except ValidationError as error:
        raise NumericalBreakdown(f"decomposition factors lost their structure: {error}")

    residual = np.linalg.norm(factors.recompose() - matrix)
    if residual > RECOMPOSITION_TOL * max(1.0, np.linalg.norm(matrix)):
        raise NumericalBreakdown(f"recomposition residual {residual:.3e} exceeds tolerance")
    return factors


def classify_trivial(S, tol=TRIVIAL_TOL):
    """
    Decide whether S can be realized by measurement and post-processing alone.

    Args:
        S: QuadSymplectic or real matrix
        tol: Threshold on the Frobenius norm of the left factor's Y block

    Returns:
        TrivialRealization or RequiresAncillas
    """
    factors = bloch_messiah(S, gauge_tol=tol)
    y_norm = float(np.linalg.norm(factors.left.Y))
    if y_norm <= tol:
        return TrivialRealization(
            O=factors.left.X,
            R=np.diag(factors.squeeze),
            right=factors.right,
            y_norm=y_norm,
        )
    return RequiresAncillas(y_norm=y_norm, factors=factors)


def _check_factor(kind, matrix, position):
    if kind == "O":
        residual = np.linalg.norm(matrix @ matrix.T - np.eye(matrix.shape[0]))
        if residual > FACTOR_TOL:
            raise InvalidFactor(f"factor {position} is not orthogonal (residual {residual:.3e})")
    elif kind == "R":
        off_diagonal = matrix - np.diag(np.diag(matrix))
        if np.any(off_diagonal != 0) or np.any(np.diag(matrix) <= 0):
            raise InvalidFactor(f"factor {position} is not a positive diagonal matrix")
    else:
        raise InvalidFactor(f"factor {position} has unknown kind {kind!r}")


def normalize_postprocessing(factors):
    """
    Collapse a chain of orthogonal (O) and positive diagonal (R) factors to O R O'.

    Args:
        factors: Ordered list of (kind, matrix) with kind 'O' or 'R'

    Returns:
        Tuple (O, R, O_prime)
    """
    if not factors:
        raise InvalidFactor("no factors given")
    product = None
    for position, (kind, matrix) in enumerate(factors):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"factor {position} is not square: {matrix.shape}")
        if product is not None and matrix.shape != product.shape:
            raise DimensionMismatch(f"factor {position} has shape {matrix.shape}, expected {product.shape}")
        _check_factor(kind, matrix, position)
        product = matrix if product is None else product @ matrix

    U, singular, Vt = np.linalg.svd(product)
    if np.ptp(singular) <= FACTOR_TOL * singular[0]:
        # isotropic gain: keep the orthogonal part whole
        gain = float(np.mean(singular))
        return product / gain, gain * np.eye(product.shape[0]), np.eye(product.shape[0])
    return U, np.diag(singular), Vt
