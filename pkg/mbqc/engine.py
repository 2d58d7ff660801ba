"""
Measurement elimination engine.

A total mode unitary maps the IN basis (n input slots + m p-squeezed ancilla slots)
to the OUT basis. The p quadratures of the first m OUT modes are measured; the last
n OUT modes are the outputs. Solving the measured equations for the anti-squeezed
ancilla quadratures x_s and substituting them into the outputs gives

    x_out = A x_in + B p_in + c_x p_s + l_x p_meas
    p_out = C x_in + D p_in + c_p p_s + l_p p_meas

The c terms are the finite-squeezing excess noise, the l terms are classical
displacements fixed by the measurement record.
"""
from dataclasses import dataclass

import numpy as np

from symplectic.core import ModeUnitary, QuadSymplectic
from utils.errors import DimensionMismatch, SingularElimination, ValidationError

CONDITION_LIMIT = 1e12
NULL_LEAK_TOL = 1e-10


def db_to_variance(level_db):
    """Squeezed-quadrature variance in shot-noise units from a dB level (-7 dB -> 0.1995)."""
    return 10.0 ** (float(level_db) / 10.0)


def r_to_variance(r):
    """Squeezed-quadrature variance e^{-2r} from a squeezing parameter r."""
    return float(np.exp(-2.0 * float(r)))


@dataclass(frozen=True, eq=False)
class SqueezingSpec:
    """Variances of the p-squeezed ancilla quadratures, vacuum = 1."""
    variances: np.ndarray

    def __post_init__(self):
        variances = np.array(self.variances, dtype=float).reshape(-1)
        if np.any(~np.isfinite(variances)) or np.any(variances <= 0):
            raise ValidationError(f"squeezing variances must be positive, got {variances.tolist()}")
        variances.setflags(write=False)
        object.__setattr__(self, "variances", variances)

    @property
    def m(self):
        return self.variances.size

    @classmethod
    def from_db(cls, levels):
        return cls([db_to_variance(level) for level in levels])

    @classmethod
    def from_r(cls, values):
        return cls([r_to_variance(value) for value in values])

    @classmethod
    def vacuum(cls, m):
        return cls(np.ones(m))


@dataclass(frozen=True, eq=False)
class ClusterGraph:
    """Weighted graph of a cluster state: nullifiers p_i - sum_j V_ij x_j."""
    V: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise DimensionMismatch(f"adjacency matrix must be square, got {V.shape}")
        if not np.array_equal(V, V.T) or np.any(np.diag(V) != 0):
            raise ValidationError("adjacency matrix must be symmetric with zero diagonal")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)

    @property
    def m(self):
        return self.V.shape[0]

    @classmethod
    def linear(cls, m):
        V = np.zeros((m, m))
        for i in range(m - 1):
            V[i, i + 1] = V[i + 1, i] = 1.0
        return cls(V)

    @classmethod
    def square(cls):
        V = np.zeros((4, 4))
        for i in range(4):
            j = (i + 1) % 4
            V[i, j] = V[j, i] = 1.0
        return cls(V)

    @classmethod
    def t_shape(cls):
        V = np.zeros((4, 4))
        for leaf in (0, 2, 3):
            V[1, leaf] = V[leaf, 1] = 1.0
        return cls(V)

    @classmethod
    def named(cls, name, m=4):
        if name == "linear":
            return cls.linear(m)
        if name in ("square", "t"):
            if m != 4:
                raise ValidationError(f"graph '{name}' is defined for 4 nodes, got {m}")
            return cls.square() if name == "square" else cls.t_shape()
        raise ValidationError(f"unknown graph name '{name}' (linear, square, t)")


@dataclass(frozen=True, eq=False)
class MbqcResult:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    c_x: np.ndarray
    c_p: np.ndarray
    l_x: np.ndarray
    l_p: np.ndarray
    noise_var_x: np.ndarray
    noise_var_p: np.ndarray

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.c_x.shape[1]

    def symplectic_block(self):
        return np.block([[self.A, self.B], [self.C, self.D]])

    def to_dict(self):
        return {name: getattr(self, name).tolist() for name in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, data):
        n = len(data["A"])
        fields = {}
        for name in cls.__dataclass_fields__:
            array = np.array(data[name], dtype=float)
            if name.startswith(("c_", "l_")):
                array = array.reshape(n, -1)
            elif not name.startswith("noise"):
                array = array.reshape(n, n)
            fields[name] = array
        return cls(**fields)


@dataclass(frozen=True)
class NullifierVariance:
    absolute: float
    shot_noise: float

    @property
    def relative(self):
        return self.absolute / self.shot_noise


def _split_slots(N, n, m, input_positions):
    inputs = [int(position) for position in input_positions]
    if len(inputs) != n or len(set(inputs)) != n:
        raise DimensionMismatch(f"expected {n} distinct input positions, got {list(input_positions)}")
    if any(position < 0 or position >= N for position in inputs):
        raise DimensionMismatch(f"input positions {inputs} out of range for {N} modes")
    ancillas = [slot for slot in range(N) if slot not in inputs]
    return np.array(inputs, dtype=int), np.array(ancillas, dtype=int)


def _measurement_inverse(M_xs, F):
    """Pseudo-inverse of the anti-squeezed block, checking that outputs are determined."""
    m = M_xs.shape[0]
    if m == 0:
        return np.zeros((0, 0))
    u, s, vt = np.linalg.svd(M_xs)
    if s[0] == 0:
        rank = 0
    else:
        rank = int(np.sum(s > s[0] / CONDITION_LIMIT))
    G = (vt[:rank].T / s[:rank]) @ u[:, :rank].T
    if rank < m:
        leak = np.linalg.norm(F @ (np.eye(m) - G @ M_xs))
        if leak > NULL_LEAK_TOL * max(1.0, np.linalg.norm(F)):
            condition = np.inf if rank == 0 else s[0] / s[-1]
            raise SingularElimination(
                f"measured p quadratures do not determine the anti-squeezed quadratures "
                f"(condition number {condition:.3e})"
            )
    return G


def eliminate(U_total, n, m, input_positions, squeezing=None):
    """
    Eliminate the anti-squeezed ancilla quadratures from the outputs.

    Args:
        U_total: ModeUnitary (or complex matrix) on N = n + m modes
        n: Number of input (and output) modes
        m: Number of ancillas (and measured modes)
        input_positions: 0-based IN slots carrying the input state
        squeezing: SqueezingSpec for the noise variances (vacuum when omitted)

    Returns:
        MbqcResult
    """
    if not isinstance(U_total, ModeUnitary):
        U_total = ModeUnitary(U_total)
    N = U_total.dim
    if N != n + m:
        raise DimensionMismatch(f"unitary has {N} modes but n + m = {n + m}")
    if squeezing is None:
        squeezing = SqueezingSpec.vacuum(m)
    if squeezing.m != m:
        raise DimensionMismatch(f"squeezing lists {squeezing.m} ancillas, expected {m}")

    inputs, ancillas = _split_slots(N, n, m, input_positions)
    re, im = U_total.matrix.real, U_total.matrix.imag
    measured = np.arange(m)
    outputs = np.arange(m, N)

    M_xs = im[np.ix_(measured, ancillas)]
    M_xin = im[np.ix_(measured, inputs)]
    M_pin = re[np.ix_(measured, inputs)]
    M_ps = re[np.ix_(measured, ancillas)]

    re_oq = re[np.ix_(outputs, ancillas)]
    im_oq = im[np.ix_(outputs, ancillas)]
    G = _measurement_inverse(M_xs, np.vstack([re_oq, im_oq]))

    l_x = re_oq @ G
    l_p = im_oq @ G
    A = re[np.ix_(outputs, inputs)] - l_x @ M_xin
    B = -im[np.ix_(outputs, inputs)] - l_x @ M_pin
    C = im[np.ix_(outputs, inputs)] - l_p @ M_xin
    D = re[np.ix_(outputs, inputs)] - l_p @ M_pin
    c_x = -im_oq - l_x @ M_ps
    c_p = re_oq - l_p @ M_ps

    return MbqcResult(
        A=A, B=B, C=C, D=D,
        c_x=c_x, c_p=c_p,
        l_x=l_x, l_p=l_p,
        noise_var_x=(c_x ** 2) @ squeezing.variances,
        noise_var_p=(c_p ** 2) @ squeezing.variances,
    )


def fitness_f1(result, target):
    """Frobenius distance between the effective blocks and the target symplectic."""
    target_matrix = target.matrix if isinstance(target, QuadSymplectic) else np.asarray(target, dtype=float)
    block = result.symplectic_block()
    if block.shape != target_matrix.shape:
        raise DimensionMismatch(f"result blocks {block.shape} vs target {target_matrix.shape}")
    return float(np.linalg.norm(block - target_matrix))


def fitness_f2(result):
    """Total excess-noise variance over all output quadratures."""
    return float(np.sum(result.noise_var_x) + np.sum(result.noise_var_p))


def nullifier_variances(U_total, squeezing, graph):
    """
    Nullifier variances of the cluster read out through U_total.

    Squeezed inputs carry p variance v_j and x variance 1/v_j (pure states).

    Returns:
        List of NullifierVariance, one per node
    """
    if not isinstance(U_total, ModeUnitary):
        U_total = ModeUnitary(U_total)
    m = graph.m
    if U_total.dim != m or squeezing.m != m:
        raise DimensionMismatch(
            f"graph has {m} nodes, unitary {U_total.dim} modes, squeezing {squeezing.m} entries"
        )
    re, im = U_total.matrix.real, U_total.matrix.imag
    V = graph.V
    on_x = im - V @ re
    on_p = re + V @ im
    variances = squeezing.variances
    absolute = (on_x ** 2) @ (1.0 / variances) + (on_p ** 2) @ variances
    shot_noise = 1.0 + np.sum(V ** 2, axis=1)
    return [NullifierVariance(float(a), float(s)) for a, s in zip(absolute, shot_noise)]


def fitness_f3(variances):
    """Mean absolute nullifier variance."""
    values = [v.absolute if isinstance(v, NullifierVariance) else float(v) for v in variances]
    if not values:
        return 0.0
    return float(np.mean(values))


def table_consistency(relative, shot_noise):
    """Mean of relative variances rescaled by their shot-noise references."""
    return float(np.mean(np.asarray(relative, dtype=float) * np.asarray(shot_noise, dtype=float)))


def standard_cluster_unitary(graph):
    """
    Canonical cluster construction (I + iV)(I + V^2)^{-1/2}.

    Applied to p-squeezed modes it yields nullifiers p - V x = (I + V^2)^{1/2} p_s.
    """
    V = graph.V
    values, vectors = np.linalg.eigh(np.eye(graph.m) + V @ V)
    inverse_root = (vectors / np.sqrt(values)) @ vectors.T
    return ModeUnitary((np.eye(graph.m) + 1j * V) @ inverse_root)
