"""
Builtin scenarios and published reference values.

Embedded constants:
  * 6x6 pixel-basis change of a six-mode squeezing experiment, printed to three
    significant figures (projected to the nearest unitary at load);
  * OPO phase alignment diag(1, 1, i, 1, i, 1);
  * squeezing of the Fourier and cluster scenarios (-7, -6, -4 dB, plus 0 dB input);
  * squeezing parameters r = (0.79, 0.36, 0.14, 0.05) of the C_Z scenario.
"""
import numpy as np
import scipy.linalg

from mbqc.engine import (
    ClusterGraph,
    SqueezingSpec,
    eliminate,
    fitness_f1,
    fitness_f2,
    fitness_f3,
    nullifier_variances,
    standard_cluster_unitary,
)
from optimizer.evolution import OptimizerConfig
from scenarios.problem import Objective, SynthesisProblem
from symplectic.core import ModeUnitary, QuadSymplectic
from utils.errors import ValidationError

PIXEL_BASIS_UT = np.array([
    [-0.45, -0.619, 0.536, 0.334, -0.124, -0.00859],
    [-0.363, -0.326, -0.161, -0.635, 0.521, 0.246],
    [-0.334, -0.133, -0.383, -0.248, -0.402, -0.708],
    [-0.326, 0.0013, -0.466, 0.143, -0.498, 0.639],
    [-0.365, 0.155, -0.382, 0.607, 0.547, -0.174],
    [-0.561, 0.685, 0.421, -0.187, -0.0645, 0.0107],
])
OPO_PHASES = np.array([1, 1, 1j, 1, 1j, 1])
CZ_SQUEEZING_R = (0.79, 0.36, 0.14, 0.05)
FOURIER_SQUEEZING_DB = (-7.0, -6.0, -4.0)
CLUSTER_SQUEEZING_DB = (-7.0, -6.0, -4.0, 0.0)

# Stand-in for a 4-mode frequency-slice detection basis: columns are the
# squeezed supermodes sampled on four spectral pixels (non-canonical).
FOURIER_STANDIN_UT = 0.5 * np.array([
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0, -1.0],
])

REFERENCE_ROWS = {
    "fourier4": {
        "standard": {"noise_var_x": [1.20], "noise_var_p": [0.48], "f1": 0.0, "f2": 1.68},
        "optimized": {"noise_var_x": [0.25], "noise_var_p": [0.18], "f1": 1e-16, "f2": 0.43},
    },
    "cz6": {
        "standard": {"noise_var_x": [0.41, 2.79], "noise_var_p": [2.35, 1.32], "f1": 0.0, "f2": 6.87},
        "optimized": {"noise_var_x": [0.77, 0.28], "noise_var_p": [0.23, 0.95], "f1": 1e-15, "f2": 2.24},
    },
    "linear_cluster4": {
        "standard": {"relative": [0.20, 0.50, 0.24, 1.0], "f3": 1.16},
        "optimized": {"relative": [0.23, 0.48, 0.21, 0.70], "f3": 0.97},
    },
    "retargeted_clusters": {
        "t": {"relative": [0.26, 0.27, 0.27, 0.28]},
        "square": {"relative": [0.25, 0.25, 0.26, 0.27]},
        "linear": {"relative": [0.57, 0.25, 0.25, 0.55]},
    },
}


def fourier_target():
    return QuadSymplectic(np.array([[0.0, -1.0], [1.0, 0.0]]))


def cz_target(V=None):
    V = np.array([[0.0, 1.0], [1.0, 0.0]]) if V is None else np.asarray(V, dtype=float)
    n = V.shape[0]
    return QuadSymplectic(np.block([[np.eye(n), np.zeros((n, n))], [V, np.eye(n)]]))


def project_to_unitary(matrix):
    """
    Nearest unitary in Frobenius norm (polar factor).

    Returns:
        Tuple (ModeUnitary, projection residual)
    """
    matrix = np.asarray(matrix, dtype=complex)
    unitary, _ = scipy.linalg.polar(matrix)
    return ModeUnitary(unitary), float(np.linalg.norm(matrix - unitary))


def standard_fourier_unitary():
    """
    4-mode standard construction of the single-mode Fourier transform.

    IN slots (s1, s2, s3, input); OUT rows (aux1, aux2, aux3, output). A 3-node
    linear cluster is built from s1..s3, node 1 and the input are combined on a
    balanced beamsplitter and read out in p; nodes 2 and 3 are read out directly.
    Elimination gives x_out = -p_in + p3 - sqrt(2) p2 - zeta_2 and
    p_out = x_in - zeta_1 + zeta_3.
    """
    cluster = standard_cluster_unitary(ClusterGraph.linear(3)).matrix
    root = np.sqrt(0.5)
    U = np.zeros((4, 4), dtype=complex)
    U[0, :3] = -cluster[0] * root
    U[0, 3] = 1j * root
    U[1, :3] = 1j * cluster[0] * root
    U[1, 3] = -root
    U[2, :3] = cluster[1]
    U[3, :3] = cluster[2]
    return ModeUnitary(U)


def _fourier4():
    return SynthesisProblem(
        name="fourier4",
        n=1,
        m=3,
        U_T=ModeUnitary(FOURIER_STANDIN_UT),
        input_positions=(3,),
        squeezing=SqueezingSpec.from_db(FOURIER_SQUEEZING_DB),
        squeezing_source=tuple(("db", level) for level in FOURIER_SQUEEZING_DB),
        target=fourier_target(),
        objective=Objective("F1"),
        optimizer=OptimizerConfig(generations=5000, sigma0=0.3, seed=1),
        restarts=4,
        description="Single-mode Fourier transform, 3 ancillas at -7/-6/-4 dB, stand-in pixel basis",
    )


def _cz6():
    unitary, residual = project_to_unitary(PIXEL_BASIS_UT)
    return SynthesisProblem(
        name="cz6",
        n=2,
        m=4,
        U_T=unitary,
        U_T_raw=PIXEL_BASIS_UT.astype(complex),
        projection_residual=residual,
        fixed_premultiplier=OPO_PHASES,
        input_positions=(0, 1),
        squeezing=SqueezingSpec.from_r(CZ_SQUEEZING_R),
        squeezing_source=tuple(("r", value) for value in CZ_SQUEEZING_R),
        target=cz_target(),
        objective=Objective("F1"),
        optimizer=OptimizerConfig(generations=5000, sigma0=0.3, seed=1),
        restarts=8,
        description="Two-mode C_Z gate on the six-mode pixel basis with OPO phase alignment",
    )


def _linear_cluster4():
    return SynthesisProblem(
        name="linear_cluster4",
        n=0,
        m=4,
        U_T=ModeUnitary(FOURIER_STANDIN_UT),
        input_positions=(),
        squeezing=SqueezingSpec.from_db(CLUSTER_SQUEEZING_DB),
        squeezing_source=tuple(("db", level) for level in CLUSTER_SQUEEZING_DB),
        objective=Objective("F3", graph=ClusterGraph.linear(4)),
        optimizer=OptimizerConfig(generations=5000, sigma0=0.3, seed=1),
        restarts=4,
        description="4-node linear cluster nullifiers from the Fourier-scenario squeezing",
    )


BUILTINS = {
    "fourier4": _fourier4,
    "cz6": _cz6,
    "linear_cluster4": _linear_cluster4,
}


def builtin_names():
    return sorted(BUILTINS)


def builtin_problem(name):
    """
    Build a builtin scenario by name.

    Args:
        name: One of builtin_names()

    Returns:
        SynthesisProblem
    """
    if name not in BUILTINS:
        raise ValidationError(f"unknown builtin '{name}', available: {', '.join(builtin_names())}")
    return BUILTINS[name]()


def baseline(problem):
    """
    Standard-construction figures for the same squeezing, when one is available.

    Returns:
        Dictionary with computed and published rows, or None
    """
    reference = REFERENCE_ROWS.get(problem.name)
    if problem.name == "fourier4":
        result = eliminate(standard_fourier_unitary(), 1, 3, (3,), problem.squeezing)
        computed = {
            "noise_var_x": result.noise_var_x.tolist(),
            "noise_var_p": result.noise_var_p.tolist(),
            "f1": fitness_f1(result, problem.target),
            "f2": fitness_f2(result),
        }
        return {"computed": computed, "published": reference}
    if problem.objective.kind == "F3":
        graph = problem.objective.graph
        nullifiers = nullifier_variances(standard_cluster_unitary(graph), problem.squeezing, graph)
        computed = {
            "relative": [entry.relative for entry in nullifiers],
            "f3": fitness_f3(nullifiers),
        }
        return {"computed": computed, "published": reference}
    if reference is not None:
        return {"computed": None, "published": reference}
    return None


def describe_builtins():
    """Rows for the list-builtins table."""
    rows = []
    for name in builtin_names():
        problem = builtin_problem(name)
        rows.append({
            "name": name,
            "n": problem.n,
            "m": problem.m,
            "objective": problem.objective.kind,
            "parameters": problem.dimension,
            "restarts": problem.restarts,
            "description": problem.description,
        })
    return rows

