"""
Synthesis problem: everything needed to score a point in (phi, theta) space.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from mbqc.engine import (
    ClusterGraph,
    SqueezingSpec,
    eliminate,
    fitness_f1,
    fitness_f2,
    fitness_f3,
    nullifier_variances,
)
from mbqc.parameterization import (
    AngleVector,
    RotationPlan,
    assemble_umhd,
    default_rotation_plan,
    full_rotation_plan,
)
from optimizer.evolution import OptimizerConfig
from symplectic.core import ModeUnitary, QuadSymplectic
from utils.errors import DimensionMismatch, ValidationError

OBJECTIVE_KINDS = ("F1", "F1_PLUS_WEIGHTED_F2", "F3")


@dataclass(frozen=True, eq=False)
class Objective:
    kind: str = "F1"
    weight: float = 0.0
    graph: ClusterGraph = None

    def __post_init__(self):
        if self.kind not in OBJECTIVE_KINDS:
            raise ValidationError(f"objective kind must be one of {OBJECTIVE_KINDS}, got {self.kind!r}")
        if self.kind == "F3" and self.graph is None:
            raise ValidationError("objective F3 needs a cluster graph")
        if not self.weight >= 0:
            raise ValidationError(f"objective weight must be non-negative, got {self.weight}")


@dataclass(frozen=True, eq=False)
class Evaluation:
    angles: AngleVector
    value: float
    f1: float = None
    f2: float = None
    f3: float = None
    result: object = None
    nullifiers: list = field(default_factory=list)

    def components(self):
        return {"f1": self.f1, "f2": self.f2, "f3": self.f3}


@dataclass(frozen=True, eq=False)
class SynthesisProblem:
    """
    A scenario: mode counts, fixed basis change, squeezing, target and optimizer setup.

    input_positions are 0-based IN slots. fixed_premultiplier holds the diagonal of a
    phase matrix applied to the right of U_T.
    """
    name: str
    n: int
    m: int
    U_T: ModeUnitary
    input_positions: tuple
    squeezing: SqueezingSpec
    target: QuadSymplectic = None
    objective: Objective = field(default_factory=Objective)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    restarts: int = 1
    fixed_premultiplier: np.ndarray = None
    plan: RotationPlan = None
    description: str = ""
    squeezing_source: tuple = None
    U_T_raw: np.ndarray = None
    projection_residual: float = 0.0

    def __post_init__(self):
        N = self.n + self.m
        if self.n < 0 or self.m < 0 or N == 0:
            raise ValidationError(f"invalid mode counts n={self.n}, m={self.m}")
        if self.U_T.dim != N:
            raise ValidationError(f"N = n + m violated: U_T has {self.U_T.dim} modes, n + m = {N}")
        positions = tuple(int(position) for position in self.input_positions)
        if len(positions) != self.n or len(set(positions)) != self.n:
            raise ValidationError(f"need {self.n} distinct input positions, got {list(positions)}")
        if any(position < 0 or position >= N for position in positions):
            raise ValidationError(f"input positions {list(positions)} out of range for {N} modes")
        object.__setattr__(self, "input_positions", positions)
        if self.squeezing.m != self.m:
            raise ValidationError(f"squeezing lists {self.squeezing.m} ancillas, m = {self.m}")
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")

        if self.objective.kind == "F3":
            if self.n != 0:
                raise ValidationError("cluster objective F3 expects n = 0 (every mode is read out)")
            if self.objective.graph.m != self.m:
                raise ValidationError(f"graph has {self.objective.graph.m} nodes, m = {self.m}")
        else:
            if self.target is None:
                raise ValidationError(f"objective {self.objective.kind} needs a target symplectic")
            if self.target.n_modes != self.n:
                raise ValidationError(f"target acts on {self.target.n_modes} modes, n = {self.n}")

        if self.fixed_premultiplier is not None:
            phases = np.array(self.fixed_premultiplier, dtype=complex).reshape(-1)
            if phases.size != N or np.max(np.abs(np.abs(phases) - 1)) > 1e-10:
                raise ValidationError("fixed premultiplier must list N unit-modulus diagonal entries")
            object.__setattr__(self, "fixed_premultiplier", phases)

        if self.plan is None:
            plan = full_rotation_plan(N) if self.n == 0 else default_rotation_plan(self.n, self.m)
            object.__setattr__(self, "plan", plan)
        elif self.plan.dim != N:
            raise DimensionMismatch(f"rotation plan acts on {self.plan.dim} modes, N = {N}")
        elif self.n:
            object.__setattr__(self, "plan", self.plan.with_outputs(range(self.m, N)))

    @property
    def N(self):
        return self.n + self.m

    @property
    def dimension(self):
        return self.N + len(self.plan)

    def effective_transform(self):
        if self.fixed_premultiplier is None:
            return self.U_T
        return ModeUnitary(self.U_T.matrix * self.fixed_premultiplier[None, :])

    def unpack(self, x):
        if isinstance(x, AngleVector):
            return AngleVector(x.phi, x.theta, self.N, len(self.plan))
        return AngleVector.from_flat(x, self.N, len(self.plan))

    def total_unitary(self, x):
        angles = self.unpack(x)
        return assemble_umhd(angles.theta, angles.phi, self.effective_transform(), self.plan)

    def effective_noise_weight(self, noise_weight=0.0):
        if self.objective.kind == "F1_PLUS_WEIGHTED_F2":
            return self.objective.weight
        return noise_weight

    def evaluate(self, x, noise_weight=0.0):
        """
        Score a flat angle vector.

        Returns:
            Evaluation with the scalar fitness and its components
        """
        angles = self.unpack(x)
        U_total = self.total_unitary(angles)
        if self.objective.kind == "F3":
            nullifiers = nullifier_variances(U_total, self.squeezing, self.objective.graph)
            f3 = fitness_f3(nullifiers)
            return Evaluation(angles=angles, value=f3, f3=f3, nullifiers=nullifiers)

        result = eliminate(U_total, self.n, self.m, self.input_positions, self.squeezing)
        f1 = fitness_f1(result, self.target)
        f2 = fitness_f2(result)
        weight = self.effective_noise_weight(noise_weight)
        value = f1 + weight * f2 if weight else f1
        return Evaluation(angles=angles, value=value, f1=f1, f2=f2, result=result)

    def fitness_function(self, noise_weight=0.0):
        return ProblemFitness(self, self.effective_noise_weight(noise_weight))


class ProblemFitness:
    """Scalar fitness over flat angle vectors, as consumed by the optimizer."""

    def __init__(self, problem, noise_weight):
        self.problem = problem
        self.noise_weight = noise_weight
        self.dimension = problem.dimension

    def __call__(self, x):
        return self.problem.evaluate(x, self.noise_weight).value

    def initial_point(self, rng):
        return rng.uniform(0.0, 2.0 * math.pi, self.dimension)

    def components(self, x):
        return self.problem.evaluate(x, self.noise_weight).components()
