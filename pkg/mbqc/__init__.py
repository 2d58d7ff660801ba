"""
MBQC package: measurement elimination, fitness functions and parameterization
"""
from .engine import (
    SqueezingSpec,
    ClusterGraph,
    MbqcResult,
    NullifierVariance,
    db_to_variance,
    r_to_variance,
    eliminate,
    fitness_f1,
    fitness_f2,
    fitness_f3,
    nullifier_variances,
    table_consistency,
    standard_cluster_unitary,
)
from .parameterization import (
    AngleVector,
    RotationPlan,
    default_rotation_plan,
    full_rotation_plan,
    build_delta_lo,
    build_postprocessing,
    assemble_umhd,
    dof_lower_bound,
    dof_balance,
)

__all__ = [
    'SqueezingSpec',
    'ClusterGraph',
    'MbqcResult',
    'NullifierVariance',
    'db_to_variance',
    'r_to_variance',
    'eliminate',
    'fitness_f1',
    'fitness_f2',
    'fitness_f3',
    'nullifier_variances',
    'table_consistency',
    'standard_cluster_unitary',
    'AngleVector',
    'RotationPlan',
    'default_rotation_plan',
    'full_rotation_plan',
    'build_delta_lo',
    'build_postprocessing',
    'assemble_umhd',
    'dof_lower_bound',
    'dof_balance',
]
