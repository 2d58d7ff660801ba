"""
Optimizer package
"""
from .evolution import (
    CONVERGED_F1,
    OptimizerConfig,
    OptimizationTrace,
    default_population,
    optimize,
    multistart,
    select_restart,
)

__all__ = [
    'OptimizerConfig',
    'OptimizationTrace',
    'default_population',
    'optimize',
    'multistart',
    'select_restart',
    'CONVERGED_F1',
]
