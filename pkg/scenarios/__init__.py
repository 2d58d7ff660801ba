"""
Scenarios package: problem definitions, builtins and scenario files
"""
from .problem import Objective, SynthesisProblem, Evaluation
from .builtins import (
    REFERENCE_ROWS,
    builtin_names,
    builtin_problem,
    baseline,
    fourier_target,
    cz_target,
    standard_fourier_unitary,
)
from .scenario_io import load_scenario, save_scenario, problem_digest, problem_to_dict, problem_from_dict

__all__ = [
    'Objective',
    'SynthesisProblem',
    'Evaluation',
    'REFERENCE_ROWS',
    'builtin_names',
    'builtin_problem',
    'baseline',
    'fourier_target',
    'cz_target',
    'standard_fourier_unitary',
    'load_scenario',
    'save_scenario',
    'problem_digest',
    'problem_to_dict',
    'problem_from_dict',
]
