"""
Symplectic package: quadrature-representation types and decompositions
"""
from .core import (
    ModeUnitary,
    QuadSymplectic,
    PassivePair,
    omega,
    is_symplectic,
    unitary_to_quad_symplectic,
    passive_pair_from_unitary,
)
from .bloch_messiah import (
    BlochMessiahFactors,
    TrivialRealization,
    RequiresAncillas,
    bloch_messiah,
    classify_trivial,
    normalize_postprocessing,
)

__all__ = [
    'ModeUnitary',
    'QuadSymplectic',
    'PassivePair',
    'omega',
    'is_symplectic',
    'unitary_to_quad_symplectic',
    'passive_pair_from_unitary',
    'BlochMessiahFactors',
    'TrivialRealization',
    'RequiresAncillas',
    'bloch_messiah',
    'classify_trivial',
    'normalize_postprocessing',
]
