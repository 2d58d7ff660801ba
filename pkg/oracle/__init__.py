"""
Oracle package: covariance calculus and Monte-Carlo checks of the elimination engine
"""
from .gaussian_oracle import (
    DEFAULT_SIGMA,
    GaussianState,
    McEstimate,
    propagate,
    condition_on_p_measurements,
    ideal_measurement_covariance,
    elimination_cross_check,
    mc_estimate,
    mc_estimate_unitary,
    nullifier_covariance_check,
)

__all__ = [
    'DEFAULT_SIGMA',
    'GaussianState',
    'McEstimate',
    'propagate',
    'condition_on_p_measurements',
    'ideal_measurement_covariance',
    'elimination_cross_check',
    'mc_estimate',
    'mc_estimate_unitary',
    'nullifier_covariance_check',
]
