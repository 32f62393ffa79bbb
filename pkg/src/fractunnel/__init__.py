"""Stationary-phase tunneling times for a rectangular barrier in
space-fractional quantum mechanics (units hbar = c = 2m = 1)."""

from .analysis import PeakResult, SweepTable, find_peak, peak_curve, sweep
from .chronometry import (
    AsymptoteCoeffs,
    TimeBreakdown,
    asymptote,
    asymptotic_time,
    dtheta_dE,
    hartman_limit_qm,
    standard_qm_time,
    tunneling_time,
)
from .finite_diff import fd_derivative
from .params import diffusion_coefficient, geometry, kinematics, validate_config
from .scattering import mu, transmission, v_denominator, xy_components
from .validation import validate_suite

__version__ = "0.1.0"
