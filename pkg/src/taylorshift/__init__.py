"""Reversed Taylor-shift operators and multiple-universality constructions.

The package builds Laurent-polynomial approximants ``f`` whose truncated
reversed Taylor expansions ``T~_{lambda^(s)(n)}(f)`` approximate given
principal parts on a compact set, and measures the errors with certified
interpolation bounds.
"""

from .approximant import (
    ApproximantReport,
    DecayRow,
    IndexSequence,
    TargetSpec,
    build_approximant,
    damped_principal_part,
    find_n0,
)
from .errors import *  # noqa: F401,F403
from .geometry import CompactSetSpec, Contour, DomainSpec, Geometry, leja_points, preset, theta_estimate
from .interpolation import bw_derivative_bound, bw_error_bound, contour_interpolant, newton_interpolant
from .laurent import LaurentPoly, d_coeff, format_sci, lp_eval, lp_sup_norm, parse_complex, precision
from .operators import OperatorSpec, apply_T, apply_Ttilde, t_multiplier, ttilde_of_z_times
from .sequences import (
    GrowthModel,
    check_gap_condition,
    domain_disjointness,
    exp_growth_subsequence,
    poly_growth_subsequence,
    t_a_identity_suite,
)

__version__ = "0.1.0"
