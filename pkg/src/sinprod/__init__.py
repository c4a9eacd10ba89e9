"""Numerical laboratory for the infinite product f(x) = prod [sin(2^n x)]^(2/(2n+1)^2).

The product vanishes on a dense set yet is positive almost everywhere, upper
semicontinuous everywhere, and Lebesgue integrable with a strictly positive
integral. Each of those claims has a computable counterpart here: exact
dyadic argument reduction, certified enclosures, measure experiments,
semicontinuity witnesses, and a reproducible midpoint quadrature table.
"""

from .angles import (
    AngleRep,
    BitStream,
    DyadicPi,
    RawReal,
    ReducedArg,
    angle_from_half_turns,
    angle_to_radians,
    parse_angle,
    reduce_argument,
)
from .clearance import (
    ClearanceReport,
    ExcludedInterval,
    clearance_report,
    clearance_scan,
    distances,
    excluded_intervals,
    excluded_length_bound,
    pointwise_lower_bound,
)
from .errors import (
    AngleParseError,
    CertificateUnavailable,
    DegenerateFit,
    DepthExceedsPrecision,
    DepthTooLarge,
    InsufficientData,
    InvalidSampleCount,
    SinprodError,
    ZeroFactor,
)
from .kernels import factor_exponent
from .measure import (
    MeasureEstimate,
    empirical_small_value_measure,
    exact_log_integral,
    layer_cake_integral,
    superlevel_measure,
)
from .product import (
    ProductEnclosure,
    evaluate_limit,
    factor_value,
    log_factor,
    log_partial_product,
    partial_product,
)
from .quadrature import (
    ConvergenceRow,
    FitResult,
    convergence_table,
    diff_diagnostic_slope,
    fit_ab,
    lebesgue_lower_bound,
    midpoint_estimate,
    resolve_workers,
)
from .special import (
    ChainStep,
    FactorBound,
    closed_form_pi_thirds,
    constructed_zero_angle,
    constructed_zero_partial,
    constructed_zero_truncation,
    factor_bound_at,
    lattice_angle,
    pi_thirds_angle,
    special_depth,
    special_depth_chain,
    verify_constructed_zero,
)
from .usc import (
    DepthOneMax,
    UscCheckReport,
    UscWitness,
    check_usc,
    depth_one_maximum,
    growth_bound_rhs,
    usc_witness,
)

__version__ = "0.1.0"

__all__ = [
    "AngleRep", "BitStream", "DyadicPi", "RawReal", "ReducedArg",
    "angle_from_half_turns", "angle_to_radians", "parse_angle", "reduce_argument",
    "ClearanceReport", "ExcludedInterval", "clearance_report", "clearance_scan",
    "distances", "excluded_intervals", "excluded_length_bound", "pointwise_lower_bound",
    "AngleParseError", "CertificateUnavailable", "DegenerateFit",
    "DepthExceedsPrecision", "DepthTooLarge", "InsufficientData",
    "InvalidSampleCount", "SinprodError", "ZeroFactor",
    "factor_exponent",
    "MeasureEstimate", "empirical_small_value_measure", "exact_log_integral",
    "layer_cake_integral", "superlevel_measure",
    "ProductEnclosure", "evaluate_limit", "factor_value", "log_factor",
    "log_partial_product", "partial_product",
    "ConvergenceRow", "FitResult", "convergence_table", "diff_diagnostic_slope",
    "fit_ab", "lebesgue_lower_bound", "midpoint_estimate", "resolve_workers",
    "ChainStep", "FactorBound", "closed_form_pi_thirds", "constructed_zero_angle",
    "constructed_zero_partial", "constructed_zero_truncation", "factor_bound_at",
    "lattice_angle", "pi_thirds_angle", "special_depth", "special_depth_chain",
    "verify_constructed_zero",
    "DepthOneMax", "UscCheckReport", "UscWitness", "check_usc",
    "depth_one_maximum", "growth_bound_rhs", "usc_witness",
    "__version__",
]
