"""Stirling-type approximations of n! and Gamma(x+1) corrected by the trigamma function.

Exact series coefficients, certified interval enclosures, symbolic proof
identities and convergence measurements.
"""

from .exactnum import Polynomial, RationalFunction, bernoulli, ratfun_equal, ratfun_second_derivative
from .interval import Interval
from .series import FormalSeries, h_series, reexpand_shift, stirling_series, trigamma_series
from .specfun import (
    ApproxParams,
    approx_ln,
    lngamma,
    sevli_batir_margins,
    theorem2_margins,
    trigamma,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxParams",
    "FormalSeries",
    "Interval",
    "Polynomial",
    "RationalFunction",
    "approx_ln",
    "bernoulli",
    "h_series",
    "lngamma",
    "ratfun_equal",
    "ratfun_second_derivative",
    "reexpand_shift",
    "sevli_batir_margins",
    "stirling_series",
    "theorem2_margins",
    "trigamma",
    "trigamma_series",
]
