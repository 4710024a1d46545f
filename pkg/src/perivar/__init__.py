"""Invariant varieties of periodic points for rational maps with invariants.

Exact symbolic machinery for the biquadratic-map parameter recursion and its
periodicity factors, plus numerical periodic-point, orbit, and Julia-set
analysis of the concrete integrable-family maps.
"""

from .biquad import (
    BiquadParams,
    GammaSeries,
    eval_S,
    extract_gamma,
    gamma_series,
    k_factor,
    q2_of,
    specialize_lv,
    specialize_painleve,
    step,
)
from .maps import MapId, StatePoint, apply, invariants_of
from .periodic import PeriodicPoint, compose_n, expected_count, fossil_points, periodic_points
from .polycore import MultiPoly, QuadExtPoly, exact_div, gcd, wedge

__all__ = [
    "BiquadParams",
    "GammaSeries",
    "MapId",
    "MultiPoly",
    "PeriodicPoint",
    "QuadExtPoly",
    "StatePoint",
    "apply",
    "compose_n",
    "eval_S",
    "exact_div",
    "expected_count",
    "extract_gamma",
    "fossil_points",
    "gamma_series",
    "gcd",
    "invariants_of",
    "k_factor",
    "periodic_points",
    "q2_of",
    "specialize_lv",
    "specialize_painleve",
    "step",
    "wedge",
]

__version__ = "0.1.0"
