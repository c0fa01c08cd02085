"""Fractional parts of xi * alpha^n for algebraic alpha, computed with certified floors."""

__version__ = "0.1.0"

from .errors import PowfracError
from .poly_algebra import AlgebraicNumber, Classification, IntPolynomial, classify, length
from .field import FieldElement, power_sums, trace_sequence
from .orbit import OrbitConfig, OrbitSample, iterate, s_sequence, smallness_check
from .analyze import LimitPointReport, PeriodReport, cluster_limit_points, pure_period_mod

__all__ = [
    "AlgebraicNumber",
    "Classification",
    "FieldElement",
    "IntPolynomial",
    "LimitPointReport",
    "OrbitConfig",
    "OrbitSample",
    "PeriodReport",
    "PowfracError",
    "classify",
    "cluster_limit_points",
    "iterate",
    "length",
    "power_sums",
    "pure_period_mod",
    "s_sequence",
    "smallness_check",
    "trace_sequence",
]
