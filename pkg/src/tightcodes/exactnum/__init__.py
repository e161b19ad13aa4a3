"""Exact and rigorous number types: rationals, intervals, real algebraic numbers, surds."""
from fractions import Fraction as BigRational

from .interval import Interval, interval_eval_guard
from .realalg import MAX_BISECTIONS, RealAlgebraic, ra_arith, ra_compare
from .upoly import sturm_count, sturm_sequence

__all__ = [
    "BigRational",
    "Interval",
    "interval_eval_guard",
    "RealAlgebraic",
    "ra_arith",
    "ra_compare",
    "MAX_BISECTIONS",
    "sturm_count",
    "sturm_sequence",
]
