"""
Separated sets and entropy estimates.

- separated: greedy and exact (n, delta)-separated subsets
- estimate: entropy slopes, lattice bounds, delta trends, entropy expansivity
"""

from src.entropy.estimate import (
    LATTICE_MODULUS,
    SLOPE_TOL,
    TREND_DELTAS,
    EntropyEstimate,
    EntropyExpansivityReport,
    EntropyTrend,
    ball_sample,
    bowen_ball_size,
    entropy_estimate,
    entropy_expansivity_check,
    entropy_trend,
    fit_slope,
    lattice_separated_bound,
)
from src.entropy.separated import (
    EXACT_LIMIT,
    SeparatedSetResult,
    bowen_distances,
    max_separated,
    maximum_clique,
    verify_witness,
)

__all__ = [
    "EXACT_LIMIT",
    "LATTICE_MODULUS",
    "SLOPE_TOL",
    "TREND_DELTAS",
    "EntropyEstimate",
    "EntropyExpansivityReport",
    "EntropyTrend",
    "SeparatedSetResult",
    "ball_sample",
    "bowen_ball_size",
    "bowen_distances",
    "entropy_estimate",
    "entropy_expansivity_check",
    "entropy_trend",
    "fit_slope",
    "lattice_separated_bound",
    "max_separated",
    "maximum_clique",
    "verify_witness",
]
