"""
Dynamical balls and their structure.

- sets: local stable/unstable sets, Gamma balls, asymptotic balls
- classify: trivial/finite/countable-like/cantor-like classification
- expansive: expansive points, expansivity surrogates and radii, cw intersection counts
"""

from src.balls.classify import (
    GROWTH_RATIO,
    Classification,
    LevelMembers,
    Structure,
    classify_structure,
    greedy_separated,
)
from src.balls.expansive import (
    CwReport,
    ExpansivePointReport,
    ExpansivityProfile,
    ExpansivityRadius,
    cw_intersection_count,
    expansive_points_scan,
    expansivity_profile,
    expansivity_radius,
    radius_ladder,
)
from src.balls.sets import (
    BallLevel,
    BallReport,
    InclusionReport,
    LevelProfile,
    asymptotic_ball,
    ball_from_profiles,
    ball_profile,
    dynamical_ball,
    local_stable,
    local_unstable,
    stable_inclusion_check,
)

__all__ = [
    "GROWTH_RATIO",
    "BallLevel",
    "BallReport",
    "Classification",
    "CwReport",
    "ExpansivePointReport",
    "ExpansivityProfile",
    "ExpansivityRadius",
    "InclusionReport",
    "LevelMembers",
    "LevelProfile",
    "Structure",
    "asymptotic_ball",
    "ball_from_profiles",
    "ball_profile",
    "classify_structure",
    "cw_intersection_count",
    "dynamical_ball",
    "expansive_points_scan",
    "expansivity_profile",
    "expansivity_radius",
    "greedy_separated",
    "local_stable",
    "local_unstable",
    "radius_ladder",
    "stable_inclusion_check",
]
