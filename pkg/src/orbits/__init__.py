"""
Orbit segments, pseudo-orbits and shadowing.

- pseudo: segments, delta-pseudo-orbits, generation, verification, concatenation
- shadow: constructive shadowing for torus, sphere, example 1 and shifts
"""

from src.orbits.pseudo import (
    OrbitSegment,
    PseudoOrbit,
    PseudoOrbitCheck,
    concatenate_segments,
    perturbed_pseudo_orbit,
    verify_pseudo_orbit,
)
from src.orbits.shadow import (
    ShadowResult,
    TighteningReport,
    example1_shadow,
    identity_shadow,
    linear_shadow,
    quotient_shadow,
    shadow,
    shift_shadow,
    tightening_slope,
)

__all__ = [
    "OrbitSegment",
    "PseudoOrbit",
    "PseudoOrbitCheck",
    "ShadowResult",
    "TighteningReport",
    "concatenate_segments",
    "example1_shadow",
    "identity_shadow",
    "linear_shadow",
    "perturbed_pseudo_orbit",
    "quotient_shadow",
    "shadow",
    "shift_shadow",
    "tightening_slope",
    "verify_pseudo_orbit",
]
