"""
Compact metric spaces and their homeomorphisms.

- torus: hyperbolic toral automorphisms (the cat map)
- sphere: the antipodal sphere quotient
- example1: the cat map compactified by a sequence of fixed points
- symbolic: full shifts and the identity on the Cantor set
- samples: finite point clouds with lazily computed orbits
- registry: string ids to systems
"""

from src.spaces.audit import (
    AxiomReport,
    check_forward_inverse,
    check_inverse,
    check_metric_axioms,
    check_quotient_well_defined,
)
from src.spaces.base import FLOAT_TOL, Direction, DynamicalSystem
from src.spaces.example1 import (
    ANCHOR,
    Example1Batch,
    Example1System,
    IdealPoint,
    example1_apply,
    example1_dist,
    example1_ideal_fraction,
    is_ideal,
)
from src.spaces.registry import SYSTEM_IDS, build_system
from src.spaces.samples import (
    ConcatSample,
    IteratedSample,
    LatticeSample,
    OrbitSample,
    StoredOrbitSample,
    SubSample,
    grid_modulus,
)
from src.spaces.sphere import SINGULAR_POINTS, SphereSystem, canonical_many, sphere_dist
from src.spaces.symbolic import (
    CantorSystem,
    ShiftPoint,
    ShiftSystem,
    cantor_dist,
    cantor_identity,
    make_shift_point,
    shift_apply,
    shift_dist,
)
from src.spaces.torus import (
    CAT_MATRIX,
    HyperbolicSplitting,
    TorusSystem,
    torus_apply,
    torus_dist,
)

__all__ = [
    "ANCHOR",
    "AxiomReport",
    "CAT_MATRIX",
    "CantorSystem",
    "ConcatSample",
    "Direction",
    "DynamicalSystem",
    "Example1Batch",
    "Example1System",
    "FLOAT_TOL",
    "HyperbolicSplitting",
    "IdealPoint",
    "IteratedSample",
    "LatticeSample",
    "OrbitSample",
    "SINGULAR_POINTS",
    "SYSTEM_IDS",
    "ShiftPoint",
    "ShiftSystem",
    "SphereSystem",
    "StoredOrbitSample",
    "SubSample",
    "TorusSystem",
    "build_system",
    "canonical_many",
    "cantor_dist",
    "cantor_identity",
    "check_forward_inverse",
    "check_inverse",
    "check_metric_axioms",
    "check_quotient_well_defined",
    "example1_apply",
    "example1_dist",
    "example1_ideal_fraction",
    "grid_modulus",
    "is_ideal",
    "make_shift_point",
    "shift_apply",
    "shift_dist",
    "sphere_dist",
    "torus_apply",
    "torus_dist",
]
