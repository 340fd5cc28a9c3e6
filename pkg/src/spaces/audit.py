"""
Metric and invertibility audits on random samples.

These are the property checks every system must pass: metric axioms on
random triples and the round trip f^-1(f(x)) = x.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from src.spaces.base import DynamicalSystem

logger = logging.getLogger(__name__)


@dataclass
class AxiomReport:
    """
    Worst observed violations of the metric axioms.

    Attributes:
        n_triples: Number of random triples checked
        worst_identity: max d(x, x)
        worst_symmetry: max |d(x, y) - d(y, x)|
        worst_triangle: max d(x, z) - d(x, y) - d(y, z) (0 when never violated)
        exact_triples: Triples checked in exact rational arithmetic
        exact_violations: Triangle violations among the exact triples
        tolerance: Tolerance the report is judged against
    """

    n_triples: int
    worst_identity: float
    worst_symmetry: float
    worst_triangle: float
    exact_triples: int = 0
    exact_violations: int = 0
    tolerance: float = 1e-9
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.worst_identity <= self.tolerance
            and self.worst_symmetry <= self.tolerance
            and self.worst_triangle <= self.tolerance
            and self.exact_violations == 0
        )

    def summary(self) -> dict[str, float | int | bool]:
        return {
            "n_triples": self.n_triples,
            "worst_identity": self.worst_identity,
            "worst_symmetry": self.worst_symmetry,
            "worst_triangle": self.worst_triangle,
            "exact_triples": self.exact_triples,
            "exact_violations": self.exact_violations,
            "ok": self.ok,
        }


def random_batch(system: DynamicalSystem, rng: np.random.Generator, size: int):
    return system.stack([system.random_point(rng) for _ in range(size)])


def check_metric_axioms(
    system: DynamicalSystem,
    n_triples: int,
    seed: int = 0,
) -> AxiomReport:
    """
    Check identity, symmetry and the triangle inequality on random triples.

    Triples whose three distances the system can compute exactly are also
    checked in rational arithmetic.
    """
    rng = np.random.default_rng(seed)
    xs = random_batch(system, rng, n_triples)
    ys = random_batch(system, rng, n_triples)
    zs = random_batch(system, rng, n_triples)

    dxy = system.dist_rows(xs, ys)
    dyx = system.dist_rows(ys, xs)
    dyz = system.dist_rows(ys, zs)
    dxz = system.dist_rows(xs, zs)
    dxx = system.dist_rows(xs, xs)

    exact_triples = 0
    exact_violations = 0
    for x, y, z in zip(system.unstack(xs), system.unstack(ys), system.unstack(zs), strict=True):
        exy, eyz, exz = system.exact_dist(x, y), system.exact_dist(y, z), system.exact_dist(x, z)
        if exy is None or eyz is None or exz is None:
            continue
        exact_triples += 1
        if exz > exy + eyz:
            exact_violations += 1

    report = AxiomReport(
        n_triples=n_triples,
        worst_identity=float(np.max(np.abs(dxx))),
        worst_symmetry=float(np.max(np.abs(dxy - dyx))),
        worst_triangle=float(max(0.0, np.max(dxz - dxy - dyz))),
        exact_triples=exact_triples,
        exact_violations=exact_violations,
        tolerance=system.float_tol,
    )
    logger.debug(f"Metric axioms on {system.name}: {report.summary()}")
    return report


def check_inverse(system: DynamicalSystem, n_points: int, seed: int = 0) -> float:
    """Worst d(f^-1(f(x)), x) over random points."""
    rng = np.random.default_rng(seed)
    xs = random_batch(system, rng, n_points)
    back = system.apply_batch(system.apply_batch(xs, "forward"), "backward")
    return float(np.max(system.dist_rows(back, xs)))


def check_forward_inverse(system: DynamicalSystem, n_points: int, seed: int = 0) -> float:
    """Worst d(f(f^-1(x)), x) over random points."""
    rng = np.random.default_rng(seed)
    xs = random_batch(system, rng, n_points)
    there = system.apply_batch(system.apply_batch(xs, "backward"), "forward")
    return float(np.max(system.dist_rows(there, xs)))


def check_quotient_well_defined(system: DynamicalSystem, n_points: int, seed: int = 0) -> float:
    """
    Worst distance between the images of the two lifts x and -x of a class.

    Only meaningful for the sphere quotient; both lifts must land in the
    same class.
    """
    rng = np.random.default_rng(seed)
    lifts = rng.random((n_points, 2))
    matrix = system.matrix
    image = system.from_lift(lifts @ matrix.T)
    image_neg = system.from_lift(np.mod(-lifts, 1.0) @ matrix.T)
    return float(np.max(system.dist_rows(image, image_neg)))
