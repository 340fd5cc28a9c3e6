"""
Expansive-point detection and expansivity surrogates.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.balls.classify import Structure
from src.balls.sets import LevelProfile, ball_from_profiles, ball_profile
from src.core.errors import PreconditionError
from src.orbits.pseudo import point_fields
from src.spaces.base import DynamicalSystem
from src.spaces.sphere import SphereSystem
from src.spaces.torus import TorusSystem

logger = logging.getLogger(__name__)

DENSITY_RADIUS = 0.1
RADIUS_STEPS = 4


@dataclass
class ExpansivePointReport:
    """
    Per tested point, the largest grid radius with a trivial dynamical ball.

    Attributes:
        points: Tested points
        eps_grid: Tested radii, ascending
        trivial: Boolean (points, radii) matrix of trivial balls
        largest_trivial: Largest trivial radius per point (None if none)
        monotone: Whether triviality at a radius implied it at all smaller radii
        density_radius: r of the density diagnostic
        density_fraction: Fraction of tested points with an expansive point within r
    """

    points: list[Any]
    eps_grid: list[float]
    trivial: np.ndarray
    largest_trivial: list[float | None]
    monotone: bool
    density_radius: float
    density_fraction: float

    @property
    def expansive(self) -> np.ndarray:
        return np.array([eps is not None for eps in self.largest_trivial], dtype=bool)

    def summary(self) -> dict[str, Any]:
        return {
            "eps_grid": self.eps_grid,
            "tested": len(self.points),
            "expansive": int(self.expansive.sum()),
            "monotone": self.monotone,
            "density_radius": self.density_radius,
            "density_fraction": self.density_fraction,
        }

    def rows(self) -> list[dict[str, Any]]:
        return [
            {**point_fields(p), "largest_trivial_eps": "" if eps is None else eps}
            for p, eps in zip(self.points, self.largest_trivial, strict=True)
        ]


def expansive_points_scan(
    system: DynamicalSystem,
    points: Sequence[Any],
    eps_grid: Sequence[float],
    horizon: int | None = None,
    density_radius: float = DENSITY_RADIUS,
) -> ExpansivePointReport:
    """
    Find, for each point, the largest radius of eps_grid with trivial Gamma.

    Args:
        system: The system
        points: Points to test
        eps_grid: Candidate radii
        horizon: N (default: the system's horizon)
        density_radius: r for the density diagnostic

    Returns:
        ExpansivePointReport
    """
    if not points:
        raise PreconditionError("No points to scan")
    horizon = system.default_horizon() if horizon is None else horizon
    grid = sorted(float(e) for e in eps_grid)
    trivial = np.zeros((len(points), len(grid)), dtype=bool)
    for i, x in enumerate(points):
        profiles = ball_profile(system, x, horizon)
        for j, eps in enumerate(grid):
            report = ball_from_profiles(system, x, eps, profiles)
            trivial[i, j] = report.classification.structure == Structure.TRIVIAL

    largest: list[float | None] = []
    monotone = True
    for row in trivial:
        hits = np.flatnonzero(row)
        largest.append(grid[hits[-1]] if len(hits) else None)
        if len(hits) and not row[: hits[-1] + 1].all():
            monotone = False
    if not monotone:
        logger.warning(f"Triviality on {system.name} is not monotone in the radius")

    expansive = [p for p, eps in zip(points, largest, strict=True) if eps is not None]
    if expansive:
        near = system.cross(system.stack(list(points)), system.stack(expansive))
        fraction = float(np.mean(np.min(near, axis=1) <= density_radius))
    else:
        fraction = 0.0
    logger.info(
        f"Expansive scan on {system.name}: {len(expansive)}/{len(points)} points, "
        f"density {fraction:.2f} at r={density_radius}"
    )
    return ExpansivePointReport(
        points=list(points),
        eps_grid=grid,
        trivial=trivial,
        largest_trivial=largest,
        monotone=monotone,
        density_radius=density_radius,
        density_fraction=fraction,
    )


@dataclass
class ExpansivityProfile:
    """
    Ball classifications at one radius summarised into expansivity surrogates.

    Attributes:
        radius: c
        labels: Classification label per center
        max_members: Largest Gamma member count at the finest level
        counts: Number of centers per structure
    """

    radius: float
    labels: list[str]
    max_members: int
    counts: dict[str, int] = field(default_factory=dict)

    def _all(self, allowed: set[Structure]) -> bool:
        return all(Structure(k) in allowed for k, v in self.counts.items() if v)

    @property
    def expansive(self) -> bool:
        return self._all({Structure.TRIVIAL})

    @property
    def finite_expansive(self) -> bool:
        return self._all({Structure.TRIVIAL, Structure.FINITE})

    @property
    def n_expansive(self) -> int | None:
        """Smallest n with every ball of at most n points, when all are finite."""
        return self.max_members if self.finite_expansive else None

    @property
    def countably_expansive(self) -> bool:
        return self._all({Structure.TRIVIAL, Structure.FINITE, Structure.COUNTABLE})

    def summary(self) -> dict[str, Any]:
        return {
            "radius": self.radius,
            "counts": self.counts,
            "expansive": self.expansive,
            "n_expansive": self.n_expansive,
            "finite_expansive": self.finite_expansive,
            "countably_expansive": self.countably_expansive,
        }


def _summarise(
    system: DynamicalSystem,
    centers: Sequence[Any],
    c: float,
    profiles: Sequence[list[LevelProfile]],
) -> ExpansivityProfile:
    labels = []
    counts = {s.value: 0 for s in Structure}
    max_members = 0
    for x, profile in zip(centers, profiles, strict=True):
        report = ball_from_profiles(system, x, c, profile)
        structure = report.classification.structure
        counts[structure.value] += 1
        labels.append(report.classification.label)
        max_members = max(max_members, len(report.members_gamma))
    return ExpansivityProfile(radius=c, labels=labels, max_members=max_members, counts=counts)


def expansivity_profile(
    system: DynamicalSystem,
    centers: Sequence[Any],
    c: float,
    horizon: int | None = None,
) -> ExpansivityProfile:
    """Classify Gamma_c^N at every center and summarise."""
    horizon = system.default_horizon() if horizon is None else horizon
    profiles = [ball_profile(system, x, horizon) for x in centers]
    return _summarise(system, centers, c, profiles)


def radius_ladder(c_max: float, steps: int = RADIUS_STEPS) -> list[float]:
    """Radii c_max / 2^k for k = steps - 1, ..., 0, ascending."""
    return [c_max / 2**k for k in range(steps - 1, -1, -1)]


@dataclass
class ExpansivityRadius:
    """
    Largest radius of a ladder at which every sampled ball is countable or smaller.

    Attributes:
        radius: Detected c (None when the smallest radius already fails)
        profiles: One ExpansivityProfile per ladder radius, ascending
    """

    radius: float | None
    profiles: list[ExpansivityProfile]

    @property
    def ladder(self) -> list[float]:
        return [p.radius for p in self.profiles]

    @property
    def profile(self) -> ExpansivityProfile | None:
        """Profile at the detected radius."""
        return next((p for p in self.profiles if p.radius == self.radius), None)

    def summary(self) -> dict[str, Any]:
        return {
            "radius": self.radius,
            "ladder": self.ladder,
            "countable": [p.countably_expansive for p in self.profiles],
        }

    def rows(self) -> list[dict[str, Any]]:
        return [{"radius": p.radius, **p.counts} for p in self.profiles]


def expansivity_radius(
    system: DynamicalSystem,
    centers: Sequence[Any],
    radii: Sequence[float],
    horizon: int | None = None,
) -> ExpansivityRadius:
    """
    Detect a countable expansivity radius from a ladder of radii.

    Profiles are computed once per center and classified at every radius.
    The detected radius is the largest one such that at it, and at every
    smaller ladder radius, each ball classifies trivial, finite or
    countable-like.

    Raises:
        PreconditionError: If there are no centers or no radii
    """
    if not centers:
        raise PreconditionError("No centers to classify")
    if not radii:
        raise PreconditionError("Radius ladder is empty")
    horizon = system.default_horizon() if horizon is None else horizon
    profiles = [ball_profile(system, x, horizon) for x in centers]
    summaries = [_summarise(system, centers, c, profiles) for c in sorted(radii)]

    radius = None
    for summary in summaries:
        if not summary.countably_expansive:
            break
        radius = summary.radius
    logger.info(f"Expansivity radius on {system.name}: {radius} over ladder {sorted(radii)}")
    return ExpansivityRadius(radius=radius, profiles=summaries)


@dataclass
class CwReport:
    """Intersections of c-stable and c-unstable segments over center pairs."""

    epsilon: float
    counts: np.ndarray
    pairs: int

    @property
    def max_count(self) -> int:
        return int(self.counts.max()) if self.counts.size else 0


def _segment_hits(
    system: TorusSystem,
    a: np.ndarray,
    b: np.ndarray,
    epsilon: float,
) -> list[np.ndarray]:
    """Points a + t·e_s ≡ ±(b + r·e_u) with |t|, |r| <= epsilon."""
    split = system.splitting
    signs = (1, -1) if isinstance(system, SphereSystem) else (1,)
    hits = []
    for sign in signs:
        # a + t e_s - sign (b + r e_u) = m
        basis = np.column_stack([split.e_s, -sign * split.e_u])
        solve = np.linalg.inv(basis)
        offset = a - sign * b
        base = np.round(offset)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                m = base + np.array([dx, dy])
                t, r = solve @ (m - offset)
                if abs(t) <= epsilon and abs(r) <= epsilon:
                    hits.append(system.from_lift(a + t * split.e_s))
    return hits


def cw_intersection_count(
    system: DynamicalSystem,
    centers: Sequence[np.ndarray],
    epsilon: float,
) -> CwReport:
    """
    Count points of C^s_eps(a) ∩ C^u_eps(b) for center pairs within 2·eps.

    The segments are the eps-pieces of the eigenlines through a and b,
    projected to the quotient. Distinct points are counted up to float_tol.

    Raises:
        PreconditionError: If the system has no linear splitting
    """
    if not isinstance(system, TorusSystem):
        raise PreconditionError(f"No stable and unstable segments on {system.name}")
    pts = [np.asarray(c, dtype=float) for c in centers]
    counts = []
    for i, a in enumerate(pts):
        for b in pts[i:]:
            if system.dist(a, b) > 2.0 * epsilon:
                continue
            distinct: list[np.ndarray] = []
            for h in _segment_hits(system, a, b, epsilon):
                if all(system.dist(h, d) > system.float_tol for d in distinct):
                    distinct.append(h)
            counts.append(len(distinct))
    report = CwReport(epsilon=epsilon, counts=np.asarray(counts, dtype=np.int64), pairs=len(counts))
    logger.debug(f"cw count on {system.name} at eps={epsilon}: max {report.max_count}")
    return report
