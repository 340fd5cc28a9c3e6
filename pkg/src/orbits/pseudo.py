"""
Orbit segments and delta-pseudo-orbits.

A pseudo-orbit is a finite indexed sequence x_a, ..., x_b whose jumps
d(f(x_k), x_(k+1)) stay below a bound delta.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from src.core.errors import PreconditionError, SeamViolationError
from src.spaces.base import DynamicalSystem

logger = logging.getLogger(__name__)


@dataclass
class OrbitSegment:
    """
    A genuine orbit f^k(start) over the window [a, b].

    Attributes:
        system: System the orbit lives in
        start: The point at index a
        points: f^(k-a)(start) for k in [a, b]
        a: First index of the window
    """

    system: DynamicalSystem
    start: Any
    points: list[Any]
    a: int = 0

    @classmethod
    def of(cls, system: DynamicalSystem, x: Any, length: int, a: int = 0) -> "OrbitSegment":
        return cls(system, x, system.orbit(x, length), a)

    @property
    def b(self) -> int:
        return self.a + len(self.points) - 1

    def as_pseudo_orbit(self, delta: float) -> "PseudoOrbit":
        return PseudoOrbit(self.system, list(self.points), delta, self.a)


@dataclass
class PseudoOrbit:
    """
    A delta-pseudo-orbit over the window [a, b].

    Attributes:
        system: System the points belong to
        points: x_a, ..., x_b
        delta: Jump bound
        a: First index of the window
    """

    system: DynamicalSystem
    points: list[Any]
    delta: float
    a: int = 0

    def __len__(self) -> int:
        return len(self.points)

    @property
    def b(self) -> int:
        return self.a + len(self.points) - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.a, self.b

    def batch(self) -> Any:
        return self.system.stack(self.points)

    def jumps(self) -> np.ndarray:
        """d(f(x_k), x_(k+1)) for every consecutive pair."""
        if len(self.points) < 2:
            return np.zeros(0)
        images = self.system.apply_batch(self.system.stack(self.points[:-1]))
        return self.system.dist_rows(images, self.system.stack(self.points[1:]))

    def closing_jump(self) -> float:
        """d(f(x_b), x_a): the jump that would close the window periodically."""
        return self.system.dist(self.system.apply(self.points[-1]), self.points[0])

    def rows(self) -> list[dict[str, Any]]:
        """CSV rows (index, coordinates, jump into the next point)."""
        jumps = self.jumps()
        out = []
        for i, p in enumerate(self.points):
            row: dict[str, Any] = {"index": self.a + i}
            row.update(point_fields(p))
            row["jump"] = float(jumps[i]) if i < len(jumps) else ""
            out.append(row)
        return out


class PseudoOrbitCheck(NamedTuple):
    """Validity of a pseudo-orbit and its largest jump."""

    valid: bool
    max_jump: float


def point_fields(p: Any) -> dict[str, Any]:
    """Flat, serializable description of a point."""
    if isinstance(p, np.ndarray):
        return {"x": float(p[0]), "y": float(p[1])}
    if hasattr(p, "index"):
        return {"ideal": int(p.index)}
    if hasattr(p, "symbols"):
        return {"origin": p.origin, "symbols": "".join(str(s) for s in p.symbols)}
    return {"point": str(p)}


def perturbed_pseudo_orbit(
    system: DynamicalSystem,
    x0: Any,
    delta: float,
    length: int,
    seed: int,
) -> PseudoOrbit:
    """
    Pseudo-orbit x_(k+1) = f(x_k) + noise of size < delta.

    The perturbation is system-appropriate: coordinate jitter on torus and
    sphere, resampled tail symbols on shifts, none on ideal points.
    A zero delta reproduces the true orbit.

    Raises:
        PreconditionError: If delta is negative or length < 1
    """
    if delta < 0:
        raise PreconditionError(f"delta must be >= 0, got {delta}")
    if length < 1:
        raise PreconditionError(f"length must be >= 1, got {length}")
    rng = np.random.default_rng(seed)
    points = [system.canonical(x0)]
    for _ in range(length - 1):
        image = system.apply(points[-1])
        points.append(system.perturb(image, delta, rng) if delta > 0 else image)
    return PseudoOrbit(system, points, delta)


def verify_pseudo_orbit(po: PseudoOrbit) -> PseudoOrbitCheck:
    """True iff every jump is below delta; also the largest jump."""
    jumps = po.jumps()
    max_jump = float(np.max(jumps)) if len(jumps) else 0.0
    return PseudoOrbitCheck(bool(np.all(jumps < po.delta)), max_jump)


def concatenate_segments(segments: Sequence[PseudoOrbit], delta: float) -> PseudoOrbit:
    """
    Glue pseudo-orbits end to start.

    Args:
        segments: Pseudo-orbits of one system, in order
        delta: Jump bound of the result

    Returns:
        A pseudo-orbit whose jumps are the in-segment jumps plus the seam jumps

    Raises:
        SeamViolationError: If a seam jump d(f(last_i), first_(i+1)) is not below delta
        PreconditionError: If no segments are given or an in-segment jump is not below delta
    """
    if not segments:
        raise PreconditionError("Nothing to concatenate")
    system = segments[0].system
    points: list[Any] = []
    for i, seg in enumerate(segments):
        jumps = seg.jumps()
        if len(jumps) and np.max(jumps) >= delta:
            raise PreconditionError(f"Segment {i} has a jump {np.max(jumps):.3e} >= {delta:.3e}")
        if i > 0:
            seam = system.dist(system.apply(points[-1]), seg.points[0])
            if seam >= delta:
                raise SeamViolationError(i - 1, seam, delta)
        points.extend(seg.points)
    return PseudoOrbit(system, points, delta, segments[0].a)
