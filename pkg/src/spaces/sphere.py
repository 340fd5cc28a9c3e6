"""
Antipodal sphere quotient of a hyperbolic toral automorphism.

Points are torus representatives identified with their antipodes -x mod 1;
the stored representative is the lexicographically smaller of the two.
The four points with 2h in Z^2 are the singular points of the quotient.
"""

import logging
from collections.abc import Hashable, Sequence

import numpy as np

from src.spaces.base import Direction
from src.spaces.torus import CAT_MATRIX, TorusSystem, torus_dist, torus_norm

logger = logging.getLogger(__name__)

SINGULAR_POINTS = np.array([[0.0, 0.0], [0.5, 0.0], [0.0, 0.5], [0.5, 0.5]])


def canonical_many(points: np.ndarray) -> np.ndarray:
    """Canonical representatives of an array of torus points."""
    pts = np.mod(np.asarray(points, dtype=float), 1.0)
    neg = np.mod(-pts, 1.0)
    use_neg = (neg[..., 0] < pts[..., 0]) | (
        (neg[..., 0] == pts[..., 0]) & (neg[..., 1] < pts[..., 1])
    )
    return np.where(use_neg[..., None], neg, pts)


def sphere_dist(x: np.ndarray, y: np.ndarray) -> float:
    """min(torus_dist(x, y), torus_dist(x, -y mod 1))."""
    y = np.asarray(y, dtype=float)
    return min(torus_dist(x, y), torus_dist(x, np.mod(-y, 1.0)))


class SphereSystem(TorusSystem):
    """
    Homeomorphism of the sphere induced by A through the antipodal quotient.

    The induced map applies A to a representative and canonicalises; it is
    well defined because A(-x) = -A(x).
    """

    name = "sphere"
    point_kind = "sphere_quotient"

    def __init__(self, matrix: Sequence[Sequence[int]] | np.ndarray = CAT_MATRIX):
        super().__init__(matrix)

    def from_lift(self, lifts: np.ndarray) -> np.ndarray:
        return canonical_many(lifts)

    def canonical(self, x: np.ndarray) -> np.ndarray:
        return canonical_many(x)

    def dist(self, x: np.ndarray, y: np.ndarray) -> float:
        return sphere_dist(x, y)

    def dist_to(self, batch: np.ndarray, y: np.ndarray) -> np.ndarray:
        batch = np.asarray(batch)
        y = np.asarray(y)
        return np.minimum(torus_norm(batch - y), torus_norm(batch + y))

    def dist_rows(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        left, right = np.asarray(left), np.asarray(right)
        return np.minimum(torus_norm(left - right), torus_norm(left + right))

    def pairwise(self, batch: np.ndarray) -> np.ndarray:
        batch = np.asarray(batch)
        return np.minimum(
            torus_norm(batch[:, None, :] - batch[None, :, :]),
            torus_norm(batch[:, None, :] + batch[None, :, :]),
        )

    def cross(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        left, right = np.asarray(left), np.asarray(right)
        return np.minimum(
            torus_norm(left[:, None, :] - right[None, :, :]),
            torus_norm(left[:, None, :] + right[None, :, :]),
        )

    def lifts(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Both torus lifts of a class."""
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        return x, np.mod(-x, 1.0)

    def apply_lift(self, x: np.ndarray, direction: Direction = "forward") -> np.ndarray:
        """A·x mod 1 without canonicalisation."""
        m = self.matrix if direction == "forward" else self.inverse
        return np.mod(m @ np.asarray(x, dtype=float), 1.0)

    def cell_key(self, x: np.ndarray, grid: int) -> Hashable:
        i, j = np.minimum((np.asarray(x) * grid).astype(int), grid - 1)
        return min((int(i), int(j)), (grid - 1 - int(i), grid - 1 - int(j)))

    def n_cells(self, grid: int) -> int:
        return len({self.cell_key(((i + 0.5) / grid, (j + 0.5) / grid), grid)
                    for i in range(grid) for j in range(grid)})

    def link_partners(
        self, anchors: np.ndarray, n: int, delta: float, epsilon: float
    ) -> tuple[np.ndarray, np.ndarray]:
        """Reflections of the anchor orbits across stable lines of singular points."""
        from src.horseshoe.links import reflection_partners

        return reflection_partners(self, np.atleast_2d(anchors), n, delta, epsilon)

    def periodic_points(self, n: int, sign: int = 1) -> np.ndarray:
        """Classes with A^n x = ±x mod 1 (both signs), canonical and deduplicated."""
        both = np.vstack([super().periodic_points(n, 1), super().periodic_points(n, -1)])
        return np.unique(canonical_many(both), axis=0)
