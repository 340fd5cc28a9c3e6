"""
Hyperbolic toral automorphisms.

A unimodular integer matrix A with |trace A| > 2 induces a homeomorphism
of the flat torus R^2/Z^2. The inverse is computed exactly over the
integers, the metric is the flat one minimised over integer translates.
"""

import logging
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np

from src.core.errors import SystemConfigError
from src.spaces.base import Direction, DynamicalSystem
from src.spaces.samples import LatticeSample

logger = logging.getLogger(__name__)

CAT_MATRIX = ((2, 1), (1, 1))

# Unit translates for the 3x3 neighbourhood
_TRANSLATES = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)

LEVEL_STEPS = (1e-2, 1e-3, 1e-4)


def as_matrix(matrix: Sequence[Sequence[int]] | Sequence[int] | np.ndarray) -> np.ndarray:
    """
    Validate and normalise an integer 2x2 matrix.

    Accepts nested pairs or four integers in row order.

    Raises:
        SystemConfigError: If the matrix is not an integer 2x2 matrix
    """
    arr = np.asarray(matrix)
    if arr.size != 4:
        raise SystemConfigError(f"Matrix must have four entries, got {arr.size}")
    arr = arr.reshape(2, 2)
    if not np.all(np.equal(np.mod(arr, 1), 0)):
        raise SystemConfigError(f"Matrix entries must be integers, got {arr.tolist()}")
    return arr.astype(np.int64)


def integer_inverse(matrix: np.ndarray) -> np.ndarray:
    """
    Exact inverse of a unimodular integer matrix.

    Raises:
        SystemConfigError: If |det| != 1
    """
    (a, b), (c, d) = matrix.tolist()
    det = a * d - b * c
    if abs(det) != 1:
        raise SystemConfigError(f"Matrix {matrix.tolist()} is not unimodular (det={det})")
    return det * np.array([[d, -b], [-c, a]], dtype=np.int64)


def check_hyperbolic(matrix: np.ndarray) -> None:
    """Raise SystemConfigError unless |det| = 1 and |trace| > 2."""
    integer_inverse(matrix)
    trace = int(matrix[0, 0] + matrix[1, 1])
    if abs(trace) <= 2:
        raise SystemConfigError(f"Matrix {matrix.tolist()} is not hyperbolic (trace={trace})")


def torus_apply(
    matrix: Sequence[Sequence[int]] | np.ndarray,
    x: np.ndarray,
    direction: Direction = "forward",
) -> np.ndarray:
    """
    A·x mod 1 (or A^-1·x mod 1).

    Args:
        matrix: Hyperbolic unimodular integer matrix
        x: Point (or (K, 2) array of points) in [0,1)^2
        direction: "forward" or "backward"

    Returns:
        Image point(s) reduced into [0,1)^2

    Raises:
        SystemConfigError: If the matrix is not unimodular or not hyperbolic

    Example:
        >>> torus_apply([[2, 1], [1, 1]], np.array([0.5, 0.5]))
        array([0.5, 0. ])
    """
    m = as_matrix(matrix)
    check_hyperbolic(m)
    if direction == "backward":
        m = integer_inverse(m)
    return np.mod(np.asarray(x, dtype=float) @ m.T, 1.0)


def torus_dist(x: np.ndarray, y: np.ndarray) -> float:
    """Flat distance between two torus points, minimised over the 9 nearest translates."""
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return float(np.min(np.hypot(*(diff + _TRANSLATES).T)))


def wrap(diff: np.ndarray) -> np.ndarray:
    """Representative of a difference vector in [-1/2, 1/2]^2."""
    return diff - np.round(diff)


def torus_norm(diff: np.ndarray) -> np.ndarray:
    """Torus norm of difference vectors along the last axis."""
    w = wrap(diff)
    return np.sqrt(np.sum(w * w, axis=-1))


def lift_centered(diff: np.ndarray) -> np.ndarray:
    """Representative of a difference vector in (-1/2, 1/2]^2."""
    w = np.mod(diff, 1.0)
    return np.where(w > 0.5, w - 1.0, w)


@dataclass(frozen=True)
class HyperbolicSplitting:
    """
    Eigen-splitting E^s + E^u of a hyperbolic matrix.

    Attributes:
        lambda_s: Contracting eigenvalue (signed, |lambda_s| < 1)
        lambda_u: Expanding eigenvalue (signed, |lambda_u| > 1)
        e_s: Unit stable eigenvector
        e_u: Unit unstable eigenvector
        coords: Matrix sending a vector to its (stable, unstable) coordinates
        shadow_constant: C with epsilon <= C * delta for linear shadows
    """

    lambda_s: float
    lambda_u: float
    e_s: np.ndarray
    e_u: np.ndarray
    coords: np.ndarray
    shadow_constant: float

    @classmethod
    def of(cls, matrix: np.ndarray) -> "HyperbolicSplitting":
        values, vectors = np.linalg.eig(matrix.astype(float))
        values = np.real(values)
        vectors = np.real(vectors)
        order = np.argsort(np.abs(values))
        lam_s, lam_u = float(values[order[0]]), float(values[order[1]])
        e_s = vectors[:, order[0]] / np.linalg.norm(vectors[:, order[0]])
        e_u = vectors[:, order[1]] / np.linalg.norm(vectors[:, order[1]])
        basis = np.column_stack([e_s, e_u])
        coords = np.linalg.inv(basis)
        # Projector norms are 1 for symmetric matrices
        p_s = np.linalg.norm(np.outer(e_s, coords[0]), 2)
        p_u = np.linalg.norm(np.outer(e_u, coords[1]), 2)
        constant = p_s / (1.0 - abs(lam_s)) + p_u / (abs(lam_u) - 1.0)
        return cls(lam_s, lam_u, e_s, e_u, coords, float(constant))

    @property
    def entropy(self) -> float:
        """Topological entropy log|lambda_u|."""
        return float(np.log(abs(self.lambda_u)))


class TorusSystem(DynamicalSystem):
    """
    Hyperbolic toral automorphism f(x) = A·x mod 1.

    Args:
        matrix: Integer 2x2 matrix (default: the cat map [[2,1],[1,1]])

    Raises:
        SystemConfigError: If A is not unimodular or not hyperbolic
    """

    name = "cat"
    point_kind = "torus2"
    diameter = float(np.sqrt(2.0) / 2.0)

    def __init__(self, matrix: Sequence[Sequence[int]] | np.ndarray = CAT_MATRIX):
        self.matrix = as_matrix(matrix)
        check_hyperbolic(self.matrix)
        self.inverse = integer_inverse(self.matrix)
        logger.debug(f"Built {self.name} with matrix {self.matrix.tolist()}")

    @cached_property
    def splitting(self) -> HyperbolicSplitting:
        return HyperbolicSplitting.of(self.matrix)

    def params(self) -> dict[str, Any]:
        return {"matrix": self.matrix.tolist()}

    # Point operations

    def apply(self, x: np.ndarray, direction: Direction = "forward") -> np.ndarray:
        m = self.matrix if direction == "forward" else self.inverse
        return self.from_lift(m @ np.asarray(x, dtype=float))

    def apply_batch(self, batch: np.ndarray, direction: Direction = "forward") -> np.ndarray:
        m = self.matrix if direction == "forward" else self.inverse
        return self.from_lift(np.asarray(batch, dtype=float) @ m.T)

    def from_lift(self, lifts: np.ndarray) -> np.ndarray:
        """Reduce lifts to points of the space."""
        return np.mod(lifts, 1.0)

    def dist(self, x: np.ndarray, y: np.ndarray) -> float:
        return torus_dist(x, y)

    def dist_to(self, batch: np.ndarray, y: np.ndarray) -> np.ndarray:
        return torus_norm(np.asarray(batch) - np.asarray(y))

    def dist_rows(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        return torus_norm(np.asarray(left) - np.asarray(right))

    def pairwise(self, batch: np.ndarray) -> np.ndarray:
        batch = np.asarray(batch)
        return torus_norm(batch[:, None, :] - batch[None, :, :])

    def cross(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        return torus_norm(np.asarray(left)[:, None, :] - np.asarray(right)[None, :, :])

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        return self.canonical(rng.random(2))

    def perturb(self, x: np.ndarray, delta: float, rng: np.random.Generator) -> np.ndarray:
        radius = 0.999 * delta * rng.random()
        angle = 2.0 * np.pi * rng.random()
        return self.from_lift(np.asarray(x) + radius * np.array([np.cos(angle), np.sin(angle)]))

    # Batches

    def stack(self, points: Sequence[Any]) -> np.ndarray:
        return np.asarray(points, dtype=float).reshape(-1, 2)

    def unstack(self, batch: np.ndarray) -> list[np.ndarray]:
        return [row.copy() for row in np.asarray(batch)]

    def take(self, batch: np.ndarray, indices: Sequence[int] | np.ndarray) -> np.ndarray:
        return np.asarray(batch)[np.asarray(indices, dtype=np.int64)]

    def concat(self, batches: Sequence[np.ndarray]) -> np.ndarray:
        return np.vstack(list(batches))

    def batch_len(self, batch: np.ndarray) -> int:
        return int(np.asarray(batch).shape[0])

    # Sampling

    def cloud(self, center: np.ndarray, level: int) -> LatticeSample:
        return LatticeSample(self, center, step=LEVEL_STEPS[level], half_width=50)

    def resolution(self, level: int) -> float:
        return LEVEL_STEPS[level]

    def cell_key(self, x: np.ndarray, grid: int) -> Hashable:
        i, j = np.minimum((np.asarray(x) * grid).astype(int), grid - 1)
        return int(i), int(j)

    def n_cells(self, grid: int) -> int:
        return grid * grid

    def grid_points(self, step: float) -> np.ndarray:
        """All points of the grid (1/Q)Z^2 in [0,1)^2, row-major."""
        q = round(1.0 / step)
        r = np.arange(q) / q
        gx, gy = np.meshgrid(r, r, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])

    def orbit_array(self, x: np.ndarray, length: int, direction: Direction = "forward") -> np.ndarray:
        """
        Float orbit [x, f(x), ...] as a (length, 2) array of canonical points.

        Rounding makes this a pseudo-orbit with jumps near machine epsilon,
        not the exact orbit of x: after about 35 steps it has drifted O(1)
        from f^k(x). It stays within shadow_constant x (jump size) of the
        genuine orbit of a nearby point.
        """
        m = self.matrix if direction == "forward" else self.inverse
        (a, b), (c, d) = m.tolist()
        out = np.empty((length, 2))
        u, v = float(x[0]), float(x[1])
        for k in range(length):
            out[k] = (u, v)
            u, v = (a * u + b * v) % 1.0, (c * u + d * v) % 1.0
        return self.from_lift(out)

    def periodic_points(self, n: int, sign: int = 1) -> np.ndarray:
        """
        Exact solutions of A^n x = sign·x mod 1, sorted.

        The solutions form the group B^-1 Z^2 / Z^2 with B = A^n - sign·I,
        of order |det B|; it is enumerated as adj(B)·Z^2 mod |det B|.

        Returns:
            Array (|det B|, 2) of points with rational coordinates
        """
        power = np.linalg.matrix_power(self.matrix, n)
        b = power - sign * np.eye(2, dtype=np.int64)
        (p, q), (r, s) = b.tolist()
        det = abs(p * s - q * r)
        if det == 0:
            return np.empty((0, 2))
        adj = np.array([[s, -q], [-r, p]], dtype=np.int64)
        c1, c2 = np.mod(adj[:, 0], det), np.mod(adj[:, 1], det)
        order1 = det // np.gcd.reduce([det, int(c1[0]), int(c1[1])])
        h1 = np.mod(np.outer(np.arange(order1), c1), det)
        cosets = det // order1
        rows = np.vstack([np.mod(h1 + t * c2, det) for t in range(cosets)])
        rows = np.unique(rows, axis=0)
        if len(rows) != det:
            logger.warning(f"Periodic enumeration found {len(rows)} of {det} points for n={n}")
        return self.from_lift(rows / det)
