"""
Abstract dynamical system interface.

A system is a compact metric space with an invertible map. Besides the
scalar operations it exposes "batches": the vectorised container its
samples use for many points at once (a numpy array for torus-based
systems, a list for symbolic ones).
"""

from abc import ABC, abstractmethod
from collections.abc import Hashable, Sequence
from typing import Any, Literal

import numpy as np

from src.core.models import PointKind, SystemHandle

Direction = Literal["forward", "backward"]

FLOAT_TOL = 1e-9


class DynamicalSystem(ABC):
    """
    Base class for every bundled homeomorphism.

    Implementations must provide the map, its inverse, the metric and the
    sampling hooks used by the ball, entropy and chain estimators.

    Example:
        system = build_system("cat")
        y = system.apply(x)
        d = system.dist(x, y)
    """

    name: str = "abstract"
    point_kind: PointKind = "torus2"
    float_tol: float = FLOAT_TOL
    diameter: float = 1.0

    @property
    def handle(self) -> SystemHandle:
        """Serializable identity of the system."""
        return SystemHandle(name=self.name, point_kind=self.point_kind, params=self.params())

    @abstractmethod
    def params(self) -> dict[str, Any]:
        """System-specific parameters recorded in reports."""
        pass

    @abstractmethod
    def apply(self, x: Any, direction: Direction = "forward") -> Any:
        """
        Apply the map (or its inverse) to one point.

        Args:
            x: A point of this system
            direction: "forward" for f, "backward" for f^-1

        Returns:
            The image point
        """
        pass

    @abstractmethod
    def dist(self, x: Any, y: Any) -> float:
        """Distance between two points."""
        pass

    @abstractmethod
    def random_point(self, rng: np.random.Generator) -> Any:
        """Draw a point from a seeded generator."""
        pass

    @abstractmethod
    def perturb(self, x: Any, delta: float, rng: np.random.Generator) -> Any:
        """Return a point strictly within delta of x."""
        pass

    @abstractmethod
    def cloud(self, center: Any, level: int) -> "OrbitSample":  # noqa: F821
        """
        Sample cloud around a center at a refinement level.

        Level 0 is the coarsest; the center is always at index 0.
        """
        pass

    @abstractmethod
    def resolution(self, level: int) -> float:
        """Spacing of the cloud at a refinement level."""
        pass

    @abstractmethod
    def cell_key(self, x: Any, grid: int) -> Hashable:
        """Cell of a grid partition containing x (for density diagnostics)."""
        pass

    @abstractmethod
    def n_cells(self, grid: int) -> int:
        """Number of cells of the grid partition."""
        pass

    # Batches

    def stack(self, points: Sequence[Any]) -> Any:
        return list(points)

    def unstack(self, batch: Any) -> list[Any]:
        return list(batch)

    def take(self, batch: Any, indices: Sequence[int] | np.ndarray) -> Any:
        return [batch[int(i)] for i in indices]

    def concat(self, batches: Sequence[Any]) -> Any:
        out: list[Any] = []
        for batch in batches:
            out.extend(batch)
        return out

    def batch_len(self, batch: Any) -> int:
        return len(batch)

    def apply_batch(self, batch: Any, direction: Direction = "forward") -> Any:
        return [self.apply(x, direction) for x in batch]

    def dist_to(self, batch: Any, y: Any) -> np.ndarray:
        """Distances from every point of a batch to y."""
        return np.array([self.dist(x, y) for x in batch], dtype=float)

    def pairwise(self, batch: Any) -> np.ndarray:
        """Symmetric matrix of pairwise distances within a batch."""
        points = self.unstack(batch)
        n = len(points)
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                out[i, j] = out[j, i] = self.dist(points[i], points[j])
        return out

    def dist_rows(self, left: Any, right: Any) -> np.ndarray:
        """Row-wise distances d(left_i, right_i)."""
        pairs = zip(self.unstack(left), self.unstack(right), strict=True)
        return np.array([self.dist(a, b) for a, b in pairs], dtype=float)

    def exact_dist(self, x: Any, y: Any) -> Any | None:
        """Exact rational distance when the system has one for this pair."""
        return None

    def cross(self, left: Any, right: Any) -> np.ndarray:
        """Matrix of distances d(left_i, right_j)."""
        rows = self.unstack(left)
        return np.array([self.dist_to(right, x) for x in rows]).reshape(len(rows), -1)

    # Derived operations

    def canonical(self, x: Any) -> Any:
        return x

    def same_point(self, x: Any, y: Any) -> bool:
        return self.dist(x, y) <= self.float_tol

    def iterate(self, x: Any, k: int) -> Any:
        """f^k(x) for any integer k."""
        direction: Direction = "forward" if k >= 0 else "backward"
        for _ in range(abs(k)):
            x = self.apply(x, direction)
        return x

    def orbit(self, x: Any, length: int) -> list[Any]:
        """[x, f(x), ..., f^(length-1)(x)]."""
        points = [x]
        for _ in range(length - 1):
            points.append(self.apply(points[-1]))
        return points

    def default_horizon(self) -> int:
        return 60

    def n_levels(self) -> int:
        return 3

    def link_partners(
        self, anchors: Any, n: int, delta: float, epsilon: float
    ) -> tuple[np.ndarray, Any]:
        """
        Partner proposals for link detection; none by default.

        Returns:
            (anchor index per partner, batch of partners)
        """
        return np.zeros(0, dtype=np.int64), self.stack([])

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"
