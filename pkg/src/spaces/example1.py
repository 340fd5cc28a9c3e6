"""
Countable compactification of the cat map by a sequence of fixed points.

The space is X = M ∪ E where M is the torus carrying the cat map g and
E = {p_k : k >= 1} is a sequence of extra fixed points accumulating on the
fixed point p0 = (0, 0) of g. Ideal points are stored by index only:

    d(x, y) = 0                    if x = y
            = d0(x, y)             if x, y in M
            = 1/m + d0(x, p0)      if x in M, y = p_m (and symmetrically)
            = 1/m + 1/k            if x = p_m, y = p_k, m != k
"""

import logging
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from src.core.errors import SystemConfigError
from src.spaces.base import Direction, DynamicalSystem
from src.spaces.samples import IteratedSample, LatticeSample, OrbitSample
from src.spaces.torus import CAT_MATRIX, LEVEL_STEPS, TorusSystem, torus_dist, torus_norm

logger = logging.getLogger(__name__)

ANCHOR = np.array([0.0, 0.0])
CAT_BASE = TorusSystem(CAT_MATRIX)

# Ideal points p_1..p_K join a ball cloud with K = ceil(IDEAL_SCALE / step)
IDEAL_SCALE = 0.05


@dataclass(frozen=True)
class IdealPoint:
    """The extra fixed point p_k."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise SystemConfigError(f"Ideal point index must be >= 1, got {self.index}")

    def __repr__(self) -> str:
        return f"p{self.index}"


@dataclass
class Example1Batch:
    """
    Many Example 1 points at once.

    Attributes:
        base: (K, 2) torus coordinates (NaN rows for ideal points)
        ideal: (K,) ideal indices (0 for base points)
    """

    base: np.ndarray
    ideal: np.ndarray

    def __len__(self) -> int:
        return len(self.ideal)

    @property
    def is_ideal(self) -> np.ndarray:
        return self.ideal > 0


def is_ideal(x: Any) -> bool:
    return isinstance(x, IdealPoint)


def example1_dist(x: Any, y: Any) -> float:
    """Distance of Example 1, case by case, with d0 the flat torus metric."""
    if is_ideal(x) and is_ideal(y):
        return 0.0 if x.index == y.index else 1.0 / x.index + 1.0 / y.index
    if is_ideal(x):
        return 1.0 / x.index + torus_dist(y, ANCHOR)
    if is_ideal(y):
        return 1.0 / y.index + torus_dist(x, ANCHOR)
    return torus_dist(x, y)


def example1_ideal_fraction(m: int, k: int) -> Fraction:
    """Exact distance between ideal points p_m and p_k."""
    return Fraction(0) if m == k else Fraction(1, m) + Fraction(1, k)


def example1_apply(
    x: Any,
    direction: Direction = "forward",
    base: TorusSystem | None = None,
) -> Any:
    """g on base points, identity on ideal points; base defaults to the cat map."""
    if is_ideal(x):
        return x
    return (CAT_BASE if base is None else base).apply(x, direction)


class Example1System(DynamicalSystem):
    """
    The compactified cat map with infinitely many chain classes.

    Args:
        matrix: Base hyperbolic matrix g (default: cat map)
        ideal_fraction: Probability that random_point draws an ideal point
        max_random_index: Largest ideal index random_point draws
    """

    name = "example1"
    point_kind = "example1"
    diameter = 2.0

    def __init__(
        self,
        matrix: Sequence[Sequence[int]] | np.ndarray = CAT_MATRIX,
        ideal_fraction: float = 0.25,
        max_random_index: int = 100,
    ):
        self.base = TorusSystem(matrix)
        self.matrix = self.base.matrix
        self.ideal_fraction = ideal_fraction
        self.max_random_index = max_random_index

    def params(self) -> dict[str, Any]:
        return {
            "matrix": self.matrix.tolist(),
            "anchor": ANCHOR.tolist(),
            "base_metric": "flat torus",
        }

    def apply(self, x: Any, direction: Direction = "forward") -> Any:
        return example1_apply(x, direction, self.base)

    def dist(self, x: Any, y: Any) -> float:
        return example1_dist(x, y)

    def exact_dist(self, x: Any, y: Any) -> Fraction | None:
        if is_ideal(x) and is_ideal(y):
            return example1_ideal_fraction(x.index, y.index)
        return None

    def same_point(self, x: Any, y: Any) -> bool:
        if is_ideal(x) or is_ideal(y):
            return is_ideal(x) and is_ideal(y) and x.index == y.index
        return torus_dist(x, y) <= self.float_tol

    def random_point(self, rng: np.random.Generator) -> Any:
        if rng.random() < self.ideal_fraction:
            return IdealPoint(int(rng.integers(1, self.max_random_index + 1)))
        return rng.random(2)

    def perturb(self, x: Any, delta: float, rng: np.random.Generator) -> Any:
        if is_ideal(x):
            return x
        return self.base.perturb(x, delta, rng)

    # Batches

    def stack(self, points: Sequence[Any]) -> Example1Batch:
        base = np.full((len(points), 2), np.nan)
        ideal = np.zeros(len(points), dtype=np.int64)
        for i, p in enumerate(points):
            if is_ideal(p):
                ideal[i] = p.index
            else:
                base[i] = p
        return Example1Batch(base, ideal)

    def unstack(self, batch: Example1Batch) -> list[Any]:
        return [
            IdealPoint(int(k)) if k > 0 else batch.base[i].copy()
            for i, k in enumerate(batch.ideal)
        ]

    def take(self, batch: Example1Batch, indices: Sequence[int] | np.ndarray) -> Example1Batch:
        idx = np.asarray(indices, dtype=np.int64)
        return Example1Batch(batch.base[idx], batch.ideal[idx])

    def concat(self, batches: Sequence[Example1Batch]) -> Example1Batch:
        return Example1Batch(
            np.vstack([b.base for b in batches]),
            np.concatenate([b.ideal for b in batches]),
        )

    def batch_len(self, batch: Example1Batch) -> int:
        return len(batch)

    def apply_batch(self, batch: Example1Batch, direction: Direction = "forward") -> Example1Batch:
        base = batch.base.copy()
        rows = ~batch.is_ideal
        base[rows] = self.base.apply_batch(batch.base[rows], direction)
        return Example1Batch(base, batch.ideal.copy())

    @staticmethod
    def _anchor_gap(batch: Example1Batch) -> np.ndarray:
        """1/k for ideal rows, d0(x, p0) for base rows."""
        out = np.zeros(len(batch))
        ideal = batch.is_ideal
        out[ideal] = 1.0 / batch.ideal[ideal]
        out[~ideal] = torus_norm(batch.base[~ideal])
        return out

    def dist_to(self, batch: Example1Batch, y: Any) -> np.ndarray:
        gap = self._anchor_gap(batch)
        ideal = batch.is_ideal
        out = np.empty(len(batch))
        if is_ideal(y):
            out[:] = gap + 1.0 / y.index
            out[batch.ideal == y.index] = 0.0
        else:
            y_gap = torus_dist(y, ANCHOR)
            out[ideal] = gap[ideal] + y_gap
            out[~ideal] = torus_norm(batch.base[~ideal] - np.asarray(y))
        return out

    def dist_rows(self, left: Example1Batch, right: Example1Batch) -> np.ndarray:
        out = self._anchor_gap(left) + self._anchor_gap(right)
        both_base = ~left.is_ideal & ~right.is_ideal
        out[both_base] = torus_norm(left.base[both_base] - right.base[both_base])
        out[left.is_ideal & (left.ideal == right.ideal)] = 0.0
        return out

    def pairwise(self, batch: Example1Batch) -> np.ndarray:
        gap = self._anchor_gap(batch)
        ideal = batch.is_ideal
        out = gap[:, None] + gap[None, :]
        both_base = ~ideal[:, None] & ~ideal[None, :]
        base = np.nan_to_num(batch.base)
        flat = torus_norm(base[:, None, :] - base[None, :, :])
        out = np.where(both_base, flat, out)
        same_ideal = ideal[:, None] & (batch.ideal[:, None] == batch.ideal[None, :])
        out[same_ideal] = 0.0
        np.fill_diagonal(out, 0.0)
        return out

    def cross(self, left: Example1Batch, right: Example1Batch) -> np.ndarray:
        return self.pairwise(self.concat([left, right]))[: len(left), len(left):]

    # Sampling

    def cloud(self, center: Any, level: int) -> "Example1Cloud":
        step = LEVEL_STEPS[level]
        n_ideal = int(np.ceil(IDEAL_SCALE / step - 1e-9))
        if is_ideal(center):
            indices = [center.index] + [k for k in range(1, n_ideal + 1) if k != center.index]
            lattice = LatticeSample(self.base, ANCHOR, step=step, half_width=50)
            return Example1Cloud(self, lattice, indices, ideal_first=True)
        lattice = LatticeSample(self.base, np.asarray(center), step=step, half_width=50)
        return Example1Cloud(self, lattice, list(range(1, n_ideal + 1)), ideal_first=False)

    def chain_cloud(self, delta: float, step: float = 0.02) -> IteratedSample:
        """Cloud {p0, p1..pK, base grid} with K = ceil(4/delta)."""
        n_ideal = int(np.ceil(4.0 / delta - 1e-9))
        grid = self.base.grid_points(step)
        points: list[Any] = [ANCHOR.copy()]
        points += [IdealPoint(k) for k in range(1, n_ideal + 1)]
        points += [g for g in grid if np.any(g != 0.0)]
        return IteratedSample(self, points, resolution=step)

    def resolution(self, level: int) -> float:
        return LEVEL_STEPS[level]

    def cell_key(self, x: Any, grid: int) -> Hashable:
        if is_ideal(x):
            return ("E", x.index)
        return self.base.cell_key(x, grid)

    def n_cells(self, grid: int) -> int:
        return grid * grid


class Example1Cloud(OrbitSample):
    """Ball cloud mixing a lattice of base points with a block of ideal points."""

    def __init__(
        self,
        system: Example1System,
        lattice: LatticeSample,
        ideal_indices: Sequence[int],
        ideal_first: bool,
    ):
        super().__init__(system, resolution=lattice.resolution, center_index=0)
        self.lattice = lattice
        self.ideal_indices = np.asarray(ideal_indices, dtype=np.int64)
        self.ideal_first = ideal_first
        self._ideal_batch = Example1Batch(
            np.full((len(self.ideal_indices), 2), np.nan), self.ideal_indices.copy()
        )

    def __len__(self) -> int:
        return len(self.lattice) + len(self.ideal_indices)

    def points_at(self, k: int) -> Example1Batch:
        base_rows = self.lattice.points_at(k)
        base_batch = Example1Batch(base_rows, np.zeros(len(base_rows), dtype=np.int64))
        parts = [self._ideal_batch, base_batch] if self.ideal_first else [base_batch, self._ideal_batch]
        return self.system.concat(parts)
