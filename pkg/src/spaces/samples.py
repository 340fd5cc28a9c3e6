"""
Finite point samples together with their orbits.

Every estimator in the laboratory looks at a finite cloud of points and
their iterates f^k for a window of times k. A sample owns that cloud and
hands out the time-k batch on demand, computing and caching iterates.

The lattice sample is the workhorse for torus-based systems: cloud points
are center + j/Q for integer offsets j, and offsets are iterated exactly
modulo Q with the integer matrix. Only the center is iterated in floating
point, so the cloud geometry never degrades with the horizon.
"""

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any

import numpy as np

from src.core.errors import PreconditionError
from src.spaces.base import DynamicalSystem

logger = logging.getLogger(__name__)


def grid_modulus(step: float) -> int:
    """
    Integer Q with step = 1/Q.

    Raises:
        PreconditionError: If 1/step is not an integer
    """
    if step <= 0:
        raise PreconditionError(f"Grid step must be positive, got {step}")
    q = round(1.0 / step)
    if q < 2 or abs(q * step - 1.0) > 1e-9:
        raise PreconditionError(f"Grid step {step} must be 1/Q for an integer Q >= 2")
    return q


class OrbitSample(ABC):
    """
    A finite cloud of points with lazily computed iterates.

    Attributes:
        system: The system the points belong to
        resolution: Spacing of the cloud (used by structure classification)
        center_index: Index of the distinguished center point
    """

    def __init__(self, system: DynamicalSystem, resolution: float, center_index: int = 0):
        self.system = system
        self.resolution = resolution
        self.center_index = center_index

    @abstractmethod
    def __len__(self) -> int:
        pass

    @abstractmethod
    def points_at(self, k: int) -> Any:
        """Batch of f^k(y) for every sample point y."""
        pass

    def point(self, index: int, k: int = 0) -> Any:
        batch = self.system.take(self.points_at(k), [index])
        return self.system.unstack(batch)[0]

    def points(self, indices: Sequence[int] | np.ndarray, k: int = 0) -> list[Any]:
        return self.system.unstack(self.system.take(self.points_at(k), indices))

    def center_distances(self, k: int) -> np.ndarray:
        """d(f^k(center), f^k(y)) for every sample point y."""
        batch = self.points_at(k)
        return self.system.dist_to(batch, self.point(self.center_index, k))

    def max_center_distance(self, times: Sequence[int]) -> np.ndarray:
        """Pointwise maximum of center distances over the given times."""
        out = np.zeros(len(self))
        for k in times:
            np.maximum(out, self.center_distances(k), out=out)
        return out

    def pairwise(self, k: int, indices: Sequence[int] | np.ndarray | None = None) -> np.ndarray:
        batch = self.points_at(k)
        if indices is not None:
            batch = self.system.take(batch, indices)
        return self.system.pairwise(batch)

    def subset(self, indices: Sequence[int] | np.ndarray) -> "SubSample":
        return SubSample(self, indices)


class LatticeSample(OrbitSample):
    """
    Cloud center + j/Q on a torus-based system, iterated exactly on offsets.

    Args:
        system: A torus-based system exposing integer `matrix` and `inverse`
        center: Center lift in [0,1)^2
        step: Grid step 1/Q
        half_width: Offsets range over [-half_width, half_width]^2 (capped below Q/2)
        offsets: Explicit integer offsets (first row must be the zero offset)
    """

    def __init__(
        self,
        system: DynamicalSystem,
        center: np.ndarray,
        step: float,
        half_width: int = 50,
        offsets: np.ndarray | None = None,
    ):
        super().__init__(system, resolution=step, center_index=0)
        self.modulus = grid_modulus(step)
        if offsets is None:
            offsets = square_offsets(min(half_width, (self.modulus - 1) // 2))
        offsets = np.asarray(offsets, dtype=np.int64)
        if offsets.ndim != 2 or offsets.shape[1] != 2 or np.any(offsets[0] != 0):
            raise PreconditionError("Lattice offsets must be (K, 2) with the zero offset first")
        self.offsets = offsets
        self.center = np.mod(np.asarray(center, dtype=float), 1.0)
        self._states: dict[int, tuple[np.ndarray, np.ndarray]] = {
            0: (self.center, np.mod(offsets, self.modulus)),
        }
        self._cache: dict[int, np.ndarray] = {}

    @classmethod
    def disc(
        cls,
        system: DynamicalSystem,
        center: np.ndarray,
        step: float,
        radius: float,
    ) -> "LatticeSample":
        """Lattice points strictly within `radius` of the center (torus norm)."""
        q = grid_modulus(step)
        h = min(int(np.ceil(radius * q)), (q - 1) // 2)
        offsets = square_offsets(h)
        keep = np.hypot(offsets[:, 0], offsets[:, 1]) / q < radius
        return cls(system, center, step, offsets=offsets[keep])

    def __len__(self) -> int:
        return len(self.offsets)

    def _state(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        if k in self._states:
            return self._states[k]
        sign = 1 if k > 0 else -1
        j = k - sign
        while j not in self._states:
            j -= sign
        base, offs = self._states[j]
        matrix = self.system.matrix if sign > 0 else self.system.inverse
        while j != k:
            base = np.mod(matrix @ base, 1.0)
            offs = np.mod(offs @ matrix.T, self.modulus)
            j += sign
            self._states[j] = (base, offs)
        return self._states[k]

    def points_at(self, k: int) -> np.ndarray:
        if k not in self._cache:
            base, offs = self._state(k)
            self._cache[k] = self.system.from_lift(base + offs / self.modulus)
        return self._cache[k]

    def center_orbit(self, k: int) -> np.ndarray:
        """Float lift of f^k(center) used as the base of the lattice."""
        return self._state(k)[0]


class IteratedSample(OrbitSample):
    """Generic sample iterating each point with the system map."""

    def __init__(
        self,
        system: DynamicalSystem,
        points: Sequence[Any] | np.ndarray,
        resolution: float,
        center_index: int = 0,
    ):
        super().__init__(system, resolution=resolution, center_index=center_index)
        batch = system.stack(points) if not isinstance(points, np.ndarray) else points
        self._cache: dict[int, Any] = {0: batch}
        self._size = system.batch_len(batch)

    def __len__(self) -> int:
        return self._size

    def points_at(self, k: int) -> Any:
        if k in self._cache:
            return self._cache[k]
        sign = 1 if k > 0 else -1
        j = k - sign
        while j not in self._cache:
            j -= sign
        direction = "forward" if sign > 0 else "backward"
        batch = self._cache[j]
        while j != k:
            batch = self.system.apply_batch(batch, direction)
            j += sign
            self._cache[j] = batch
        return batch


class StoredOrbitSample(OrbitSample):
    """
    Sample backed by stored periodic orbits (torus lifts).

    Args:
        system: Torus-based system
        orbits: Array (K, W, 2) of lifts of f^t(y_i) for t in [0, W)
        resolution: Spacing recorded for classification
    """

    def __init__(self, system: DynamicalSystem, orbits: np.ndarray, resolution: float):
        super().__init__(system, resolution=resolution, center_index=0)
        self.orbits = np.asarray(orbits, dtype=float)
        self.period = self.orbits.shape[1]

    def __len__(self) -> int:
        return self.orbits.shape[0]

    def points_at(self, k: int) -> np.ndarray:
        return self.system.from_lift(self.orbits[:, k % self.period])


class ConcatSample(OrbitSample):
    """Concatenation of samples of one system; the first sample's center is the center."""

    def __init__(self, samples: Sequence[OrbitSample]):
        if not samples:
            raise PreconditionError("Cannot concatenate an empty list of samples")
        first = samples[0]
        super().__init__(
            first.system,
            resolution=min(s.resolution for s in samples),
            center_index=first.center_index,
        )
        self.parts = list(samples)

    def __len__(self) -> int:
        return sum(len(s) for s in self.parts)

    def points_at(self, k: int) -> Any:
        return self.system.concat([s.points_at(k) for s in self.parts])


class SubSample(OrbitSample):
    """Index subset of another sample; the center is re-indexed when kept."""

    def __init__(self, parent: OrbitSample, indices: Sequence[int] | np.ndarray):
        idx = np.asarray(indices, dtype=np.int64)
        hits = np.flatnonzero(idx == parent.center_index)
        super().__init__(
            parent.system,
            resolution=parent.resolution,
            center_index=int(hits[0]) if len(hits) else 0,
        )
        self.parent = parent
        self.indices = idx

    def __len__(self) -> int:
        return len(self.indices)

    def points_at(self, k: int) -> Any:
        return self.system.take(self.parent.points_at(k), self.indices)


def square_offsets(half_width: int) -> np.ndarray:
    """Integer offsets of [-h, h]^2 with the zero offset first, then lexicographic."""
    r = np.arange(-half_width, half_width + 1)
    jx, jy = np.meshgrid(r, r, indexing="ij")
    grid = np.column_stack([jx.ravel(), jy.ravel()])
    nonzero = grid[np.any(grid != 0, axis=1)]
    return np.vstack([np.zeros((1, 2), dtype=np.int64), nonzero]).astype(np.int64)
