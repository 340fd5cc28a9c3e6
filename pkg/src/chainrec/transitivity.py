"""
Forward and backward density of single orbits on a grid of cells.

A transitive point visits every cell eventually; the density gap is the
fraction of cells its orbit has not reached by the horizon.
"""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.core.errors import PreconditionError
from src.spaces.base import Direction, DynamicalSystem
from src.spaces.sphere import SphereSystem
from src.spaces.torus import TorusSystem

logger = logging.getLogger(__name__)

DEFAULT_GRID = 50
GAP_TOLERANCE = 0.01
OMEGA_SAMPLE_LIMIT = 1000
CURVE_POINTS = 8

# Irrational seed of the transitive-point search: (sqrt 2 - 1, sqrt 3 - 1)
IRRATIONAL_SEED = np.array([np.sqrt(2.0) - 1.0, np.sqrt(3.0) - 1.0])


@dataclass
class DensityProfile:
    """Cells visited by one half-orbit."""

    direction: Direction
    horizon: int
    n_cells: int
    visited: int
    last_first_hit: int
    curve: list[tuple[int, float]] = field(default_factory=list)

    @property
    def coverage(self) -> float:
        return self.visited / self.n_cells

    @property
    def gap(self) -> float:
        return 1.0 - self.coverage


@dataclass
class TransitivityReport:
    """
    Density diagnostics of the orbit of one point.

    Attributes:
        point: The tested point
        horizon: Number of iterates in each direction
        grid: Cells per side of the grid
        forward: Forward density profile
        backward: Backward density profile, None when not computed
        omega_sample: One late-orbit point per cell reached in the last quarter
        tolerance: Largest gap accepted as dense
    """

    point: Any
    horizon: int
    grid: int
    forward: DensityProfile
    backward: DensityProfile | None
    omega_sample: list[Any]
    tolerance: float = GAP_TOLERANCE

    @property
    def forward_density_gap(self) -> float:
        return self.forward.gap

    @property
    def backward_density_gap(self) -> float | None:
        return self.backward.gap if self.backward else None

    @property
    def forward_transitive(self) -> bool:
        return self.forward.gap <= self.tolerance

    @property
    def backward_transitive(self) -> bool | None:
        return None if self.backward is None else self.backward.gap <= self.tolerance

    @property
    def transitive(self) -> bool:
        return self.forward_transitive and bool(self.backward_transitive)

    def summary(self) -> dict[str, Any]:
        point = self.point
        return {
            "point": point.tolist() if isinstance(point, np.ndarray) else str(point),
            "horizon": self.horizon,
            "grid": self.grid,
            "forward_density_gap": self.forward_density_gap,
            "backward_density_gap": self.backward_density_gap,
            "forward_transitive": self.forward_transitive,
            "backward_transitive": self.backward_transitive,
            "omega_sample_size": len(self.omega_sample),
        }

    def rows(self) -> list[dict[str, Any]]:
        """Coverage curve rows for both directions."""
        out = []
        for profile in (self.forward, self.backward):
            if profile is None:
                continue
            out += [
                {"direction": profile.direction, "horizon": h, "coverage": c}
                for h, c in profile.curve
            ]
        return out


def _torus_cell_codes(system: TorusSystem, orbit: np.ndarray, grid: int) -> np.ndarray:
    ij = np.minimum((orbit * grid).astype(np.int64), grid - 1)
    codes = ij[:, 0] * grid + ij[:, 1]
    if isinstance(system, SphereSystem):
        mirrored = (grid - 1 - ij[:, 0]) * grid + (grid - 1 - ij[:, 1])
        codes = np.minimum(codes, mirrored)
    return codes


def orbit_cells(
    system: DynamicalSystem, x: Any, horizon: int, grid: int, direction: Direction = "forward"
) -> tuple[list[Any], np.ndarray]:
    """
    Half-orbit of x and the integer cell code of every point.

    On torus systems the half-orbit is the float orbit_array, a shadowed
    rounding pseudo-orbit; its cells are those of a genuine orbit starting
    near x, up to points on cell boundaries.

    Returns:
        (points, codes) with codes[k] the cell of f^(±k)(x), k = 0..horizon-1
    """
    if isinstance(system, TorusSystem):
        orbit = system.orbit_array(np.asarray(x, dtype=float), horizon, direction)
        return list(orbit), _torus_cell_codes(system, orbit, grid)

    points = [x]
    for _ in range(horizon - 1):
        points.append(system.apply(points[-1], direction))
    labels: dict[Any, int] = {}
    codes = np.array(
        [labels.setdefault(system.cell_key(p, grid), len(labels)) for p in points], dtype=np.int64
    )
    return points, codes


def density_profile(
    codes: np.ndarray, n_cells: int, direction: Direction, curve_points: int = CURVE_POINTS
) -> DensityProfile:
    """Coverage of the cells in `codes` and its growth along the orbit."""
    horizon = len(codes)
    _, first = np.unique(codes, return_index=True)
    first.sort()
    checkpoints = np.unique(np.geomspace(1, horizon, num=curve_points).astype(np.int64))
    curve = [
        (int(h), float(np.searchsorted(first, h, side="left") / n_cells)) for h in checkpoints
    ]
    return DensityProfile(
        direction=direction,
        horizon=horizon,
        n_cells=n_cells,
        visited=len(first),
        last_first_hit=int(first[-1]) if len(first) else 0,
        curve=curve,
    )


def omega_sample(points: list[Any], codes: np.ndarray, limit: int = OMEGA_SAMPLE_LIMIT) -> list[Any]:
    """First point of each cell reached in the last quarter of the orbit."""
    start = len(points) - max(1, len(points) // 4)
    _, first = np.unique(codes[start:], return_index=True)
    chosen = np.sort(first)[:limit] + start
    return [points[i] for i in chosen]


def transitivity_check(
    system: DynamicalSystem,
    x: Any,
    horizon: int,
    grid: int = DEFAULT_GRID,
    backward: bool = True,
    tolerance: float = GAP_TOLERANCE,
) -> TransitivityReport:
    """
    Forward and backward density surrogate of x in T+ and T-.

    The gap is the fraction of the system's grid cells the half-orbit
    f^0..f^(horizon-1) never enters. It can only shrink as the horizon grows.

    Args:
        system: The dynamical system
        x: Starting point
        horizon: Iterates per direction
        grid: Cells per side
        backward: Also run the backward orbit
        tolerance: Largest gap reported as transitive

    Raises:
        PreconditionError: If horizon or grid is below 1
    """
    if horizon < 1 or grid < 1:
        raise PreconditionError(f"Need horizon >= 1 and grid >= 1, got {horizon}, {grid}")
    n_cells = system.n_cells(grid)
    points, codes = orbit_cells(system, x, horizon, grid, "forward")
    forward = density_profile(codes, n_cells, "forward")
    back = None
    if backward:
        _, back_codes = orbit_cells(system, x, horizon, grid, "backward")
        back = density_profile(back_codes, n_cells, "backward")
    report = TransitivityReport(
        point=x,
        horizon=horizon,
        grid=grid,
        forward=forward,
        backward=back,
        omega_sample=omega_sample(points, codes),
        tolerance=tolerance,
    )
    logger.info(
        f"Transitivity of {system.name} orbit: forward gap={forward.gap:.4f}"
        + (f", backward gap={back.gap:.4f}" if back else "")
    )
    return report


def seed_points(n: int, offset: np.ndarray = IRRATIONAL_SEED) -> np.ndarray:
    """n torus points k·(sqrt 2 - 1, sqrt 3 - 1) mod 1, avoiding rational periodic points."""
    k = np.arange(1, n + 1, dtype=float)[:, None]
    return np.mod(k * offset[None, :], 1.0)
