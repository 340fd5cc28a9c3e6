"""
Entropy estimates from separated-set growth.

h(F, delta) is read as the least-squares slope of log s_n(F, delta) against
n over the top half of an n range. Two counting methods are available:

- greedy: greedy separated counts on a finite sample F, carried forward in n
  (a witness separated at n stays separated at n + 1). Counts reaching half
  of |F| are saturated and left out of the fit.
- lattice: for a torus automorphism acting on the grid group (Z/Q)^2, every
  maximal separated set is spanning, so ceil(Q^2 / |B_n|) bounds s_n from
  below, where B_n is the Bowen ball around 0. It is computed exactly in
  integer arithmetic and is the whole-space estimator.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from scipy import stats

from src.balls.classify import greedy_separated
from src.balls.sets import BallReport, dynamical_ball
from src.core.errors import PreconditionError
from src.entropy.separated import as_sample, bowen_distances, verify_witness
from src.orbits.pseudo import point_fields
from src.spaces.base import DynamicalSystem
from src.spaces.samples import ConcatSample, OrbitSample
from src.spaces.sphere import SphereSystem
from src.spaces.torus import TorusSystem

logger = logging.getLogger(__name__)

Method = Literal["greedy", "lattice"]

SLOPE_TOL = 0.05
TREND_DELTAS = (0.1, 0.05, 0.025)
LATTICE_MODULUS = 10000
MIN_BOWEN_BALL = 16


@dataclass
class EntropyEstimate:
    """
    Growth of separated counts and its slope.

    Attributes:
        delta: Separation threshold
        method: Counting method
        values: (n, log s_n) pairs
        slope: Least-squares slope over the fitted n
        fit_ns: The n used in the fit
        saturated: n whose counts were excluded from the fit
    """

    delta: float
    method: str
    values: list[tuple[int, float]]
    slope: float
    fit_ns: list[int] = field(default_factory=list)
    saturated: list[int] = field(default_factory=list)

    @property
    def counts(self) -> list[int]:
        return [round(math.exp(v)) for _, v in self.values]

    def summary(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "method": self.method,
            "slope": self.slope,
            "fit_ns": self.fit_ns,
            "saturated": self.saturated,
            "counts": self.counts,
        }

    def rows(self) -> list[dict[str, Any]]:
        return [
            {"delta": self.delta, "n": n, "log_count": v, "fitted": n in self.fit_ns}
            for n, v in self.values
        ]


def fit_slope(ns: Sequence[int], logs: Sequence[float]) -> float:
    """Least-squares slope over the top half of the points, never negative."""
    if len(ns) < 2:
        return 0.0
    half = len(ns) // 2
    x, y = np.asarray(ns[half:], dtype=float), np.asarray(logs[half:], dtype=float)
    if len(x) < 2:
        x, y = np.asarray(ns[-2:], dtype=float), np.asarray(logs[-2:], dtype=float)
    return max(0.0, float(stats.linregress(x, y).slope))


def greedy_counts(sample: OrbitSample, delta: float, n_range: Sequence[int]) -> list[int]:
    """Greedy counts at each n, carried forward so they never decrease."""
    counts: list[int] = []
    running, done = None, 0
    best: list[int] = []
    for n in n_range:
        running = bowen_distances(sample, n, running, done)
        done = n
        kept = greedy_separated(running > delta).tolist()
        if len(kept) > len(best):
            best = kept
        counts.append(len(best))
    if not verify_witness(sample, best, done, delta):
        raise AssertionError(f"Greedy witness failed re-verification at delta={delta}")
    return counts


def _check_range(n_range: Sequence[int]) -> list[int]:
    ns = [int(n) for n in n_range]
    if not ns or ns[0] < 1 or any(b <= a for a, b in zip(ns, ns[1:], strict=False)):
        raise PreconditionError(f"n range must be ascending positive integers, got {ns}")
    return ns


def bowen_ball_size(matrix: np.ndarray, modulus: int, n: int, delta: float) -> int:
    """|{j in (Z/Q)^2 : |A^k j / Q| <= delta for 0 <= k < n}|, exactly."""
    r = int(math.floor(delta * modulus))
    span = np.arange(-r, r + 1, dtype=np.int64)
    jx, jy = np.meshgrid(span, span, indexing="ij")
    pts = np.column_stack([jx.ravel(), jy.ravel()])
    limit = (delta * modulus) ** 2
    pts = pts[np.sum(pts * pts, axis=1) <= limit]
    orbit = pts.copy()
    for _ in range(1, n):
        orbit = np.mod(orbit @ matrix.T, modulus)
        orbit = np.where(orbit > modulus // 2, orbit - modulus, orbit)
        keep = np.sum(orbit * orbit, axis=1) <= limit
        orbit = orbit[keep]
        if not len(orbit):
            break
    return int(len(orbit))


def lattice_separated_bound(
    matrix: np.ndarray,
    n: int,
    delta: float,
    modulus: int = LATTICE_MODULUS,
) -> tuple[int, int]:
    """
    Lower bound ceil(Q^2 / |B_n(delta)|) on s_n of the grid group.

    Returns:
        (bound, |B_n|)
    """
    ball = bowen_ball_size(np.asarray(matrix, dtype=np.int64), modulus, n, delta)
    return -(-(modulus * modulus) // ball), ball


def entropy_estimate(
    system: DynamicalSystem,
    points: OrbitSample | Sequence[Any] | None,
    delta: float,
    n_range: Sequence[int],
    method: Method = "greedy",
    modulus: int = LATTICE_MODULUS,
    saturation: bool = True,
) -> EntropyEstimate:
    """
    Slope of log s_n(F, delta) against n.

    Args:
        system: The system
        points: F (ignored by the lattice method)
        delta: Separation threshold
        n_range: Ascending n values
        method: "greedy" on F or "lattice" on the whole torus
        modulus: Q for the lattice method
        saturation: Leave greedy counts >= |F|/2 out of the fit (for samples
            standing in for the whole space)

    Raises:
        PreconditionError: For a bad n range, or the lattice method off the torus
    """
    ns = _check_range(n_range)
    if method == "lattice":
        if not isinstance(system, TorusSystem) or isinstance(system, SphereSystem):
            raise PreconditionError(f"Lattice counting needs a torus automorphism, got {system.name}")
        counts, fit_ns, saturated = [], [], []
        for n in ns:
            bound, ball = lattice_separated_bound(system.matrix, n, delta, modulus)
            counts.append(bound)
            (fit_ns if ball >= MIN_BOWEN_BALL else saturated).append(n)
    else:
        if points is None:
            raise PreconditionError("Greedy counting needs a point set")
        sample = as_sample(system, points)
        counts = greedy_counts(sample, delta, ns)
        limit = len(sample) / 2.0 if saturation else math.inf
        fit_ns = [n for n, s in zip(ns, counts, strict=True) if s < limit]
        saturated = [n for n in ns if n not in fit_ns]

    values = [(n, math.log(s)) for n, s in zip(ns, counts, strict=True)]
    logs = dict(values)
    slope = fit_slope(fit_ns, [logs[n] for n in fit_ns])
    if saturated:
        logger.warning(f"Saturated counts on {system.name} at n={saturated} (delta={delta})")
    estimate = EntropyEstimate(
        delta=delta, method=method, values=values, slope=slope, fit_ns=fit_ns, saturated=saturated
    )
    logger.debug(f"Entropy {system.name} {method} delta={delta}: slope {slope:.4f}")
    return estimate


@dataclass
class EntropyTrend:
    """h(F, delta) over a grid of delta, reported as measured."""

    estimates: list[EntropyEstimate]

    @property
    def slopes(self) -> dict[float, float]:
        return {e.delta: e.slope for e in self.estimates}

    def rows(self) -> list[dict[str, Any]]:
        return [row for e in self.estimates for row in e.rows()]


def entropy_trend(
    system: DynamicalSystem,
    points: OrbitSample | Sequence[Any] | None,
    n_range: Sequence[int],
    deltas: Sequence[float] = TREND_DELTAS,
    method: Method = "greedy",
    saturation: bool = True,
) -> EntropyTrend:
    """
    Estimates over a delta grid, largest delta first.

    Greedy counts at a smaller delta are floored by the counts at the larger
    one, whose witnesses stay separated.
    """
    estimates: list[EntropyEstimate] = []
    for delta in sorted(deltas, reverse=True):
        est = entropy_estimate(system, points, delta, n_range, method=method, saturation=saturation)
        if estimates and method == "greedy":
            prev = estimates[-1]
            floored = [
                (n, max(v, pv)) for (n, v), (_, pv) in zip(est.values, prev.values, strict=True)
            ]
            logs = dict(floored)
            est.values = floored
            est.slope = fit_slope(est.fit_ns, [logs[n] for n in est.fit_ns])
        estimates.append(est)
    return EntropyTrend(estimates)


@dataclass
class EntropyExpansivityReport:
    """
    Entropy of the Gamma balls at one radius.

    Attributes:
        radius: c
        slope_tol: Largest slope counted as zero
        rows: One row per (center, delta) with the slope
        h_expansive: All slopes within tolerance
    """

    radius: float
    slope_tol: float
    rows: list[dict[str, Any]]

    @property
    def max_slope(self) -> float:
        return max((r["slope"] for r in self.rows), default=0.0)

    @property
    def h_expansive(self) -> bool:
        return self.max_slope <= self.slope_tol

    def summary(self) -> dict[str, Any]:
        return {
            "radius": self.radius,
            "slope_tol": self.slope_tol,
            "max_slope": self.max_slope,
            "h_expansive": self.h_expansive,
        }


def ball_sample(report: BallReport) -> OrbitSample:
    """Gamma members of the finest level, joined with certified witnesses."""
    members = report.sample.subset(np.flatnonzero(report.levels[-1].gamma))
    if report.witness_sample is None:
        return members
    return ConcatSample([members, report.witness_sample])


def entropy_expansivity_check(
    system: DynamicalSystem,
    c: float,
    centers: Sequence[Any],
    deltas: Sequence[float],
    n_range: Sequence[int],
    horizon: int | None = None,
    slope_tol: float = SLOPE_TOL,
    balls: Sequence[BallReport] | None = None,
) -> EntropyExpansivityReport:
    """
    Estimate h(Gamma_c(x), delta) for each center and delta.

    Args:
        system: The system
        c: Ball radius
        centers: Ball centers
        deltas: Separation thresholds
        n_range: Ascending n values
        horizon: Ball horizon N
        slope_tol: Largest slope counted as zero
        balls: Precomputed balls, one per center (e.g. with horseshoe witnesses)

    Returns:
        EntropyExpansivityReport; h-expansive at c when every slope <= slope_tol
    """
    if balls is not None and len(balls) != len(centers):
        raise PreconditionError("One ball per center is required")
    rows = []
    for i, x in enumerate(centers):
        ball = balls[i] if balls is not None else dynamical_ball(system, x, c, horizon)
        sample = ball_sample(ball)
        for delta in deltas:
            est = entropy_estimate(system, sample, delta, n_range, saturation=False)
            rows.append(
                {
                    "center": point_fields(x),
                    "delta": delta,
                    "members": len(sample),
                    "slope": est.slope,
                    "counts": est.counts,
                }
            )
    report = EntropyExpansivityReport(radius=c, slope_tol=slope_tol, rows=rows)
    logger.info(
        f"Entropy expansivity on {system.name} at c={c}: max slope {report.max_slope:.4f} "
        f"({'h-expansive' if report.h_expansive else 'not h-expansive'})"
    )
    return report
