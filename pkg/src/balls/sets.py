"""
Finite-horizon dynamical balls.

For a center x, radius c and horizon N, a sample point y belongs to

- the local stable set when max_{0<=k<=N} d(f^k x, f^k y) <= c,
- the local unstable set when max_{-N<=k<=0} d(f^k x, f^k y) <= c,
- the dynamical ball Gamma when it belongs to both,
- the asymptotic ball when it is in Gamma and d(f^k x, f^k y) is below the
  convergence threshold at both k = N and k = -N.

Every set is computed on each refinement level of the system's sample
clouds. The distance profiles are computed once per level and thresholded
afterwards, so many radii can share one pass over the orbits.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.balls.classify import Classification, LevelMembers, classify_structure
from src.core.errors import PreconditionError
from src.orbits.pseudo import point_fields
from src.spaces.base import DynamicalSystem
from src.spaces.samples import OrbitSample

logger = logging.getLogger(__name__)

# Members beyond this count are not used for pairwise distance matrices
MAX_PAIRWISE = 3000

SEPARATION_FRACTION = 0.3


@dataclass
class LevelProfile:
    """
    Center-distance extremes of one sample over a horizon.

    Attributes:
        sample: The sample cloud (center at sample.center_index)
        horizon: N
        forward: max over 0 <= k <= N of d(f^k x, f^k y)
        backward: max over -N <= k <= 0 of d(f^k x, f^k y)
        forward_end: d(f^N x, f^N y)
        backward_end: d(f^-N x, f^-N y)
    """

    sample: OrbitSample
    horizon: int
    forward: np.ndarray
    backward: np.ndarray
    forward_end: np.ndarray
    backward_end: np.ndarray

    @classmethod
    def of(cls, sample: OrbitSample, horizon: int) -> "LevelProfile":
        if len(sample) == 0:
            raise PreconditionError("Sample cloud is empty")
        return cls(
            sample=sample,
            horizon=horizon,
            forward=sample.max_center_distance(range(0, horizon + 1)),
            backward=sample.max_center_distance(range(-horizon, 1)),
            forward_end=sample.center_distances(horizon),
            backward_end=sample.center_distances(-horizon),
        )

    @property
    def resolution(self) -> float:
        return self.sample.resolution

    def stable(self, c: float) -> np.ndarray:
        return self.forward <= c

    def unstable(self, c: float) -> np.ndarray:
        return self.backward <= c

    def gamma(self, c: float) -> np.ndarray:
        return self.stable(c) & self.unstable(c)

    def asymptotic(self, c: float, threshold: float) -> np.ndarray:
        converged = (self.forward_end < threshold) & (self.backward_end < threshold)
        return self.gamma(c) & converged


@dataclass
class BallLevel:
    """Member counts of one refinement level."""

    resolution: float
    sample_size: int
    gamma: np.ndarray
    ws: np.ndarray
    wu: np.ndarray
    asymptotic: np.ndarray

    def counts(self) -> dict[str, int | float]:
        return {
            "resolution": self.resolution,
            "sample_size": self.sample_size,
            "gamma": int(self.gamma.sum()),
            "ws": int(self.ws.sum()),
            "wu": int(self.wu.sum()),
            "asymptotic": int(self.asymptotic.sum()),
        }


@dataclass
class BallReport:
    """
    The dynamical ball Gamma_c^N(center) with its stable and unstable parts.

    Member lists hold the points found at the finest refinement level.

    Attributes:
        center: The center point
        radius: c
        horizon: N
        sample_spec: Cloud sizes and resolutions per level
        members_gamma: Points of Gamma_c^N(center)
        members_ws: Local stable members
        members_wu: Local unstable members
        members_asymptotic: Estimate of the asymptotic ball
        classification: Structure of Gamma across refinement levels
        levels: Per-level masks and counts
        witnesses: Extra certified members (horseshoe points)
        sample: Finest-level cloud the masks index into
        witness_sample: Orbits of the witnesses, when certified
    """

    system: DynamicalSystem
    center: Any
    radius: float
    horizon: int
    sample_spec: list[dict[str, Any]]
    members_gamma: list[Any]
    members_ws: list[Any]
    members_wu: list[Any]
    members_asymptotic: list[Any]
    classification: Classification
    levels: list[BallLevel] = field(default_factory=list)
    witnesses: list[Any] = field(default_factory=list)
    sample: OrbitSample | None = None
    witness_sample: OrbitSample | None = None

    def check_invariants(self) -> None:
        """Re-assert Gamma = Ws ∩ Wu and center membership on every level."""
        for i, level in enumerate(self.levels):
            if not np.array_equal(level.gamma, level.ws & level.wu):
                raise AssertionError(f"Level {i}: Gamma differs from Ws ∩ Wu")
            if not (level.gamma[0] and level.asymptotic[0]):
                raise AssertionError(f"Level {i}: center is not a member")

    def summary(self) -> dict[str, Any]:
        return {
            "center": point_fields(self.center),
            "radius": self.radius,
            "horizon": self.horizon,
            "classification": self.classification.label,
            "structure": self.classification.summary(),
            "levels": [level.counts() for level in self.levels],
            "witnesses": len(self.witnesses),
        }

    def rows(self) -> list[dict[str, Any]]:
        """One CSV row per Gamma member (finest level), then witnesses."""
        out = []
        for p in self.members_gamma:
            out.append({"set": "gamma", **point_fields(p)})
        for p in self.witnesses:
            out.append({"set": "witness", **point_fields(p)})
        return out


def _check_radius(c: float, horizon: int) -> None:
    if c <= 0:
        raise PreconditionError(f"Radius must be positive, got {c}")
    if horizon < 1:
        raise PreconditionError(f"Horizon must be >= 1, got {horizon}")


def _samples(
    system: DynamicalSystem,
    x: Any,
    samples: OrbitSample | Sequence[OrbitSample] | None,
) -> list[OrbitSample]:
    if samples is None:
        return [system.cloud(x, level) for level in range(system.n_levels())]
    if isinstance(samples, OrbitSample):
        return [samples]
    return list(samples)


def ball_profile(
    system: DynamicalSystem,
    x: Any,
    horizon: int,
    samples: OrbitSample | Sequence[OrbitSample] | None = None,
) -> list[LevelProfile]:
    """
    Distance profiles of x against each sample cloud.

    Args:
        system: The system
        x: Center (must be the samples' center point)
        horizon: N
        samples: One cloud, several refinement levels, or None for system.cloud

    Raises:
        PreconditionError: If a sample is empty or not centered at x
    """
    profiles = []
    for sample in _samples(system, x, samples):
        if len(sample) == 0:
            raise PreconditionError("Sample cloud is empty")
        if not system.same_point(sample.point(sample.center_index), x):
            raise PreconditionError("Sample cloud is not centered at the given point")
        profiles.append(LevelProfile.of(sample, horizon))
    return profiles


def local_stable(
    system: DynamicalSystem,
    x: Any,
    c: float,
    horizon: int,
    samples: OrbitSample | None = None,
) -> list[Any]:
    """
    Sample points whose forward orbit stays c-close to x's for 0 <= k <= N.

    Args:
        system: The system
        x: Center
        c: Radius (> 0)
        horizon: N (>= 1)
        samples: Cloud around x (default: the finest system cloud)

    Returns:
        Member points, center first
    """
    _check_radius(c, horizon)
    sample = samples if samples is not None else system.cloud(x, system.n_levels() - 1)
    (profile,) = ball_profile(system, x, horizon, sample)
    return sample.points(np.flatnonzero(profile.stable(c)))


def local_unstable(
    system: DynamicalSystem,
    x: Any,
    c: float,
    horizon: int,
    samples: OrbitSample | None = None,
) -> list[Any]:
    """Mirror of local_stable over -N <= k <= 0."""
    _check_radius(c, horizon)
    sample = samples if samples is not None else system.cloud(x, system.n_levels() - 1)
    (profile,) = ball_profile(system, x, horizon, sample)
    return sample.points(np.flatnonzero(profile.unstable(c)))


def level_members(
    sample: OrbitSample,
    indices: np.ndarray,
    previous: tuple[OrbitSample, np.ndarray] | None = None,
) -> LevelMembers:
    """Pairwise distances at time 0 among members (and to the previous level's)."""
    system = sample.system
    if len(indices) > MAX_PAIRWISE:
        logger.warning(f"{len(indices)} members; structure read from the first {MAX_PAIRWISE}")
        indices = indices[:MAX_PAIRWISE]
    batch = system.take(sample.points_at(0), indices)
    to_previous = None
    if previous is not None:
        prev_sample, prev_indices = previous
        prev_batch = system.take(prev_sample.points_at(0), prev_indices[:MAX_PAIRWISE])
        to_previous = system.cross(batch, prev_batch)
    return LevelMembers(
        resolution=sample.resolution,
        distances=system.pairwise(batch),
        to_previous=to_previous,
    )


def classify_profiles(
    profiles: Sequence[LevelProfile],
    masks: Sequence[np.ndarray],
    sep_delta: float,
) -> Classification:
    levels = []
    previous = None
    for profile, mask in zip(profiles, masks, strict=True):
        indices = np.flatnonzero(mask)
        levels.append(level_members(profile.sample, indices, previous))
        previous = (profile.sample, indices)
    return classify_structure(levels, sep_delta)


def ball_from_profiles(
    system: DynamicalSystem,
    x: Any,
    c: float,
    profiles: Sequence[LevelProfile],
    threshold: float | None = None,
    sep_delta: float | None = None,
) -> BallReport:
    """Threshold precomputed profiles at radius c into a BallReport."""
    horizon = profiles[0].horizon
    _check_radius(c, horizon)
    threshold = c / 100.0 if threshold is None else threshold
    if threshold >= c:
        raise PreconditionError(f"Convergence threshold {threshold} must be below c = {c}")
    sep_delta = SEPARATION_FRACTION * c if sep_delta is None else sep_delta

    levels = []
    for p in profiles:
        ws, wu = p.stable(c), p.unstable(c)
        levels.append(
            BallLevel(
                resolution=p.resolution,
                sample_size=len(p.sample),
                gamma=ws & wu,
                ws=ws,
                wu=wu,
                asymptotic=p.asymptotic(c, threshold),
            )
        )
    classification = classify_profiles(profiles, [lv.gamma for lv in levels], sep_delta)

    finest, last = profiles[-1].sample, levels[-1]
    report = BallReport(
        system=system,
        center=x,
        radius=c,
        horizon=horizon,
        sample_spec=[{"resolution": lv.resolution, "size": lv.sample_size} for lv in levels],
        members_gamma=finest.points(np.flatnonzero(last.gamma)),
        members_ws=finest.points(np.flatnonzero(last.ws)),
        members_wu=finest.points(np.flatnonzero(last.wu)),
        members_asymptotic=finest.points(np.flatnonzero(last.asymptotic)),
        classification=classification,
        levels=levels,
        sample=finest,
    )
    report.check_invariants()
    logger.debug(
        f"Ball {system.name} c={c} N={horizon}: {classification.label} "
        f"counts={[int(lv.gamma.sum()) for lv in levels]}"
    )
    return report


def dynamical_ball(
    system: DynamicalSystem,
    x: Any,
    c: float,
    horizon: int | None = None,
    samples: OrbitSample | Sequence[OrbitSample] | None = None,
    sep_delta: float | None = None,
) -> BallReport:
    """
    Gamma_c^N(x) = Ws ∩ Wu on every refinement level, classified.

    Args:
        system: The system
        x: Center
        c: Radius
        horizon: N (default: the system's horizon)
        samples: Clouds per refinement level (default: system.cloud at every level)
        sep_delta: Separation scale for classification (default 0.3·c)

    Returns:
        BallReport with members at the finest level
    """
    horizon = system.default_horizon() if horizon is None else horizon
    _check_radius(c, horizon)
    profiles = ball_profile(system, x, horizon, samples)
    return ball_from_profiles(system, x, c, profiles, sep_delta=sep_delta)


def asymptotic_ball(
    system: DynamicalSystem,
    x: Any,
    c: float,
    horizon: int | None = None,
    convergence_threshold: float | None = None,
    samples: OrbitSample | Sequence[OrbitSample] | None = None,
) -> list[Any]:
    """
    Members of Gamma_c^N(x) that converge to x's orbit in both time directions.

    Raises:
        PreconditionError: If the threshold is not below c
    """
    horizon = system.default_horizon() if horizon is None else horizon
    threshold = c / 100.0 if convergence_threshold is None else convergence_threshold
    if threshold >= c:
        raise PreconditionError(f"Convergence threshold {threshold} must be below c = {c}")
    profiles = ball_profile(system, x, horizon, samples)
    report = ball_from_profiles(system, x, c, profiles, threshold=threshold)
    return report.members_asymptotic


@dataclass
class InclusionReport:
    """Local stable members over 2N steps and their distance at step N."""

    members: int
    converged: int
    worst_distance: float
    threshold: float

    @property
    def ok(self) -> bool:
        return self.converged == self.members


def stable_inclusion_check(
    system: DynamicalSystem,
    x: Any,
    c: float,
    horizon: int | None = None,
    threshold: float | None = None,
    samples: OrbitSample | None = None,
) -> InclusionReport:
    """
    Check that points staying c-close for 2N steps are below threshold at step N.

    A finite-horizon reading of W^s_c(x) ⊂ W^s(x).
    """
    horizon = system.default_horizon() if horizon is None else horizon
    _check_radius(c, horizon)
    threshold = c / 100.0 if threshold is None else threshold
    sample = samples if samples is not None else system.cloud(x, system.n_levels() - 1)
    stable = sample.max_center_distance(range(0, 2 * horizon + 1)) <= c
    at_horizon = sample.center_distances(horizon)[stable]
    report = InclusionReport(
        members=int(stable.sum()),
        converged=int((at_horizon < threshold).sum()),
        worst_distance=float(at_horizon.max()) if at_horizon.size else 0.0,
        threshold=threshold,
    )
    if not report.ok:
        logger.warning(
            f"{report.members - report.converged} local stable members of {system.name} "
            f"stay above {threshold:.2e} at step {horizon}"
        )
    return report
