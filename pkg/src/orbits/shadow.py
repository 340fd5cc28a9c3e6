"""
Constructive shadowing.

For a hyperbolic toral automorphism the correction c_k turning a
pseudo-orbit x_k into a genuine orbit z_k = x_k + c_k solves
c_(k+1) = A c_k - e_k, with e_k the lifted jump x_(k+1) - A x_k. Along E^s
it is summed forward from the past, along E^u backward from the future.
Near-periodic windows are closed periodically, all others are truncated.

The sphere quotient lifts its pseudo-orbit to the torus first; example 1
swaps ideal points for p0; shifts read off center symbols.
"""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.signal import lfilter

from src.core.errors import PreconditionError, ShadowingError, SystemConfigError
from src.orbits.pseudo import PseudoOrbit, perturbed_pseudo_orbit
from src.spaces.base import DynamicalSystem
from src.spaces.example1 import ANCHOR, Example1System, is_ideal
from src.spaces.sphere import SphereSystem
from src.spaces.symbolic import CantorSystem, ShiftPoint, ShiftSystem
from src.spaces.torus import (
    HyperbolicSplitting,
    TorusSystem,
    as_matrix,
    check_hyperbolic,
    lift_centered,
    torus_norm,
)

logger = logging.getLogger(__name__)


@dataclass
class ShadowResult:
    """
    A genuine orbit shadowing a pseudo-orbit.

    Attributes:
        shadow_point: The shadowing point at index 0
        epsilon_achieved: max_k d(f^k(shadow), x_k) over the window
        verified_window: The window [a, b]
        orbit: The shadow orbit over the window (points of the space)
        iterate_error: max_k d(f(z_k), z_(k+1)) along the stored orbit
        periodic: True when the window was closed periodically
        lifts: Torus lifts of the shadow over the (possibly doubled) period
        details: Extra measured quantities
    """

    shadow_point: Any
    epsilon_achieved: float
    verified_window: tuple[int, int]
    orbit: Any
    iterate_error: float = 0.0
    periodic: bool = False
    lifts: np.ndarray | None = None
    details: dict[str, float] = field(default_factory=dict)

    def summary(self) -> dict[str, Any]:
        shadow = self.shadow_point
        return {
            "shadow_point": shadow.tolist() if isinstance(shadow, np.ndarray) else str(shadow),
            "epsilon_achieved": self.epsilon_achieved,
            "verified_window": list(self.verified_window),
            "iterate_error": self.iterate_error,
            "periodic": self.periodic,
            **self.details,
        }


def _splitting(matrix: Any) -> tuple[np.ndarray, HyperbolicSplitting]:
    try:
        m = as_matrix(matrix)
        check_hyperbolic(m)
    except SystemConfigError as e:
        raise ShadowingError(f"Constructive shadowing needs a hyperbolic matrix: {e}") from e
    return m, HyperbolicSplitting.of(m)


def shadow_lifts(
    matrix: np.ndarray,
    split: HyperbolicSplitting,
    lifts: np.ndarray,
    periodic: bool,
) -> np.ndarray:
    """
    Shadow lifts z_k = x_k + c_k of a torus pseudo-orbit given by its lifts.

    Args:
        matrix: The hyperbolic matrix A
        split: Its eigen-splitting
        lifts: (P, 2) lifts of the pseudo-orbit points
        periodic: Close the window with the jump x_0 - A x_(P-1)

    Returns:
        (P, 2) float lifts of the genuine shadow orbit
    """
    x = np.asarray(lifts, dtype=float)
    p = len(x)
    if p == 1 and not periodic:
        return x.copy()
    nxt = np.vstack([x[1:], x[:1]]) if periodic else x[1:]
    e = lift_centered(nxt - x[: len(nxt)] @ matrix.T)
    es, eu = e @ split.coords[0], e @ split.coords[1]
    lam_s, lam_u = split.lambda_s, split.lambda_u

    if periodic:
        powers_s = lam_s ** np.arange(p - 1, -1, -1)
        cs0 = -np.dot(powers_s, es) / (1.0 - lam_s**p)
        powers_u = lam_u ** -np.arange(1.0, p + 1)
        cu0 = np.dot(powers_u, eu) / (1.0 - lam_u ** (-p))
        cu_last = (cu0 + eu[p - 1]) / lam_u
    else:
        cs0 = 0.0
        cu_last = 0.0

    cs = np.empty(p)
    cs[0] = cs0
    if p > 1:
        cs[1:] = lfilter([1.0], [1.0, -lam_s], -es[: p - 1], zi=[lam_s * cs0])[0]

    cu = np.empty(p)
    cu[p - 1] = cu_last
    if p > 1:
        backward = eu[p - 2 :: -1] / lam_u
        cu[p - 2 :: -1] = lfilter([1.0], [1.0, -1.0 / lam_u], backward, zi=[cu_last / lam_u])[0]

    correction = np.outer(cs, split.e_s) + np.outer(cu, split.e_u)
    return x + correction


def _iterate_error(matrix: np.ndarray, z: np.ndarray, periodic: bool) -> float:
    if len(z) < 2 and not periodic:
        return 0.0
    nxt = np.vstack([z[1:], z[:1]]) if periodic else z[1:]
    return float(np.max(torus_norm(z[: len(nxt)] @ matrix.T - nxt)))


def _push_to_zero(system: DynamicalSystem, point: Any, a: int) -> Any:
    return system.iterate(point, -a) if a else point


def linear_shadow(matrix: Any, po: PseudoOrbit) -> ShadowResult:
    """
    Shadow a torus pseudo-orbit with the spectral correction.

    The window is closed periodically when the closing jump d(f(x_b), x_a)
    is below delta, otherwise corrections are truncated at the window ends.
    The bound epsilon <= C·delta holds with C the splitting's shadow constant
    (sqrt(5) for the cat map).

    Raises:
        ShadowingError: If the matrix is not hyperbolic
        PreconditionError: If the pseudo-orbit is empty
    """
    m, split = _splitting(matrix)
    if len(po) == 0:
        raise PreconditionError("Cannot shadow an empty pseudo-orbit")
    x = np.mod(np.asarray(po.batch(), dtype=float), 1.0)
    closing = float(torus_norm(x[0] - x[-1] @ m.T))
    periodic = len(po) > 1 and closing < po.delta
    z = shadow_lifts(m, split, x, periodic)
    orbit = np.mod(z, 1.0)
    epsilon = float(np.max(torus_norm(orbit - x)))
    result = ShadowResult(
        shadow_point=_push_to_zero(po.system, orbit[0], po.a),
        epsilon_achieved=epsilon,
        verified_window=po.window,
        orbit=orbit,
        iterate_error=_iterate_error(m, z, periodic),
        periodic=periodic,
        lifts=z,
        details={"shadow_constant": split.shadow_constant, "closing_jump": closing},
    )
    logger.debug(f"Linear shadow of {len(po)} points: eps={epsilon:.3e}, periodic={periodic}")
    return result


def lift_sphere_sequence(matrix: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Lift sphere points so each lift is the one closest to A·(previous lift)."""
    pts = np.mod(np.asarray(points, dtype=float), 1.0)
    out = np.empty_like(pts)
    out[0] = pts[0]
    for k in range(1, len(pts)):
        image = matrix @ out[k - 1]
        plus = torus_norm(pts[k] - image)
        minus = torus_norm(-pts[k] - image)
        out[k] = pts[k] if plus <= minus else np.mod(-pts[k], 1.0)
    return out


def quotient_shadow(po: PseudoOrbit) -> ShadowResult:
    """
    Shadow a sphere pseudo-orbit through its torus lift.

    When the lift closes up to the antipode of its first point, the window
    is doubled with the negated lift so the torus pseudo-orbit is periodic.

    Raises:
        ShadowingError: If the pseudo-orbit does not live on a sphere quotient
    """
    system = po.system
    if not isinstance(system, SphereSystem):
        raise ShadowingError(f"quotient_shadow needs a sphere system, got {system.name}")
    m, split = _splitting(system.matrix)
    x = lift_sphere_sequence(m, np.asarray(po.batch()))
    p = len(x)
    image = x[-1] @ m.T
    close_plus = float(torus_norm(x[0] - image))
    close_minus = float(torus_norm(-x[0] - image))
    periodic = p > 1 and min(close_plus, close_minus) < po.delta
    anti = periodic and close_minus < close_plus
    lifts = np.vstack([x, np.mod(-x, 1.0)]) if anti else x
    z = shadow_lifts(m, split, lifts, periodic)
    orbit = system.from_lift(z[:p])
    epsilon = float(np.max(system.dist_rows(orbit, system.from_lift(x))))
    return ShadowResult(
        shadow_point=_push_to_zero(system, orbit[0], po.a),
        epsilon_achieved=epsilon,
        verified_window=po.window,
        orbit=orbit,
        iterate_error=_iterate_error(m, z, periodic),
        periodic=periodic,
        lifts=z,
        details={
            "shadow_constant": split.shadow_constant,
            "closing_jump": min(close_plus, close_minus),
            "doubled": float(anti),
        },
    )


def example1_shadow(po: PseudoOrbit) -> ShadowResult:
    """
    Shadow an Example 1 pseudo-orbit by switching ideal points to p0.

    The base pseudo-orbit is shadowed linearly; the achieved epsilon is
    measured against the original sequence, so at an ideal point p_k it is
    1/k plus the base shadow error.
    """
    system = po.system
    if not isinstance(system, Example1System):
        raise ShadowingError(f"example1_shadow needs the example1 system, got {system.name}")
    base_points = [ANCHOR.copy() if is_ideal(p) else p for p in po.points]
    base_po = PseudoOrbit(system.base, base_points, po.delta, po.a)
    base = linear_shadow(system.matrix, base_po)
    orbit = system.stack(list(base.orbit))
    epsilon = float(np.max(system.dist_rows(orbit, po.batch())))
    return ShadowResult(
        shadow_point=base.shadow_point,
        epsilon_achieved=epsilon,
        verified_window=po.window,
        orbit=orbit,
        iterate_error=base.iterate_error,
        periodic=base.periodic,
        lifts=base.lifts,
        details={
            "base_epsilon": base.epsilon_achieved,
            "ideal_points_switched": float(sum(is_ideal(p) for p in po.points)),
        },
    )


def shift_shadow(po: PseudoOrbit) -> ShadowResult:
    """Exact shadow of a shift pseudo-orbit: y_i is the center symbol of x_i."""
    system = po.system
    if not isinstance(system, ShiftSystem):
        raise ShadowingError(f"shift_shadow needs a shift system, got {system.name}")
    first, last = po.points[0], po.points[-1]
    symbols = [first.at(i) for i in range(first.lo, 0)]
    symbols += [p.at(0) for p in po.points]
    symbols += [last.at(i) for i in range(1, last.hi + 1)]
    shadow = ShiftPoint(tuple(symbols), -first.lo)
    orbit = system.orbit(shadow, len(po))
    epsilon = max(system.dist(z, x) for z, x in zip(orbit, po.points, strict=True))
    return ShadowResult(
        shadow_point=_push_to_zero(system, shadow, po.a),
        epsilon_achieved=float(epsilon),
        verified_window=po.window,
        orbit=orbit,
    )


def identity_shadow(po: PseudoOrbit) -> ShadowResult:
    """Shadow for an identity map: the constant orbit of x_a."""
    system = po.system
    x0 = po.points[0]
    epsilon = max(system.dist(x0, x) for x in po.points)
    return ShadowResult(
        shadow_point=x0,
        epsilon_achieved=float(epsilon),
        verified_window=po.window,
        orbit=[x0] * len(po),
    )


def shadow(po: PseudoOrbit) -> ShadowResult:
    """
    Shadow a pseudo-orbit with the constructive method of its system.

    Raises:
        ShadowingError: If no constructive method exists for the system
    """
    system = po.system
    if isinstance(system, SphereSystem):
        return quotient_shadow(po)
    if isinstance(system, TorusSystem):
        return linear_shadow(system.matrix, po)
    if isinstance(system, Example1System):
        return example1_shadow(po)
    if isinstance(system, ShiftSystem):
        return shift_shadow(po)
    if isinstance(system, CantorSystem):
        return identity_shadow(po)
    raise ShadowingError(f"No constructive shadowing for system {system.name}")


@dataclass
class TighteningReport:
    """Achieved epsilon over a grid of deltas."""

    deltas: list[float]
    epsilons: list[float]

    @property
    def max_ratio(self) -> float:
        """Largest epsilon/delta over the grid (the observed shadow constant)."""
        return max(e / d for d, e in zip(self.deltas, self.epsilons, strict=True))

    def rows(self) -> list[dict[str, float]]:
        return [{"delta": d, "epsilon": e} for d, e in zip(self.deltas, self.epsilons, strict=True)]


def tightening_slope(
    system: DynamicalSystem,
    x0: Any,
    deltas: list[float],
    length: int,
    seed: int,
) -> TighteningReport:
    """Shadow perturbed pseudo-orbits for each delta and record the achieved epsilon."""
    epsilons = []
    for delta in deltas:
        po = perturbed_pseudo_orbit(system, x0, delta, length, seed)
        epsilons.append(shadow(po).epsilon_achieved)
    return TighteningReport(list(deltas), epsilons)
