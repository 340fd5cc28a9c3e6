"""
Link detection.

A link is a pair (x, y) with a time n such that the two orbits start and
end delta-close, separate beyond epsilon in between, and x is near-periodic
(d(f^n x, x) < delta). Chaining the two n-blocks by words gives
delta-pseudo-orbits that shadowing turns into a horseshoe.

Candidate partners come from a delta-cloud around each near-periodic
anchor and from the system's own proposals. On the sphere quotient an
anchor orbit passing near a singular point h is reflected across the stable
line through h: the reflected orbit leaves the anchor's along the unstable
direction and comes back along the stable one.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.core.errors import PreconditionError
from src.orbits.pseudo import point_fields
from src.spaces.base import DynamicalSystem
from src.spaces.samples import LatticeSample
from src.spaces.sphere import SINGULAR_POINTS, SphereSystem
from src.spaces.torus import TorusSystem, lift_centered

logger = logging.getLogger(__name__)

CLOUD_LIMIT = 500


@dataclass
class Link:
    """
    A link (x, y, n) at scales delta < epsilon < gamma.

    Attributes:
        system: The system
        x: Near-periodic anchor
        y: Partner
        n: Block length
        delta: Closeness at both ends
        gamma: max over 0 <= k < n of d(f^k x, f^k y)
        epsilon: Separation scale exceeded by gamma
        k_star: Iterate where gamma is attained
        closure: d(f^n x, x)
        distances: d(f^k x, f^k y) for k in [0, n]
    """

    system: DynamicalSystem
    x: Any
    y: Any
    n: int
    delta: float
    gamma: float
    epsilon: float
    k_star: int
    closure: float
    distances: np.ndarray = field(repr=False)

    def check(self) -> bool:
        """Re-verify every link invariant from fresh orbits."""
        d = link_distances(self.system, self.system.stack([self.x]), self.system.stack([self.y]), self.n)[0]
        fx = self.system.iterate(self.x, self.n)
        fy = self.system.iterate(self.y, self.n)
        return bool(
            d[0] < self.delta
            and d[self.n] < self.delta
            and np.max(d[: self.n]) > self.epsilon
            and abs(np.max(d[: self.n]) - self.gamma) <= 1e-9
            and self.system.dist(fx, self.x) < self.delta
            and self.system.dist(fy, self.y) < 2.0 * self.delta
        )

    def summary(self) -> dict[str, Any]:
        return {
            "x": point_fields(self.x),
            "y": point_fields(self.y),
            "n": self.n,
            "delta": self.delta,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "k_star": self.k_star,
            "closure": self.closure,
        }


@dataclass
class LinkScan:
    """Links found by a scan and the budget it spent."""

    links: list[Link]
    anchors_tested: int = 0
    pairs_tested: int = 0
    n_max: int = 0

    def summary(self) -> dict[str, Any]:
        return {
            "links": len(self.links),
            "anchors_tested": self.anchors_tested,
            "pairs_tested": self.pairs_tested,
            "n_max": self.n_max,
        }


def link_distances(system: DynamicalSystem, xs: Any, ys: Any, n: int) -> np.ndarray:
    """(P, n + 1) matrix of d(f^k x_i, f^k y_i) for k in [0, n]."""
    out = np.empty((system.batch_len(xs), n + 1))
    for k in range(n + 1):
        out[:, k] = system.dist_rows(xs, ys)
        if k < n:
            xs, ys = system.apply_batch(xs), system.apply_batch(ys)
    return out


def _iterate_batch(system: DynamicalSystem, batch: Any, n: int) -> Any:
    for _ in range(n):
        batch = system.apply_batch(batch)
    return batch


def reflection_partners(
    system: SphereSystem,
    anchors: np.ndarray,
    n: int,
    delta: float,
    epsilon: float,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Reflect anchor orbits across stable lines of the singular points.

    For an anchor lift x, a time k0 in [1, n-1] and a singular point h, write
    A^k0 x - h = s·e_s + u·e_u. The partner is A^-k0 (h + s·e_s - u·e_u).
    Its distance to the anchor orbit at time k is at most
    min(2|u|·|lambda_u|^(k-k0), 2|s|·|lambda_s|^(k-k0)); only proposals whose
    bound is below delta at both ends and above epsilon somewhere are kept.

    Returns:
        (anchor index per partner, (P, 2) partners)
    """
    split = system.splitting
    lam_u, lam_s = abs(split.lambda_u), abs(split.lambda_s)
    anchors = np.mod(np.asarray(anchors, dtype=float), 1.0)
    orbit = [anchors]
    for _ in range(1, n):
        orbit.append(np.mod(orbit[-1] @ system.matrix.T, 1.0))

    owners: list[np.ndarray] = []
    partners: list[np.ndarray] = []
    for k0 in range(1, n):
        steps = np.arange(n + 1) - k0
        grow_u, grow_s = lam_u**steps, lam_s**steps
        for h in SINGULAR_POINTS:
            w = lift_centered(orbit[k0] - h)
            s, u = w @ split.coords[0], w @ split.coords[1]
            bound = np.minimum(2.0 * np.abs(u)[:, None] * grow_u, 2.0 * np.abs(s)[:, None] * grow_s)
            keep = (bound[:, 0] < delta) & (bound[:, n] < delta) & (bound[:, :n].max(axis=1) > epsilon)
            if not keep.any():
                continue
            target = h + s[keep, None] * split.e_s - u[keep, None] * split.e_u
            for _ in range(k0):
                target = target @ system.inverse.T
            owners.append(np.flatnonzero(keep))
            partners.append(system.from_lift(target))
    if not partners:
        return np.zeros(0, dtype=np.int64), np.empty((0, 2))
    return np.concatenate(owners), np.vstack(partners)


def delta_cloud(system: DynamicalSystem, x: Any, delta: float) -> Any:
    """Points strictly within delta of x, excluding x."""
    if isinstance(system, TorusSystem):
        q = math.ceil(4.0 / delta)
        sample = LatticeSample.disc(system, np.asarray(x), 1.0 / q, delta)
        return system.take(sample.points_at(0), np.arange(1, len(sample)))
    sample = system.cloud(x, system.n_levels() - 1)
    batch = sample.points_at(0)
    near = system.dist_to(batch, x)
    keep = np.flatnonzero((near < delta) & (near > 0.0))
    return system.take(batch, keep)


def _links_from_pairs(
    system: DynamicalSystem,
    xs: Any,
    ys: Any,
    n: int,
    delta: float,
    epsilon: float,
    gamma_max: float,
    closure: np.ndarray,
) -> list[Link]:
    if system.batch_len(ys) == 0:
        return []
    d = link_distances(system, xs, ys, n)
    gamma = d[:, :n].max(axis=1)
    y_back = system.dist_rows(_iterate_batch(system, ys, n), ys)
    ok = (
        (d[:, 0] < delta)
        & (d[:, n] < delta)
        & (gamma > epsilon)
        & (gamma <= gamma_max)
        & (closure < delta)
        & (y_back < 2.0 * delta)
    )
    links = []
    for i in np.flatnonzero(ok):
        links.append(
            Link(
                system=system,
                x=system.unstack(system.take(xs, [i]))[0],
                y=system.unstack(system.take(ys, [i]))[0],
                n=n,
                delta=delta,
                gamma=float(gamma[i]),
                epsilon=epsilon,
                k_star=int(np.argmax(d[i, :n])),
                closure=float(closure[i]),
                distances=d[i],
            )
        )
    return links


def scan_links(
    system: DynamicalSystem,
    centers: Sequence[Any] | Any,
    epsilon: float,
    delta: float,
    n_max: int,
    gamma_max: float = math.inf,
    cloud_limit: int = CLOUD_LIMIT,
    stop_at_first: bool = False,
) -> LinkScan:
    """
    Scan near-periodic anchors for links with n <= n_max.

    Args:
        system: The system
        centers: Candidate anchors (a list or a batch)
        epsilon: Separation scale
        delta: Closeness scale (< epsilon)
        n_max: Largest block length
        gamma_max: Largest admissible gamma
        cloud_limit: Anchors per n whose delta-clouds are scanned
        stop_at_first: Stop after the first n that yields links

    Returns:
        LinkScan with links sorted by (n, -gamma)

    Raises:
        PreconditionError: If delta >= epsilon
    """
    if delta >= epsilon:
        raise PreconditionError(f"delta {delta} must be below epsilon {epsilon}")
    if n_max < 1:
        raise PreconditionError(f"n_max must be >= 1, got {n_max}")
    anchors = centers if not isinstance(centers, list) else system.stack(centers)
    scan = LinkScan(links=[], n_max=n_max)
    seen: set[tuple] = set()

    for n in range(1, n_max + 1):
        closure_all = system.dist_rows(_iterate_batch(system, anchors, n), anchors)
        near = np.flatnonzero(closure_all < delta)
        if not len(near):
            continue
        xs_all = system.take(anchors, near)
        closure = closure_all[near]
        scan.anchors_tested += len(near)
        found: list[Link] = []

        owners, partners = system.link_partners(xs_all, n, delta, epsilon)
        if len(owners):
            scan.pairs_tested += len(owners)
            found += _links_from_pairs(
                system, system.take(xs_all, owners), partners, n, delta, epsilon, gamma_max, closure[owners]
            )

        for i in range(min(len(near), cloud_limit)):
            x = system.unstack(system.take(xs_all, [i]))[0]
            ys = delta_cloud(system, x, delta)
            size = system.batch_len(ys)
            if not size:
                continue
            scan.pairs_tested += size
            xs = system.take(system.stack([x]), np.zeros(size, dtype=np.int64))
            found += _links_from_pairs(
                system, xs, ys, n, delta, epsilon, gamma_max, np.full(size, closure[i])
            )

        for link in found:
            key = (link.n, repr(point_fields(link.x)), repr(point_fields(link.y)))
            if key not in seen:
                seen.add(key)
                scan.links.append(link)
        if stop_at_first and scan.links:
            break

    scan.links.sort(key=lambda lk: (lk.n, -lk.gamma))
    if scan.links:
        logger.info(
            f"Link scan on {system.name}: {len(scan.links)} links, first n={scan.links[0].n} "
            f"gamma={scan.links[0].gamma:.4f}"
        )
    else:
        logger.warning(f"Link scan on {system.name} found no links ({scan.summary()})")
    return scan


def find_link(
    system: DynamicalSystem,
    centers: Sequence[Any] | Any,
    epsilon: float,
    delta: float,
    n_max: int,
    gamma_max: float = math.inf,
) -> list[Link]:
    """
    Links (x, y, n) with x among the centers and n <= n_max.

    An empty list is a valid outcome.

    Raises:
        PreconditionError: If delta >= epsilon
    """
    return scan_links(system, centers, epsilon, delta, n_max, gamma_max).links


def periodic_anchors(system: DynamicalSystem, n_max: int) -> np.ndarray:
    """All periodic points of period n <= n_max (both signs on the sphere)."""
    if not isinstance(system, TorusSystem):
        raise PreconditionError(f"No exact periodic points on {system.name}")
    found = [system.periodic_points(n) for n in range(1, n_max + 1)]
    return np.unique(np.vstack(found), axis=0)


@dataclass
class ReturnWindow:
    """Indices i < j with d_i, d_j < delta and a peak above epsilon between."""

    start: int
    end: int
    peak_index: int
    peak: float


def detect_return_separation(
    distances: Sequence[float] | np.ndarray,
    delta: float,
    epsilon: float,
    gamma_max: float = math.inf,
) -> list[ReturnWindow]:
    """
    Windows where two orbits are delta-close, separate beyond epsilon, and return.

    Args:
        distances: d(f^k x, f^k y) over consecutive k
        delta: Closeness scale
        epsilon: Separation scale
        gamma_max: Largest admissible peak

    Returns:
        One window per pair of consecutive close times with a qualifying peak
    """
    d = np.asarray(distances, dtype=float)
    close = np.flatnonzero(d < delta)
    windows = []
    for i, j in zip(close, close[1:], strict=False):
        if j - i < 2:
            continue
        inner = d[i + 1 : j]
        k = int(np.argmax(inner))
        if epsilon < inner[k] <= gamma_max:
            windows.append(ReturnWindow(int(i), int(j), int(i + 1 + k), float(inner[k])))
    return windows


def orbit_distances(system: DynamicalSystem, x: Any, y: Any, length: int) -> np.ndarray:
    """d(f^k x, f^k y) for k in [0, length)."""
    return link_distances(system, system.stack([x]), system.stack([y]), length - 1)[0]
