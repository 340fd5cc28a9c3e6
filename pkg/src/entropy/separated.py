"""
(n, delta)-separated subsets.

Two points are (n, delta)-separated when d(f^k x, f^k y) > delta for some
0 <= k < n. The greedy mode scans the set in index order and keeps every
point separated from all kept points; the exact mode finds a maximum
clique of the separation graph by branch and bound.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from src.balls.classify import greedy_separated
from src.core.errors import PreconditionError
from src.spaces.base import DynamicalSystem
from src.spaces.samples import IteratedSample, OrbitSample

logger = logging.getLogger(__name__)

Mode = Literal["greedy", "exact"]

EXACT_LIMIT = 25


@dataclass
class SeparatedSetResult:
    """
    A separated subset of F and its size.

    Attributes:
        size: |F|
        n: Number of iterates compared
        delta: Separation threshold
        count_greedy: Greedy lower bound on s_n(F, delta)
        count_exact: Maximum size (exact mode only)
        witness: Indices into F of the reported separated subset
        verified: Witness re-checked pair by pair on fresh distances
    """

    size: int
    n: int
    delta: float
    count_greedy: int
    count_exact: int | None = None
    witness: list[int] = field(default_factory=list)
    verified: bool = False

    @property
    def count(self) -> int:
        return self.count_exact if self.count_exact is not None else self.count_greedy

    def summary(self) -> dict[str, Any]:
        return {
            "size": self.size,
            "n": self.n,
            "delta": self.delta,
            "count_greedy": self.count_greedy,
            "count_exact": self.count_exact,
            "verified": self.verified,
        }


def as_sample(system: DynamicalSystem, points: OrbitSample | Sequence[Any]) -> OrbitSample:
    """Wrap a point list as a sample; samples pass through."""
    if isinstance(points, OrbitSample):
        return points
    if len(points) == 0:
        raise PreconditionError("Point set is empty")
    return IteratedSample(system, list(points), resolution=0.0)


def bowen_distances(sample: OrbitSample, n: int, start: np.ndarray | None = None, k0: int = 0) -> np.ndarray:
    """
    max over k0 <= k < n of the pairwise distance matrix.

    Args:
        sample: Point set with orbits
        n: Number of iterates
        start: Running maximum already accumulated over [0, k0)
        k0: First time not yet accumulated
    """
    out = np.zeros((len(sample), len(sample))) if start is None else start.copy()
    for k in range(k0, n):
        np.maximum(out, sample.pairwise(k), out=out)
    return out


def maximum_clique(adjacency: np.ndarray) -> list[int]:
    """
    Maximum clique by branch and bound with degree ordering.

    Args:
        adjacency: Boolean symmetric (K, K) matrix

    Returns:
        Vertex indices of a maximum clique, ascending
    """
    k = adjacency.shape[0]
    if k == 0:
        return []
    order = np.argsort(-adjacency.sum(axis=0), kind="stable")
    adj = adjacency[np.ix_(order, order)]
    best: list[int] = []

    def branch(candidates: list[int], current: list[int]) -> None:
        nonlocal best
        if not candidates:
            if len(current) > len(best):
                best = current.copy()
            return
        if len(current) + len(candidates) <= len(best):
            return
        for i, v in enumerate(candidates):
            if len(current) + len(candidates) - i <= len(best):
                return
            current.append(v)
            branch([u for u in candidates[i + 1 :] if adj[v, u]], current)
            current.pop()

    branch(list(range(k)), [])
    return sorted(int(order[v]) for v in best)


def verify_witness(sample: OrbitSample, witness: Sequence[int], n: int, delta: float) -> bool:
    """Check every witness pair at every time with row-wise distances."""
    if len(witness) < 2:
        return True
    system = sample.system
    idx = np.asarray(witness, dtype=np.int64)
    left, right = np.triu_indices(len(idx), k=1)
    separated = np.zeros(len(left), dtype=bool)
    for k in range(n):
        batch = system.take(sample.points_at(k), idx)
        d = system.dist_rows(system.take(batch, left), system.take(batch, right))
        separated |= d > delta
    return bool(separated.all())


def max_separated(
    system: DynamicalSystem,
    points: OrbitSample | Sequence[Any],
    n: int,
    delta: float,
    mode: Mode = "greedy",
    distances: np.ndarray | None = None,
) -> SeparatedSetResult:
    """
    Largest (n, delta)-separated subset found in a point set.

    Args:
        system: The system
        points: F, as a sample or a list of points
        n: Number of iterates (>= 1)
        delta: Separation threshold (> 0)
        mode: "greedy" (lower bound) or "exact" (maximum clique, |F| <= 25)
        distances: Precomputed Bowen distance matrix for n

    Returns:
        SeparatedSetResult with a verified witness

    Raises:
        PreconditionError: If n < 1, delta <= 0, or exact mode with |F| > 25
    """
    sample = as_sample(system, points)
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if delta <= 0:
        raise PreconditionError(f"delta must be positive, got {delta}")
    if mode == "exact" and len(sample) > EXACT_LIMIT:
        raise PreconditionError(f"Exact mode handles at most {EXACT_LIMIT} points, got {len(sample)}")

    bowen = bowen_distances(sample, n) if distances is None else distances
    separated = bowen > delta
    greedy = greedy_separated(separated).tolist()
    result = SeparatedSetResult(
        size=len(sample), n=n, delta=delta, count_greedy=len(greedy), witness=greedy
    )
    if mode == "exact":
        clique = maximum_clique(separated)
        result.count_exact = len(clique)
        result.witness = clique
        if len(greedy) < len(clique):
            logger.warning(f"Greedy found {len(greedy)} of a maximum {len(clique)} separated points")
        if len(greedy) > len(clique):
            raise AssertionError("Greedy count exceeds the exact maximum")
    result.verified = verify_witness(sample, result.witness, n, delta)
    if not result.verified:
        raise AssertionError(f"Separated witness failed re-verification at n={n}, delta={delta}")
    return result
