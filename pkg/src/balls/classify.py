"""
Structure classification of finite-resolution member sets.

A member set is observed at several refinement levels. The rule reads the
greedy delta-separated counts s_i and raw counts r_i across levels:

- non-monotone s: inconclusive
- diameter of the last level <= 2 * its resolution: trivial
- every ratio s_(i+1)/s_i >= growth ratio: cantor-like
- s and r both stable over the last two levels: finite(s)
- last ratio below the growth ratio and every new member within delta of a
  member of the previous level: countable-like
- anything else: inconclusive
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

logger = logging.getLogger(__name__)

GROWTH_RATIO = 1.8


class Structure(str, Enum):
    """Cardinality class surrogates."""

    TRIVIAL = "trivial"
    FINITE = "finite"
    COUNTABLE = "countable-like"
    CANTOR = "cantor-like"
    INCONCLUSIVE = "inconclusive"


@dataclass
class LevelMembers:
    """
    Members observed at one refinement level.

    Attributes:
        resolution: Sample spacing at this level
        distances: Pairwise distances among members (the separation metric)
        to_previous: Distances from these members to the previous level's members
    """

    resolution: float
    distances: np.ndarray
    to_previous: np.ndarray | None = None

    @property
    def raw_count(self) -> int:
        return int(self.distances.shape[0])

    @property
    def diameter(self) -> float:
        return float(np.max(self.distances)) if self.distances.size else 0.0


@dataclass
class Classification:
    """
    Verdict of classify_structure with the numbers behind it.

    Attributes:
        structure: The class
        count: Member count for finite sets (separated count)
        separated_counts: s_i per level
        raw_counts: r_i per level
        sep_delta: Separation scale used
        growth_ratio: Threshold for geometric growth
        reason: Which rule fired
    """

    structure: Structure
    count: int | None = None
    separated_counts: list[int] = field(default_factory=list)
    raw_counts: list[int] = field(default_factory=list)
    sep_delta: float = 0.0
    growth_ratio: float = GROWTH_RATIO
    reason: str = ""

    @property
    def label(self) -> str:
        if self.structure == Structure.FINITE:
            return f"finite({self.count})"
        return self.structure.value

    def summary(self) -> dict[str, Any]:
        return {
            "classification": self.label,
            "separated_counts": self.separated_counts,
            "raw_counts": self.raw_counts,
            "sep_delta": self.sep_delta,
            "growth_ratio": self.growth_ratio,
            "reason": self.reason,
        }


def greedy_separated(separated: np.ndarray) -> np.ndarray:
    """
    Indices kept by the greedy scan in index order.

    Args:
        separated: Boolean (K, K) matrix, True where a pair is separated

    Returns:
        Indices of a maximal subset that is pairwise separated
    """
    kept: list[int] = []
    for i in range(separated.shape[0]):
        if separated[i, kept].all():
            kept.append(i)
    return np.asarray(kept, dtype=np.int64)


def classify_structure(
    levels: Sequence[LevelMembers],
    sep_delta: float,
    growth_ratio: float = GROWTH_RATIO,
) -> Classification:
    """
    Classify a member set observed at two or more refinement levels.

    Args:
        levels: Members per level, coarse to fine
        sep_delta: Separation scale for the greedy counts
        growth_ratio: Minimal per-level ratio counted as geometric growth

    Returns:
        Classification with raw and separated counts
    """
    if len(levels) < 2:
        return Classification(Structure.INCONCLUSIVE, reason="fewer than two levels")

    s = [len(greedy_separated(level.distances > sep_delta)) for level in levels]
    r = [level.raw_count for level in levels]
    result = Classification(
        Structure.INCONCLUSIVE,
        separated_counts=s,
        raw_counts=r,
        sep_delta=sep_delta,
        growth_ratio=growth_ratio,
    )
    last = levels[-1]

    if any(b < a for a, b in zip(s, s[1:], strict=False)):
        result.reason = "separated counts decrease under refinement"
        return result
    if last.diameter <= 2.0 * last.resolution:
        result.structure = Structure.TRIVIAL
        result.count = 1
        result.reason = f"diameter {last.diameter:.3e} <= 2 x resolution {last.resolution:.1e}"
        return result

    ratios = [b / a for a, b in zip(s, s[1:], strict=False)]
    if all(q >= growth_ratio for q in ratios):
        result.structure = Structure.CANTOR
        result.reason = f"separated counts grow by >= {growth_ratio} per level"
        return result
    if s[-1] == s[-2] and r[-1] == r[-2]:
        result.structure = Structure.FINITE
        result.count = s[-1]
        result.reason = "separated and raw counts stable"
        return result
    if ratios[-1] < growth_ratio and last.to_previous is not None and last.to_previous.size:
        near = np.min(last.to_previous, axis=1) <= sep_delta
        if bool(np.all(near)):
            result.structure = Structure.COUNTABLE
            result.reason = "sub-geometric growth confined near earlier members"
            return result
    result.reason = "no rule matched"
    return result
