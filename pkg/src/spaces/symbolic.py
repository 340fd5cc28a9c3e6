"""
Symbolic systems: full shifts and the identity on the Cantor set.

Shift points are finite windows of a bi-infinite sequence; the symbol at
coordinate i is `symbols[origin + i]`. Cantor points are binary prefixes.
Both metrics are ultrametrics with values 2^-j.
"""

import logging
import math
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.core.errors import SystemConfigError, WindowExhaustedError
from src.spaces.base import Direction, DynamicalSystem
from src.spaces.samples import IteratedSample

logger = logging.getLogger(__name__)

SHIFT_LEVELS = (4, 8, 12)
CANTOR_LEVELS = (8, 16, 24)


def tail_index(delta: float) -> int:
    """Smallest j >= 0 with 2^-j < delta."""
    j = 0
    while 2.0**-j >= delta:
        j += 1
    return j


@dataclass(frozen=True)
class ShiftPoint:
    """Finite window of a bi-infinite symbol sequence."""

    symbols: tuple[int, ...]
    origin: int

    @property
    def lo(self) -> int:
        """Smallest stored coordinate."""
        return -self.origin

    @property
    def hi(self) -> int:
        """Largest stored coordinate."""
        return len(self.symbols) - 1 - self.origin

    def at(self, i: int) -> int:
        if not self.lo <= i <= self.hi:
            raise WindowExhaustedError(f"Coordinate {i} outside window [{self.lo}, {self.hi}]")
        return self.symbols[self.origin + i]

    def replace(self, i: int, symbol: int) -> "ShiftPoint":
        symbols = list(self.symbols)
        symbols[self.origin + i] = symbol
        return ShiftPoint(tuple(symbols), self.origin)


def shift_apply(x: ShiftPoint, direction: Direction = "forward") -> ShiftPoint:
    """
    Left shift (sigma(x)_i = x_(i+1)) or its inverse.

    Raises:
        WindowExhaustedError: If the new center falls outside the stored window
    """
    origin = x.origin + (1 if direction == "forward" else -1)
    if not 0 <= origin < len(x.symbols):
        raise WindowExhaustedError(
            f"Shifting {direction} leaves the stored window of length {len(x.symbols)}"
        )
    return ShiftPoint(x.symbols, origin)


def shift_dist(x: ShiftPoint, y: ShiftPoint) -> float:
    """
    2^-j for the least |i| where x and y disagree in their common window.

    Points agreeing on the whole common symmetric window are at distance 0.

    Raises:
        WindowExhaustedError: If coordinate 0 is missing from either window
    """
    reach = min(-x.lo, -y.lo, x.hi, y.hi)
    if reach < 0:
        raise WindowExhaustedError("Coordinate 0 is outside a stored window")
    a = np.asarray(x.symbols[x.origin - reach : x.origin + reach + 1])
    b = np.asarray(y.symbols[y.origin - reach : y.origin + reach + 1])
    differ = np.flatnonzero(a != b)
    if len(differ) == 0:
        return 0.0
    return 2.0 ** -int(np.min(np.abs(differ - reach)))


def cantor_identity(x: str) -> str:
    """The identity map of the Cantor set."""
    return x


def cantor_dist(x: str, y: str) -> float:
    """
    2^-(common prefix length), 0 for equal words.

    Raises:
        WindowExhaustedError: If the prefixes have different lengths
    """
    if len(x) != len(y):
        raise WindowExhaustedError(f"Cantor prefixes of lengths {len(x)} and {len(y)} differ")
    for i, (a, b) in enumerate(zip(x, y, strict=True)):
        if a != b:
            return 2.0**-i
    return 0.0


class ShiftSystem(DynamicalSystem):
    """
    Full shift on `alphabet` symbols.

    Args:
        alphabet: Number of symbols (>= 2)
        half_window: Coordinates stored on each side of 0 for random points
    """

    name = "shift2"
    point_kind = "shift"

    def __init__(self, alphabet: int = 2, half_window: int = 96):
        if alphabet < 2:
            raise SystemConfigError(f"Alphabet needs at least 2 symbols, got {alphabet}")
        self.alphabet = alphabet
        self.half_window = half_window
        self.name = f"shift{alphabet}"

    def params(self) -> dict[str, Any]:
        return {"alphabet": self.alphabet, "half_window": self.half_window}

    def apply(self, x: ShiftPoint, direction: Direction = "forward") -> ShiftPoint:
        return shift_apply(x, direction)

    def dist(self, x: ShiftPoint, y: ShiftPoint) -> float:
        return shift_dist(x, y)

    def same_point(self, x: ShiftPoint, y: ShiftPoint) -> bool:
        return shift_dist(x, y) == 0.0

    def random_point(self, rng: np.random.Generator) -> ShiftPoint:
        symbols = rng.integers(0, self.alphabet, size=2 * self.half_window + 1)
        return ShiftPoint(tuple(int(s) for s in symbols), self.half_window)

    def perturb(self, x: ShiftPoint, delta: float, rng: np.random.Generator) -> ShiftPoint:
        """Resample every symbol at coordinates |i| >= J with 2^-J < delta."""
        j = tail_index(delta)
        symbols = list(x.symbols)
        for pos in range(len(symbols)):
            if abs(pos - x.origin) >= j:
                symbols[pos] = int(rng.integers(0, self.alphabet))
        return ShiftPoint(tuple(symbols), x.origin)

    def cloud(self, center: ShiftPoint, level: int) -> IteratedSample:
        """Center plus every single-symbol change at coordinates |i| <= r."""
        r = SHIFT_LEVELS[level]
        points = [center]
        for i in range(-r, r + 1):
            if center.lo <= i <= center.hi:
                points.append(center.replace(i, (center.at(i) + 1) % self.alphabet))
        return IteratedSample(self, points, resolution=self.resolution(level))

    def resolution(self, level: int) -> float:
        return 2.0 ** -SHIFT_LEVELS[level]

    def _cell_reach(self, grid: int) -> int:
        return max(0, round((math.log(grid * grid) / math.log(self.alphabet) - 1) / 2))

    def cell_key(self, x: ShiftPoint, grid: int) -> Hashable:
        b = self._cell_reach(grid)
        return tuple(x.at(i) for i in range(-b, b + 1))

    def n_cells(self, grid: int) -> int:
        return self.alphabet ** (2 * self._cell_reach(grid) + 1)


class CantorSystem(DynamicalSystem):
    """
    Identity on the Cantor set {0,1}^N, points stored as fixed-length prefixes.

    Args:
        bits: Prefix length of random points
    """

    name = "cantor-id"
    point_kind = "cantor"

    def __init__(self, bits: int = 32):
        self.bits = bits

    def params(self) -> dict[str, Any]:
        return {"bits": self.bits}

    def apply(self, x: str, direction: Direction = "forward") -> str:
        return cantor_identity(x)

    def apply_batch(self, batch: list[str], direction: Direction = "forward") -> list[str]:
        return list(batch)

    def dist(self, x: str, y: str) -> float:
        return cantor_dist(x, y)

    def same_point(self, x: str, y: str) -> bool:
        return x == y

    def iterate(self, x: str, k: int) -> str:
        return x

    def random_point(self, rng: np.random.Generator) -> str:
        return "".join(str(int(b)) for b in rng.integers(0, 2, size=self.bits))

    def perturb(self, x: str, delta: float, rng: np.random.Generator) -> str:
        j = tail_index(delta)
        if j >= len(x):
            return x
        tail = "".join(str(int(b)) for b in rng.integers(0, 2, size=len(x) - j))
        return x[:j] + tail

    def cloud(self, center: str, level: int) -> IteratedSample:
        """Center plus every single-bit flip at positions below the level length."""
        length = min(CANTOR_LEVELS[level], len(center))
        points = [center]
        for p in range(length):
            flipped = "1" if center[p] == "0" else "0"
            points.append(center[:p] + flipped + center[p + 1 :])
        return IteratedSample(self, points, resolution=self.resolution(level))

    def resolution(self, level: int) -> float:
        return 2.0 ** -CANTOR_LEVELS[level]

    def _cell_bits(self, grid: int) -> int:
        return max(1, round(math.log2(grid * grid)))

    def cell_key(self, x: str, grid: int) -> Hashable:
        return x[: self._cell_bits(grid)]

    def n_cells(self, grid: int) -> int:
        return 2 ** self._cell_bits(grid)


def make_shift_point(word: Sequence[int], origin: int = 0) -> ShiftPoint:
    """Shift point from a finite word whose coordinate 0 sits at `origin`."""
    return ShiftPoint(tuple(int(s) for s in word), origin)
