"""
In-memory memo cache.

Entries live for the lifetime of the process; a size bound evicts the
oldest entry first.
"""

import logging
from dataclasses import dataclass
from typing import Any

from src.cache.base import MemoCache

logger = logging.getLogger(__name__)


@dataclass
class CacheStats:
    """Cache counters."""

    hits: int = 0
    misses: int = 0
    sets: int = 0
    deletes: int = 0
    evictions: int = 0


class InMemoryCache(MemoCache):
    """
    Dictionary-backed memo cache with optional size bound.

    None is a valid cached value; use exists() to tell it from a miss.

    Args:
        max_size: Maximum number of entries (None = unlimited)
    """

    def __init__(self, max_size: int | None = None):
        self._store: dict[Any, Any] = {}
        self._max_size = max_size
        self._stats = CacheStats()

    def __len__(self) -> int:
        return len(self._store)

    def get(self, key: Any) -> Any | None:
        if key not in self._store:
            self._stats.misses += 1
            return None
        self._stats.hits += 1
        return self._store[key]

    def set(self, key: Any, value: Any) -> None:
        """Store a value, evicting the oldest entry when the cache is full."""
        if self._max_size and len(self._store) >= self._max_size and key not in self._store:
            oldest = next(iter(self._store))
            del self._store[oldest]
            self._stats.evictions += 1
            logger.debug(f"Evicted cache entry {oldest!r}")
        self._store[key] = value
        self._stats.sets += 1

    def delete(self, key: Any) -> bool:
        if key in self._store:
            del self._store[key]
            self._stats.deletes += 1
            return True
        return False

    def exists(self, key: Any) -> bool:
        return key in self._store

    def clear(self) -> None:
        self._store.clear()

    def stats(self) -> dict[str, Any]:
        """
        Cache statistics.

        Returns:
            Dictionary with size, max_size, hits, misses, sets, deletes,
            evictions and hit_rate (percent)
        """
        gets = self._stats.hits + self._stats.misses
        hit_rate = self._stats.hits / gets * 100 if gets else 0.0
        return {
            "size": len(self._store),
            "max_size": self._max_size,
            "hits": self._stats.hits,
            "misses": self._stats.misses,
            "sets": self._stats.sets,
            "deletes": self._stats.deletes,
            "evictions": self._stats.evictions,
            "hit_rate": round(hit_rate, 2),
        }
