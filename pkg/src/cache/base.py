"""
Abstract memo cache interface.

Experiments share expensive intermediate results (link scans, certificates,
chain graphs) through a cache keyed by system and parameters.
"""

from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import Any


class MemoCache(ABC):
    """
    Abstract base class for memo caches.

    Example:
        cache = InMemoryCache(max_size=64)
        scan = cache.get_or_compute(("links", "sphere", 0.02), lambda: scan_links(...))
    """

    @abstractmethod
    def get(self, key: Any) -> Any | None:
        """
        Retrieve a value.

        Args:
            key: Hashable cache key

        Returns:
            Cached value if present, None otherwise
        """
        pass

    @abstractmethod
    def set(self, key: Any, value: Any) -> None:
        """Store a value under key."""
        pass

    @abstractmethod
    def delete(self, key: Any) -> bool:
        """
        Remove a value.

        Returns:
            True if the key existed
        """
        pass

    @abstractmethod
    def exists(self, key: Any) -> bool:
        pass

    @abstractmethod
    def clear(self) -> None:
        """Drop every entry."""
        pass

    @abstractmethod
    def stats(self) -> dict[str, Any]:
        """Hit, miss and size counters."""
        pass

    def get_or_compute(self, key: Any, compute: Callable[[], Any]) -> Any:
        """Return the cached value for key, computing and storing it on a miss."""
        if self.exists(key):
            return self.get(key)
        value = compute()
        self.set(key, value)
        return value
