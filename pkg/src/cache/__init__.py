"""
Memo caches for expensive intermediate results.

- base: MemoCache interface with get_or_compute
- memory: size-bounded in-memory implementation
"""

from src.cache.base import MemoCache
from src.cache.memory import CacheStats, InMemoryCache

__all__ = ["CacheStats", "InMemoryCache", "MemoCache"]
