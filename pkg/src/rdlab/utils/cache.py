"""In-process memo cache for expensive algebraic objects.

Field descriptors, classical groups with their stabilizer chains and the
derived inference engine are expensive to build and immutable once built,
so they are memoized per process behind a small cache manager.
"""

import json
import hashlib
from abc import ABC, abstractmethod
from typing import Any, Callable, Optional

from .logging import get_logger

logger = get_logger(__name__)


class CacheBackend(ABC):
    """Abstract cache backend."""

    @abstractmethod
    def get(self, key: str) -> Optional[Any]:
        """Get value from cache."""
        pass

    @abstractmethod
    def set(self, key: str, value: Any):
        """Store a value."""
        pass

    @abstractmethod
    def delete(self, key: str):
        """Delete key from cache."""
        pass

    @abstractmethod
    def clear(self):
        """Clear all cache."""
        pass

    @abstractmethod
    def exists(self, key: str) -> bool:
        """Check if key exists."""
        pass


class MemoryCache(CacheBackend):
    """Bounded in-memory cache; evicts the oldest entry when full."""

    def __init__(self, max_entries: int = 256):
        self.cache: dict = {}
        self.max_entries = max_entries

    def get(self, key: str) -> Optional[Any]:
        return self.cache.get(key)

    def set(self, key: str, value: Any):
        if key not in self.cache and len(self.cache) >= self.max_entries:
            oldest_key = next(iter(self.cache))
            self.delete(oldest_key)
            logger.debug(f"Evicted key={oldest_key}")
        self.cache[key] = value

    def delete(self, key: str):
        self.cache.pop(key, None)

    def clear(self):
        self.cache.clear()
        logger.debug("Memory cache cleared")

    def exists(self, key: str) -> bool:
        return key in self.cache


class CacheManager:
    """High-level cache manager with hit/miss statistics."""

    def __init__(self, backend: CacheBackend):
        self.backend = backend
        self.stats = {
            'hits': 0,
            'misses': 0,
            'sets': 0,
        }

    @staticmethod
    def create_key(*args, **kwargs) -> str:
        """Create cache key from arguments."""
        key_data = json.dumps({'args': args, 'kwargs': kwargs}, sort_keys=True, default=str)
        return hashlib.sha256(key_data.encode()).hexdigest()

    def get(self, key: str) -> Optional[Any]:
        value = self.backend.get(key)
        if value is not None:
            self.stats['hits'] += 1
        else:
            self.stats['misses'] += 1
        return value

    def set(self, key: str, value: Any):
        self.backend.set(key, value)
        self.stats['sets'] += 1

    def get_or_build(self, namespace: str, builder: Callable[[], Any], *args, **kwargs) -> Any:
        """Return the cached object for ``(namespace, args, kwargs)``, building it on a miss."""
        key = self.create_key(namespace, *args, **kwargs)
        value = self.get(key)
        if value is None:
            value = builder()
            self.set(key, value)
        return value

    def clear(self):
        self.backend.clear()

    def get_stats(self) -> dict:
        """Get cache statistics."""
        total = self.stats['hits'] + self.stats['misses']
        hit_rate = (self.stats['hits'] / total * 100) if total > 0 else 0
        return {
            **self.stats,
            'hit_rate': f"{hit_rate:.1f}%"
        }


_memo = CacheManager(MemoryCache())


def memo() -> CacheManager:
    """Process-wide memo cache."""
    return _memo
