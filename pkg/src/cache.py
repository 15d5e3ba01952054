"""Computation cache shared by worker threads"""
import json
import threading
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional


def cache_key(namespace: str, *parts: Any) -> str:
    """Stable key from exact values; rationals and big ints go through str()"""
    return f"{namespace}:{json.dumps([str(p) for p in parts])}"


class CacheBackend(ABC):
    """Abstract cache backend"""

    @abstractmethod
    def get(self, key: str) -> Optional[Any]:
        pass

    @abstractmethod
    def set(self, key: str, value: Any, ttl: Optional[int] = None):
        pass

    @abstractmethod
    def delete(self, key: str):
        pass

    @abstractmethod
    def clear(self):
        pass


class InMemoryCache(CacheBackend):
    """In-memory cache with optional TTL and hit/miss statistics"""

    def __init__(self):
        self._cache: Dict[str, tuple[Any, Optional[float]]] = {}
        self._stats = {"hits": 0, "misses": 0}
        self._lock = threading.Lock()

    def get(self, key: str) -> Optional[Any]:
        """Get value from cache"""
        with self._lock:
            if key in self._cache:
                value, expiry = self._cache[key]
                if expiry is None or time.time() < expiry:
                    self._stats["hits"] += 1
                    return value
                del self._cache[key]
            self._stats["misses"] += 1
            return None

    def set(self, key: str, value: Any, ttl: Optional[int] = None):
        """Set value; ttl=None keeps it for the life of the run"""
        expiry = time.time() + ttl if ttl is not None else None
        with self._lock:
            self._cache[key] = (value, expiry)

    def delete(self, key: str):
        with self._lock:
            self._cache.pop(key, None)

    def clear(self):
        with self._lock:
            self._cache.clear()
            self._stats = {"hits": 0, "misses": 0}

    def __len__(self) -> int:
        return len(self._cache)

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics"""
        with self._lock:
            total = self._stats["hits"] + self._stats["misses"]
            hit_rate = self._stats["hits"] / total if total > 0 else 0
            return {
                **self._stats,
                "entries": len(self._cache),
                "total_requests": total,
                "hit_rate": round(hit_rate, 3),
            }


def cached(cache: Optional[CacheBackend], key: str, compute):
    """Return the cached value for key, computing and storing it on a miss"""
    if cache is None:
        return compute()
    value = cache.get(key)
    if value is None:
        value = compute()
        cache.set(key, value)
    return value
