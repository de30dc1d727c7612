# /usr/bin/env python3
# Cache Manager for Computed Connectivity Results
# Disk-based store for materialized structures and golden adjunction reports

import hashlib
import pickle
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from src.constants import DEFAULT_CACHE_DIR


class CacheManager:
    """
    Manages disk-based caching of computed results.

    Features:
    - Stores any picklable value (structures, reports)
    - Keys derived from the canonical document text and the operation name
    - Entries never expire: the first verified result is the golden record
    """

    def __init__(self, cache_dir: str = DEFAULT_CACHE_DIR):
        """
        Initialize cache manager.

        Args:
            cache_dir: Directory path for cache storage
        """
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def _generate_cache_key(self, document_text: str, operation: str) -> str:
        """
        Generate a unique cache key for an operation on a document.

        Args:
            document_text: Canonical rendering of the inputs
            operation: Operation name, including any selecting options

        Returns:
            Cache key string
        """
        digest = hashlib.sha256(f"{operation}\n{document_text}".encode("utf-8")).hexdigest()
        return f"{operation.split()[0]}_{digest[:32]}.pkl"

    def _get_cache_path(self, cache_key: str) -> Path:
        return self.cache_dir / cache_key

    def is_cached(self, document_text: str, operation: str) -> bool:
        return self._get_cache_path(self._generate_cache_key(document_text, operation)).exists()

    def get_cached(self, document_text: str, operation: str) -> Optional[Any]:
        """
        Retrieve a cached value.

        Args:
            document_text: Canonical rendering of the inputs
            operation: Operation name

        Returns:
            The stored value, or None if absent or unreadable
        """
        cache_key = self._generate_cache_key(document_text, operation)
        cache_path = self._get_cache_path(cache_key)

        if not cache_path.exists():
            return None

        try:
            with open(cache_path, "rb") as f:
                return pickle.load(f)
        except Exception as e:
            print(f"Warning: Failed to load cache file {cache_key}: {e}", file=sys.stderr)
            return None

    def save_to_cache(self, value: Any, document_text: str, operation: str) -> bool:
        """
        Save a value to the cache.

        Returns:
            True if successfully saved, False otherwise
        """
        cache_key = self._generate_cache_key(document_text, operation)
        cache_path = self._get_cache_path(cache_key)

        try:
            with open(cache_path, "wb") as f:
                pickle.dump(value, f)
            return True
        except Exception as e:
            print(f"Warning: Failed to save cache file {cache_key}: {e}", file=sys.stderr)
            return False

    def clear_all_cache(self) -> int:
        """
        Remove all cache files.

        Returns:
            Number of files removed
        """
        removed_count = 0

        for cache_file in self.cache_dir.glob("*.pkl"):
            try:
                cache_file.unlink()
                removed_count += 1
            except Exception as e:
                print(f"Warning: Failed to remove cache {cache_file.name}: {e}", file=sys.stderr)

        return removed_count

    def get_cache_info(self) -> Dict[str, Any]:
        """
        Get information about current cache state.

        Returns:
            Dictionary with cache statistics
        """
        cache_files = list(self.cache_dir.glob("*.pkl"))
        total_size = sum(cache_file.stat().st_size for cache_file in cache_files)

        operations: Dict[str, int] = {}
        for cache_file in cache_files:
            operation = cache_file.name.rsplit("_", 1)[0]
            operations[operation] = operations.get(operation, 0) + 1

        return {
            "total_files": len(cache_files),
            "operations": dict(sorted(operations.items())),
            "total_size_mb": round(total_size / (1024 * 1024), 2),
            "cache_directory": str(self.cache_dir),
        }
