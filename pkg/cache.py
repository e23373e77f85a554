"""
Result Cache

Content-addressed store for pipeline reports:
- Key is the sha256 of the canonical config payload plus the convention record
- Entries live in <cache_dir>/cache_<hash[:8]>.json as {full_hash: report}
- Only an exact full-hash match is ever returned
- IO and JSON errors are swallowed; the cache is best-effort
"""

import hashlib
import json
import os
from typing import Any, Dict, Optional

from src.utils.logger import get_logger

logger = get_logger(__name__)


def _get_input_hash(payload: Dict[str, Any]) -> str:
    """Create a hash of the canonical JSON payload for caching."""
    input_str = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(input_str.encode()).hexdigest()


class ResultCache:
    """JSON result cache rooted at one directory"""

    def __init__(self, cache_dir: str):
        self.cache_dir = cache_dir

    def _get_cache_file(self, input_hash: str) -> str:
        """Bucket file for a report hash; buckets are keyed by the first 8 hex digits."""
        os.makedirs(self.cache_dir, exist_ok=True)
        return os.path.join(self.cache_dir, f"cache_{input_hash[:8]}.json")

    def key(self, config_payload: Dict[str, Any], conventions: Dict[str, Any]) -> str:
        return _get_input_hash({"config": config_payload, "conventions": conventions})

    def get(self, cache_key: str) -> Optional[Dict[str, Any]]:
        try:
            cache_file = self._get_cache_file(cache_key)
            if os.path.exists(cache_file):
                with open(cache_file, "r", encoding="utf-8") as f:
                    cache_data = json.load(f)
                    if cache_key in cache_data:
                        logger.info(f"📦 Cache hit {cache_key[:12]}")
                        return cache_data[cache_key]
        except (json.JSONDecodeError, IOError, OSError):
            pass
        return None

    def put(self, cache_key: str, value: Dict[str, Any]) -> None:
        try:
            cache_file = self._get_cache_file(cache_key)
            cache_data = {}
            if os.path.exists(cache_file):
                with open(cache_file, "r", encoding="utf-8") as f:
                    cache_data = json.load(f)
            cache_data[cache_key] = value
            with open(cache_file, "w", encoding="utf-8") as f:
                json.dump(cache_data, f, sort_keys=True)
        except (json.JSONDecodeError, IOError, OSError):
            pass


_result_caches: Dict[str, ResultCache] = {}


def get_result_cache(cache_dir: str) -> ResultCache:
    """Get or create the cache instance for a directory"""
    if cache_dir not in _result_caches:
        _result_caches[cache_dir] = ResultCache(cache_dir)
    return _result_caches[cache_dir]
