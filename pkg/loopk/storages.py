"""
On-disk cache of convolution tables, one JSON file per (type, u, v).
"""
import logging
import os
from typing import Optional, Union

import orjson

from .conv import StructConstTable
from .exceptions import CacheCorrupted, LoopKError, ParseError
from .parsers import JSONParser
from .serializers import table_from_data, table_to_data
from .settings import loopk_settings
from .utils import atomic_write, content_digest, format_word
from .weyl import AffElem, reduced_word

__all__ = ["SCHEMA_VERSION", "ResultStorage", "get_storage"]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_CANONICAL = orjson.OPT_SORT_KEYS


class ResultStorage:
    """
    Reads verify schema and digest; a failed check is logged and treated as a
    miss so the caller recomputes and overwrites the entry.
    """

    def __init__(self, location: Union[str, os.PathLike]):
        self.location = os.path.expanduser(str(location))
        self.hits = 0
        self.misses = 0

    def _normalize_name(self, type_label: str, u: AffElem, v: AffElem) -> str:
        u_name = format_word(reduced_word(u)) or "e"
        v_name = format_word(reduced_word(v)) or "e"
        name = f"{u_name}__{v_name}".replace(",", "-")
        return os.path.join(self.location, type_label, f"{name}.json")

    def path(self, ctx, u: AffElem, v: AffElem) -> str:
        return self._normalize_name(ctx.type_label, u, v)

    def _decode(self, ctx, u: AffElem, v: AffElem, raw: bytes) -> StructConstTable:
        try:
            document = JSONParser().parse(raw)
        except ParseError as exc:
            raise CacheCorrupted(exc.detail)
        if not isinstance(document, dict) or document.get("schema") != SCHEMA_VERSION:
            raise CacheCorrupted("schema version mismatch")
        key = {"type": ctx.type_label, "u": reduced_word(u), "v": reduced_word(v)}
        if document.get("key") != key:
            raise CacheCorrupted(f"entry is for {document.get('key')}, expected {key}")
        table = document.get("table")
        digest = content_digest(orjson.dumps(table, option=_CANONICAL))
        if digest != document.get("digest"):
            raise CacheCorrupted("digest mismatch")
        try:
            return table_from_data(ctx.group, table)
        except LoopKError as exc:
            raise CacheCorrupted(str(exc))

    def load_table(self, ctx, u: AffElem, v: AffElem) -> Optional[StructConstTable]:
        path = self.path(ctx, u, v)
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except FileNotFoundError:
            self.misses += 1
            return None
        try:
            table = self._decode(ctx, u, v, raw)
        except CacheCorrupted as exc:
            logger.warning(
                "cache entry %s is corrupted (%s); recomputing", path, exc.detail
            )
            self.misses += 1
            return None
        self.hits += 1
        logger.info("cache hit %s", path)
        return table

    def save_table(self, ctx, u: AffElem, v: AffElem, table: StructConstTable) -> str:
        data = table_to_data(table)
        document = {
            "schema": SCHEMA_VERSION,
            "key": {"type": ctx.type_label, "u": reduced_word(u), "v": reduced_word(v)},
            "digest": content_digest(orjson.dumps(data, option=_CANONICAL)),
            "table": data,
        }
        path = self.path(ctx, u, v)
        atomic_write(path, orjson.dumps(document, option=_CANONICAL))
        logger.debug("cached %s", path)
        return path


def get_storage(
    location=None, enabled: Optional[bool] = None
) -> Optional[ResultStorage]:
    """
    The configured cache, or None when caching is off.
    """
    enabled = loopk_settings.CACHE_ENABLED if enabled is None else enabled
    if not enabled:
        return None
    return ResultStorage(location or loopk_settings.CACHE_DIR)
