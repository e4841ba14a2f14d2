"""
Settings for loopk are all namespaced in the LOOPK_ prefix of the environment.
For example, a user might export:

    LOOPK_CACHE_DIR=/scratch/loopk
    LOOPK_LENGTH_CAP=20
    LOOPK_JOBS=4

This module provides the `loopk_settings` object, used to access loopk
settings, checking for user settings first, then falling back to the defaults.
"""
import logging
import os
from typing import Any, Dict, Mapping, Optional

import orjson

from .exceptions import ConfigurationError
from .utils import strtobool

logger = logging.getLogger(__name__)

ENV_PREFIX = "LOOPK_"

DEFAULTS: Dict[str, Any] = {
    "TYPE_LABEL": "A1",
    # Longest reduced word the convolution engine will expand.
    "LENGTH_CAP": 18,
    "CACHE_DIR": os.path.join("~", ".cache", "loopk"),
    "CACHE_ENABLED": True,
    "OUTPUT_FORMAT": "table",
    "JOBS": 1,
    "DEBUG": False,
    "ORJSON_OPTIONS": (
        orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE
    ),
    "CSV_CHARSET": "utf-8",
    "LOG_FORMAT": "%(asctime)s %(levelname)s %(name)s: %(message)s",
}

_BOOLEAN = {"CACHE_ENABLED", "DEBUG"}
_POSITIVE_INT = {"LENGTH_CAP", "JOBS"}
_PATHS = {"CACHE_DIR"}


def _coerce(key: str, raw: Any) -> Any:
    if key in _BOOLEAN:
        if isinstance(raw, bool):
            return raw
        try:
            return strtobool(str(raw))
        except ValueError:
            raise ConfigurationError(f"{ENV_PREFIX}{key}: {raw!r} is not a boolean")
    if key in _POSITIVE_INT:
        try:
            value = int(raw)
        except (TypeError, ValueError):
            raise ConfigurationError(f"{ENV_PREFIX}{key}: {raw!r} is not an integer")
        if value <= 0:
            raise ConfigurationError(f"{ENV_PREFIX}{key}: must be positive, got {value}")
        return value
    if key in _PATHS:
        return os.path.expanduser(str(raw))
    return raw


class LoopKSettings:
    """
    A settings object that allows loopk settings to be accessed as
    properties. For example:

        from loopk.settings import loopk_settings
        print(loopk_settings.LENGTH_CAP)

    User values come from `user_settings` when given, otherwise from the
    environment. Values are validated on first access and cached.
    """

    def __init__(
        self,
        user_settings: Optional[Mapping[str, Any]] = None,
        defaults: Optional[Mapping[str, Any]] = None,
        environ: Optional[Mapping[str, str]] = None,
    ):
        self._explicit = user_settings is not None
        self._user_settings = dict(user_settings) if self._explicit else None
        self.defaults = dict(defaults or DEFAULTS)
        self._environ = environ
        self._cached_attrs = set()

    @property
    def user_settings(self) -> Dict[str, Any]:
        if self._user_settings is None:
            environ = os.environ if self._environ is None else self._environ
            self._user_settings = {
                key[len(ENV_PREFIX):]: value
                for key, value in environ.items()
                if key.startswith(ENV_PREFIX) and key[len(ENV_PREFIX):] in self.defaults
            }
        return self._user_settings

    def __getattr__(self, attr: str) -> Any:
        if attr.startswith("_") or attr not in self.defaults:
            raise AttributeError("Invalid loopk setting: '%s'" % attr)

        try:
            val = self.user_settings[attr]
        except KeyError:
            val = self.defaults[attr]

        val = _coerce(attr, val)

        self._cached_attrs.add(attr)
        setattr(self, attr, val)
        return val

    def as_dict(self) -> Dict[str, Any]:
        return {key: getattr(self, key) for key in self.defaults}

    def reload(self) -> None:
        for attr in self._cached_attrs:
            delattr(self, attr)
        self._cached_attrs.clear()
        if not self._explicit:
            self._user_settings = None


loopk_settings = LoopKSettings()
