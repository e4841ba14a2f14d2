import os

import pytest

from loopk.exceptions import ConfigurationError
from loopk.settings import DEFAULTS, LoopKSettings, loopk_settings
from loopk.utils import strtobool


def test_defaults():
    settings = LoopKSettings(user_settings={})
    assert settings.LENGTH_CAP == 18
    assert settings.JOBS == 1
    assert settings.CACHE_ENABLED is True
    assert settings.CACHE_DIR == os.path.expanduser(DEFAULTS["CACHE_DIR"])


def test_environment_overrides():
    settings = LoopKSettings(
        environ={"LOOPK_LENGTH_CAP": "24", "LOOPK_CACHE_ENABLED": "off", "OTHER": "1"}
    )
    assert settings.LENGTH_CAP == 24
    assert settings.CACHE_ENABLED is False
    assert "OTHER" not in settings.user_settings


def test_global_settings_follow_the_environment(monkeypatch, tmp_path):
    assert loopk_settings.CACHE_ENABLED is False
    assert loopk_settings.CACHE_DIR == str(tmp_path / "cache")
    monkeypatch.setenv("LOOPK_JOBS", "3")
    loopk_settings.reload()
    assert loopk_settings.JOBS == 3


@pytest.mark.parametrize(
    "environ",
    [
        {"LOOPK_LENGTH_CAP": "0"},
        {"LOOPK_LENGTH_CAP": "many"},
        {"LOOPK_JOBS": "-2"},
        {"LOOPK_DEBUG": "perhaps"},
    ],
)
def test_invalid_values(environ):
    settings = LoopKSettings(environ=environ)
    key = next(iter(environ))[len("LOOPK_"):]
    with pytest.raises(ConfigurationError):
        getattr(settings, key)


def test_unknown_setting():
    with pytest.raises(AttributeError):
        LoopKSettings(user_settings={}).NOT_A_SETTING


def test_as_dict_and_reload():
    settings = LoopKSettings(user_settings={"JOBS": 2})
    assert settings.as_dict()["JOBS"] == 2
    settings.reload()
    assert settings.JOBS == 2


@pytest.mark.parametrize(
    "value, expected", [("Yes", True), ("0", False), (" ON ", True), ("f", False)]
)
def test_strtobool(value, expected):
    assert strtobool(value) is expected


def test_strtobool_rejects_other_values():
    with pytest.raises(ValueError):
        strtobool("maybe")
