import logging
import random

import pytest

from loopk.kclass import build_context
from loopk.laurent import LaurentPoly


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """
    Keep tests away from the user's cache and environment overrides.
    """
    from loopk.settings import loopk_settings

    monkeypatch.setenv("LOOPK_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("LOOPK_CACHE_ENABLED", "false")
    loopk_settings.reload()
    yield
    loopk_settings.reload()
    # the CLI attaches handlers bound to captured streams
    package_logger = logging.getLogger("loopk")
    package_logger.handlers.clear()
    package_logger.setLevel(logging.NOTSET)


@pytest.fixture(scope="session")
def a1():
    return build_context("A1")


@pytest.fixture(scope="session")
def a2():
    return build_context("A2")


@pytest.fixture(scope="session")
def c2():
    return build_context("C2")


@pytest.fixture(scope="session", params=["A1", "A2", "C2"])
def ctx(request):
    return build_context(request.param)


def random_poly(rng: random.Random, rank: int, terms: int = 4, spread: int = 3):
    data = {}
    for _ in range(rng.randint(1, terms)):
        exponent = tuple(rng.randint(-spread, spread) for _ in range(rank))
        data[exponent] = data.get(exponent, 0) + rng.randint(-5, 5)
    return LaurentPoly(data)


def mono(*exponent, coeff=1):
    return LaurentPoly.monomial(exponent, coeff)
