import os

import orjson
import pytest

from loopk.conv import convolve
from loopk.storages import SCHEMA_VERSION, ResultStorage, get_storage
from loopk.weyl import enumerate_grassmannian


@pytest.fixture
def storage(tmp_path):
    return ResultStorage(tmp_path / "cache")


@pytest.fixture(scope="module")
def tau(a1):
    return enumerate_grassmannian(a1.group, 3)


def test_round_trip(a1, tau, storage):
    fresh = convolve(a1, tau[1], tau[1])
    path = storage.save_table(a1, tau[1], tau[1], fresh)
    assert path.endswith(os.path.join("A1", "0__0.json"))
    assert storage.load_table(a1, tau[1], tau[1]) == fresh
    assert storage.hits == 1

    document = orjson.loads(open(path, "rb").read())
    assert document["schema"] == SCHEMA_VERSION
    assert document["key"] == {"type": "A1", "u": [0], "v": [0]}


def test_convolve_uses_the_cache(a1, tau, storage):
    fresh = convolve(a1, tau[1], tau[2], storage=storage)
    assert storage.misses == 1
    assert os.path.exists(storage.path(a1, tau[1], tau[2]))
    cached = convolve(a1, tau[1], tau[2], storage=storage)
    assert storage.hits == 1
    assert cached == fresh


def test_identity_file_name(a1, tau, storage):
    assert storage.path(a1, tau[0], tau[2]).endswith(os.path.join("A1", "e__1-0.json"))


def test_missing_entry(a1, tau, storage):
    assert storage.load_table(a1, tau[2], tau[3]) is None
    assert storage.misses == 1


@pytest.mark.parametrize(
    "corrupt",
    [
        lambda doc: b"{truncated",
        lambda doc: orjson.dumps(dict(doc, schema=SCHEMA_VERSION + 1)),
        lambda doc: orjson.dumps(dict(doc, digest="0" * 64)),
        lambda doc: orjson.dumps(dict(doc, key=dict(doc["key"], v=[1, 0]))),
    ],
)
def test_corruption_recomputes(a1, tau, storage, corrupt, caplog):
    fresh = convolve(a1, tau[1], tau[1], storage=storage)
    path = storage.path(a1, tau[1], tau[1])
    document = orjson.loads(open(path, "rb").read())
    with open(path, "wb") as fh:
        fh.write(corrupt(document))

    assert storage.load_table(a1, tau[1], tau[1]) is None
    assert "corrupted" in caplog.text

    recomputed = convolve(a1, tau[1], tau[1], storage=storage)
    assert recomputed == fresh
    assert storage.load_table(a1, tau[1], tau[1]) == fresh


def test_tampered_coefficient_is_detected(a1, tau, storage):
    convolve(a1, tau[1], tau[1], storage=storage)
    path = storage.path(a1, tau[1], tau[1])
    document = orjson.loads(open(path, "rb").read())
    document["table"][0]["coeff"] = [[[2], "2"]]
    with open(path, "wb") as fh:
        fh.write(orjson.dumps(document))
    assert storage.load_table(a1, tau[1], tau[1]) is None


def test_get_storage(tmp_path):
    assert get_storage(tmp_path, enabled=False) is None
    # the test environment disables caching
    assert get_storage() is None
    configured = get_storage(tmp_path, enabled=True)
    assert configured.location == str(tmp_path)


def test_truncated_entry_reports_parse_error(a1, tau, storage, caplog):
    convolve(a1, tau[1], tau[2], storage=storage)
    with open(storage.path(a1, tau[1], tau[2]), "wb") as fh:
        fh.write(b'{"schema": 1, "key"')
    assert storage.load_table(a1, tau[1], tau[2]) is None
    assert "corrupted (not JSON: " in caplog.text
