import json

import pytest

from conftest import group
from dynkincoh import verify
from dynkincoh.cache import CACHE_VERSION, Cache
from dynkincoh.diagram import named_diagram


@pytest.mark.parametrize("suite", ["table", "classical", "quasi-iso", "top", "affine"])
def test_suites_pass(suite):
    checks = verify.run(suite)
    assert checks and all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_stabilisation_suite_flags_only_type_b():
    checks = verify.run("stabilisation")
    failing = [c.name for c in checks if not c.ok]
    assert failing == ["stabilisation B"]


def test_reference_rows():
    assert verify.TABLE["E7"] == (1, 0, 2, 0, 7, 0)
    assert verify.TABLE["E8"] == (1, 0, 2, 0, 6, 1, 17)
    assert "E8" in verify.LARGE


def test_cache_store_load(tmp_path):
    D = named_diagram("B3")
    c = Cache(tmp_path)
    assert c.load(D) is None
    c.store(D, group("B3"), {"hc": [0, 0, 2, 0]})
    data = c.load(D)
    assert data["version"] == CACHE_VERSION
    assert sum(x["size"] for x in data["classes"]) == 48
    assert c.result(D, "hc") == [0, 0, 2, 0]
    c.store(D, results={"cd": [0, 0, 2, 0]})
    assert sorted(c.load(D)["results"]) == ["cd", "hc"]
    assert c.load(named_diagram("A3")) is None


def test_cache_invalidation(tmp_path):
    D = named_diagram("A2")
    c = Cache(tmp_path)
    c.store(D, results={"hc": [0, 0, 1]})
    p = c.path(D)
    data = json.loads(p.read_text())
    data["version"] = CACHE_VERSION + 1
    p.write_text(json.dumps(data))
    assert c.load(D) is None
    data["version"] = CACHE_VERSION
    data["diagram_hash"] = "0" * 20
    p.write_text(json.dumps(data))
    assert c.load(D) is None
    p.write_text("{not json")
    assert c.load(D) is None
    assert c.clear() == 1


def test_disabled_cache(tmp_path):
    c = Cache(tmp_path, enabled=False)
    c.store(named_diagram("A2"), results={"x": 1})
    assert c.entries() == [] and c.load(named_diagram("A2")) is None
