import json

import pytest
from hypothesis import given

from finspan import bispan as bs
from finspan import docs
from finspan import spancat as sc
from finspan.errors import InvalidStructure
from finspan.group import by_name
from finspan.groupoid import FiniteGroupoid, GroupoidMap
from finspan.gset import GSet, GSetMap

from conftest import group, gsets


def _round_trip(obj):
    text = docs.dumps(docs.dump(obj))
    back = docs.loads(text)
    assert docs.dumps(docs.dump(back)) == text
    return back, text


@pytest.mark.parametrize("name", ["1", "C2", "S3", "D4"])
def test_group_round_trip(name):
    G = group(name)
    back, _ = _round_trip(G)
    assert back == G


@given(gsets(max_size=6))
def test_gset_round_trip(X):
    back, text = _round_trip(X)
    assert back == X
    assert text.endswith("\n")
    docs.validate(json.loads(text))


def test_map_span_bispan_round_trips():
    G = group("C2")
    R = GSet.regular(G)
    f = GSetMap.to_point(R)
    assert _round_trip(f)[0] == f
    spec = sc.gset_triple(G, "all", "surjective")
    s = sc.Span(GSetMap.identity(R), f, spec)
    back, _ = _round_trip(s)
    assert back.spec == spec and sc.span_iso(back, s)
    b = bs.compose_bispans(bs.transfer(f, bs.bispan_triple(G)),
                           bs.norm(GSetMap.identity(GSet.point(G)), bs.bispan_triple(G)))
    back, _ = _round_trip(b)
    assert bs.bispan_iso(back, b)


def test_groupoid_round_trips():
    G = group("S3")
    BG = FiniteGroupoid.from_group(G)
    back, _ = _round_trip(BG)
    assert back == BG
    A = FiniteGroupoid.action(GSet.cosets(G, G.class_rep(1)))
    assert _round_trip(A)[0] == A
    m = GroupoidMap.action_projection(GSet.cosets(G, G.class_rep(1)))
    assert _round_trip(m)[0] == m
    s = sc.Span(GroupoidMap.identity(m.source), m, sc.GROUPOID_ORBITAL)
    assert sc.span_iso(_round_trip(s)[0], s)


def test_integer_arrays_are_one_line():
    text = docs.dumps(docs.dump(group("C3")))
    assert "[0, 1, 2]" in text


def test_hash_mismatch_rejected():
    doc = docs.dump(GSet.regular(group("C2")))
    ref = doc["group"]
    doc["bundle"][ref]["table"] = [[0, 1], [1, 1]]
    with pytest.raises(InvalidStructure, match="content hash"):
        docs.load(doc)


def test_missing_reference_rejected():
    doc = docs.dump(GSet.regular(group("C2")))
    doc["bundle"] = {}
    with pytest.raises(InvalidStructure, match="missing"):
        docs.load(doc)


@pytest.mark.parametrize("bad", [
    {"schema": "gset/9"},
    {"schema": "gset/1", "group": "sha256:00", "action": []},
    {"schema": "group/1", "table": [[0, -1]]},
    {"schema": "span/1", "world": "gset", "backwards": "all", "forwards": "full",
     "left": "sha256:" + "0" * 64, "right": "sha256:" + "0" * 64},
    {"schema": "group/1", "extra": 1},
    [1, 2],
])
def test_schema_violations(bad):
    with pytest.raises(InvalidStructure):
        docs.load(bad)


def test_not_json():
    with pytest.raises(InvalidStructure):
        docs.loads("{not json")


def test_group_by_generators_and_name():
    G = docs.load({"schema": "group/1", "generators": [[1, 2, 0], [1, 0, 2]]})
    assert G.order == 6
    assert docs.load({"schema": "group/1", "name": "C4"}) == by_name("C4")
    with pytest.raises(InvalidStructure):
        docs.load({"schema": "group/1"})


def test_invalid_action_rejected():
    doc = docs.dump(GSet.regular(group("C2")))
    doc["action"] = [[1, 0], [0, 1]]
    with pytest.raises(InvalidStructure):
        docs.load(doc)


def test_write_and_read(tmp_path):
    X = GSet.from_classes(group("S3"), [1, 0, 1, 2])
    p = tmp_path / "x.json"
    docs.write(str(p), X)
    assert docs.read(str(p)) == X
    assert p.read_text() == docs.dumps(docs.dump(X))
