import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_forge.badge import make_origamistrip
from rainbow_forge.graph_core import edge, validate_matching
from rainbow_forge.io import (
    Instance,
    cyclic_latin,
    dumps,
    from_family,
    latin_instance,
    load_instance,
    parse_instance,
    parse_latin,
    strip_diagram,
)


def test_parse_instance_basic():
    inst = parse_instance({"vertices": ["a", "b", "c"], "colors": [[["a", "b"]], []],
                           "matching": [["b", "c"]]})
    assert inst.labels == ("a", "b", "c")
    assert inst.colors == (frozenset({(0, 1)}), frozenset())
    assert inst.matching == {(1, 2)}


@pytest.mark.parametrize("data", [
    {"vertices": ["a", "b"]},
    {"vertices": ["a", "a"], "colors": []},
    {"vertices": [1, 2], "colors": []},
    {"vertices": ["a", "b"], "colors": [[["a", "z"]]]},
    {"vertices": ["a", "b"], "colors": [[["a", "a"]]]},
    {"vertices": ["a", "b"], "colors": [[["a", "b"], ["b", "a"]]]},
    {"vertices": ["a", "b", "c"], "colors": [], "matching": [["a", "b"], ["b", "c"]]},
])
def test_parse_instance_rejects(data):
    with pytest.raises(ValueError):
        parse_instance(data)


@st.composite
def instances(draw):
    nv = draw(st.integers(2, 7))
    pairs = st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1)).filter(lambda p: p[0] != p[1])
    colors = [frozenset(edge(*p) for p in draw(st.lists(pairs, max_size=5)))
              for _ in range(draw(st.integers(0, 4)))]
    labels = [f"v{i}" for i in range(nv)]
    return from_family(colors, labels)


@settings(max_examples=100)
@given(instances())
def test_round_trip(inst):
    text = dumps(inst.to_json())
    assert parse_instance(json.loads(text)) == inst
    assert dumps(parse_instance(json.loads(text)).to_json()) == text


def test_load_instance(tmp_path):
    p = tmp_path / "inst.json"
    p.write_text(dumps(from_family([frozenset({(0, 1)})]).to_json()))
    assert load_instance(str(p)).colors == (frozenset({(0, 1)}),)


def test_from_family_needs_enough_labels():
    with pytest.raises(ValueError):
        from_family([frozenset({(0, 3)})], ["a", "b"])


def test_latin_square_to_matchings():
    rows = parse_latin("123/231/312")
    assert rows == cyclic_latin(3)
    inst = latin_instance(rows)
    assert len(inst.colors) == 3
    assert inst.labels == ("r1", "r2", "r3", "c1", "c2", "c3")
    for c in inst.colors:
        assert len(c) == 3 and validate_matching(c)
        assert all(u < 3 <= v for u, v in c)
    # symbol 1 sits at (r1,c1), (r2,c3), (r3,c2)
    assert inst.colors[0] == {(0, 3), (1, 5), (2, 4)}


@pytest.mark.parametrize("text", ["12/21/11", "123/231", "112/221/...", "12/12"])
def test_latin_rejects(text):
    with pytest.raises(ValueError):
        parse_latin(text)


def test_strip_diagram():
    s = make_origamistrip(2)
    lines = strip_diagram(s, ["x", "u1", "v1", "u2", "v2", "y"])
    assert lines == ["strip x .. y (m=2)",
                     "  A: x -- u1 == v1 -- u2 == v2 -- y",
                     "  B: x -- v1 == u1 -- v2 == u2 -- y"]


def test_dumps_is_deterministic():
    assert dumps({"b": 1, "a": [2]}) == '{"a": [2], "b": 1}\n'
    assert Instance(("a",), ()).to_json() == {"vertices": ["a"], "colors": []}
