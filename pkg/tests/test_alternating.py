import networkx as nx
import pytest
from hypothesis import given, settings
from strategies import edge_sets

from rainbow_forge.alternating import (
    Aap,
    augment,
    find_f_aap,
    is_aap,
    is_alternating,
    is_alternating_odd_cycle,
    is_rainbow_aap,
    make_rainbow_aap,
    max_matching,
)
from rainbow_forge.graph_core import edge_set, validate_matching

F = edge_set([(1, 2)])


def test_aap_examples():
    assert is_aap((0, 1, 2, 3), F)
    assert is_aap((0, 3), F)
    assert not is_aap((0, 1, 2), F)  # even length
    assert not is_aap((1, 2, 3, 0), F)  # starts on a covered vertex
    assert not is_aap((0, 1, 0, 3), F)  # not simple


def test_alternation_required():
    f = edge_set([(1, 2), (3, 4)])
    assert is_alternating((0, 1, 2, 3, 4, 5), f)
    assert not is_alternating((0, 1, 2, 4, 3, 5), f | {(2, 4)})


def test_odd_cycle():
    assert is_alternating_odd_cycle((0, 1, 2), F)
    assert not is_alternating_odd_cycle((0, 1, 2, 3), F)


def test_aap_orients_from_smaller_end():
    p = Aap.from_vertices((3, 2, 1, 0), F)
    assert p.vertices == (0, 1, 2, 3)
    assert p.f_edges == F
    assert len(p) == 3
    with pytest.raises(ValueError):
        Aap.from_vertices((0, 1, 2), F)


@settings(max_examples=150, deadline=None)
@given(edge_sets(max_vertices=9, max_edges=16))
def test_max_matching_matches_networkx(es):
    g = nx.Graph(list(es))
    expected = len(nx.max_weight_matching(g, maxcardinality=True))
    m = max_matching(es)
    assert validate_matching(m) and m <= es
    assert len(m) == expected


@settings(max_examples=150, deadline=None)
@given(edge_sets(max_vertices=8), edge_sets(max_vertices=8))
def test_find_f_aap_exists_iff_f_not_maximum(a, b):
    f = max_matching(a)
    pool = b | f
    p = find_f_aap(f, b)
    bigger = len(max_matching(pool)) > len(f)
    assert (p is not None) == bigger
    if p is not None:
        assert is_aap(p.vertices, f)
        assert set(p.edges) <= pool
        grown = augment(f, p)
        assert validate_matching(grown) and len(grown) == len(f) + 1


def test_augment_rejects_non_aap():
    with pytest.raises(ValueError):
        augment(F, Aap((0, 1), frozenset()))


def test_rainbow_aap_check():
    fam = (frozenset({(0, 1)}), frozenset({(2, 3)}))
    w = make_rainbow_aap((0, 1, 2, 3), F, {(0, 1): 0, (2, 3): 1})
    assert is_rainbow_aap(w, F, fam)
    assert w.color_of((2, 3)) == 1
    same = make_rainbow_aap((0, 1, 2, 3), F, {(0, 1): 0, (2, 3): 0})
    assert not is_rainbow_aap(same, F, fam)
    assert not is_rainbow_aap(w, F, (fam[1], fam[0]))
