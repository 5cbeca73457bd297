import pytest
from hypothesis import given
from strategies import edge_sets

from rainbow_forge.graph_core import (
    edge,
    edge_set,
    family,
    is_rainbow_selection,
    mate_map,
    relabel,
    symmetric_difference_components,
    validate_matching,
)


def test_edge_is_canonical():
    assert edge(3, 1) == edge(1, 3) == (1, 3)


def test_loop_rejected():
    with pytest.raises(ValueError):
        edge(2, 2)


def test_family_builds_edge_sets():
    fam = family([[(1, 0), (2, 3)], []])
    assert fam == (frozenset({(0, 1), (2, 3)}), frozenset())


def test_validate_matching():
    assert validate_matching({(0, 1), (2, 3)})
    assert not validate_matching({(0, 1), (1, 2)})
    assert validate_matching(set())


def test_mate_map_is_symmetric():
    assert mate_map({(0, 1), (2, 5)}) == {0: 1, 1: 0, 2: 5, 5: 2}


def test_symmetric_difference_path_and_cycle():
    m1 = edge_set([(1, 2), (5, 6), (7, 8)])
    m2 = edge_set([(0, 1), (2, 3), (5, 7), (6, 8)])
    comps = symmetric_difference_components(m1, m2)
    path = next(c for c in comps if c.kind == "path")
    cycle = next(c for c in comps if c.kind == "cycle")
    assert path.vertices == (0, 1, 2, 3)
    assert path.surplus == 1
    assert set(cycle.vertices) == {5, 6, 7, 8} and cycle.surplus == 0


@given(edge_sets(), edge_sets())
def test_components_partition_the_difference(a, b):
    # take matchings greedily from the random edge sets
    def greedy(es):
        used, out = set(), set()
        for u, v in sorted(es):
            if u not in used and v not in used:
                out.add((u, v))
                used |= {u, v}
        return frozenset(out)

    m1, m2 = greedy(a), greedy(b)
    comps = symmetric_difference_components(m1, m2)
    seen = [v for c in comps for v in c.vertices]
    assert len(seen) == len(set(seen))
    assert sum(c.first_count for c in comps) == len(m1 - m2)
    assert sum(c.second_count for c in comps) == len(m2 - m1)
    assert all(abs(c.surplus) <= 1 for c in comps)


def test_rainbow_selection():
    fam = family([[(0, 1)], [(0, 1), (2, 3)]])
    assert is_rainbow_selection(fam, [(0, (0, 1)), (1, (2, 3))])
    assert not is_rainbow_selection(fam, [(1, (0, 1)), (1, (2, 3))])
    assert not is_rainbow_selection(fam, [(0, (2, 3))])
    assert not is_rainbow_selection(fam, [(5, (0, 1))])


def test_relabel_rejects_duplicates():
    assert relabel(["x", "y"]) == {"x": 0, "y": 1}
    with pytest.raises(ValueError):
        relabel(["x", "x"])
