import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import aap_families, is_path_family, perturbed_badge_family

from rainbow_forge.alternating import is_rainbow_aap, path_edges
from rainbow_forge.badge import badge_paths, make_badge, make_origamistrip, verify_badge
from rainbow_forge.engine import (
    BudgetExceeded,
    ContractionFrame,
    Decision,
    PreconditionError,
    Triangle,
    _contract,
    check_union_condition,
    cooperative_decide,
    find_rainbow_triangle,
    path_from_edges,
    rainbow_aap_or_badge,
    rainbow_aap_oracle,
)
from rainbow_forge.graph_core import edge


def test_oracle_single_edge():
    w = rainbow_aap_oracle(frozenset(), [frozenset({edge(1, 2)})])
    assert w.vertices == (1, 2)
    assert w.colors == (((1, 2), 0),)


def test_oracle_on_two_badge_and_extra_edge():
    b = make_badge([(0, 1)], [2])
    fam = list(badge_paths(b))
    assert rainbow_aap_oracle(b.skeleton, fam) is None
    fam.append(frozenset({edge(b.strips[0].u(1), b.strips[0].u(2))}))
    w = rainbow_aap_oracle(b.skeleton, fam)
    assert w is not None and is_rainbow_aap(w, b.skeleton, fam)


def test_oracle_budget_is_reported():
    b = make_badge([(0, 1), (1, 2)], [2, 2])
    with pytest.raises(BudgetExceeded):
        rainbow_aap_oracle(b.skeleton, badge_paths(b), budget=5)


def test_path_from_edges():
    assert path_from_edges([(2, 3), (0, 1), (1, 2)]) == (0, 1, 2, 3)
    with pytest.raises(ValueError):
        path_from_edges([(0, 1), (2, 3)])


@pytest.mark.parametrize("labels", [[0, 1, 2, 3], [3, 0, 1, 2], [5, 9, 2, 7]])
def test_triangle_on_one_badges(labels):
    s = make_origamistrip(1, labels)
    fam = [s.path_edges("A"), s.path_edges("B")]
    tri = find_rainbow_triangle(s.skeleton, fam)
    assert isinstance(tri, Triangle)
    assert edge(tri.a, tri.b) in s.skeleton
    assert tri.v in s.endpoints
    assert tri.color_va != tri.color_vb
    assert edge(tri.v, tri.a) in fam[tri.color_va]
    assert edge(tri.v, tri.b) in fam[tri.color_vb]


def test_triangle_or_witness_on_random_families():
    rng = random.Random(5)
    seen = set()
    for _ in range(200):
        f, fam, _ = perturbed_badge_family(rng, 3)
        if not is_path_family(f, fam):
            continue
        res = find_rainbow_triangle(f, fam)
        seen.add(type(res).__name__)
        if not isinstance(res, Triangle):
            assert is_rainbow_aap(res, f, fam)
    assert seen == {"Triangle", "RainbowAap"}


def test_triangle_needs_exactly_two_k_paths():
    s = make_origamistrip(1)
    with pytest.raises(ValueError):
        find_rainbow_triangle(s.skeleton, [s.path_edges("A")])


def test_empty_family_is_empty_badge():
    d = rainbow_aap_or_badge(frozenset(), [])
    assert d.kind == "certificate"
    assert d.certificate.badge.strips == () and d.certificate.color_map == ()


def test_four_edge_badge_is_reproduced():
    host = [(0, 1), (1, 2), (2, 3), (1, 3)]
    b = make_badge(host, [3, 2, 1, 2])
    fam = list(badge_paths(b))
    perm = list(range(16))
    random.Random(0).shuffle(perm)
    fam = [fam[i] for i in perm]
    d = rainbow_aap_or_badge(b.skeleton, fam, allow_fallback=False)
    assert d.kind == "certificate"
    cert = d.certificate
    assert verify_badge(b.skeleton, fam, cert)

    def host_graph(strips):
        g = nx.MultiGraph()
        for s in strips:
            g.add_edge(s.x, s.y, w=s.m)
        return g

    assert sorted(s.m for s in cert.badge.strips) == [1, 2, 2, 3]
    assert nx.is_isomorphic(host_graph(cert.badge.strips), host_graph(b.strips),
                            edge_match=nx.algorithms.isomorphism.categorical_multiedge_match("w", 0))


def test_malformed_path_rejected():
    with pytest.raises(ValueError):
        rainbow_aap_or_badge(frozenset({edge(1, 2)}), [frozenset({edge(0, 1), edge(1, 2)})])


def _check_decision(f, fam, d):
    w = rainbow_aap_oracle(f, fam)
    assert not d.fallback
    if d.kind == "witness":
        assert is_rainbow_aap(d.witness, f, fam)
        assert w is not None
    else:
        assert w is None
        if d.kind == "certificate":
            assert verify_badge(f, fam, d.certificate)


@settings(max_examples=200, deadline=None)
@given(aap_families(max_k=3, extra=(0, 1)))
def test_decision_agrees_with_oracle(case):
    f, fam = case
    d = rainbow_aap_or_badge(f, fam, allow_fallback=False)
    if len(fam) > 2 * len(f):
        assert d.kind == "witness"
    _check_decision(f, fam, d)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decision_on_near_badges(seed):
    f, fam, _ = perturbed_badge_family(random.Random(seed), 4)
    if not is_path_family(f, fam):
        return
    d = rainbow_aap_or_badge(f, fam, allow_fallback=False)
    _check_decision(f, fam, d)


def test_decision_json():
    s = make_origamistrip(1)
    fam = [s.path_edges("A"), s.path_edges("B")]
    d = rainbow_aap_or_badge(s.skeleton, fam)
    out = d.to_json(["x", "u", "v", "y"])
    assert out["kind"] == "certificate"
    assert out["certificate"]["strips"] == [{"x": "x", "y": "y", "interior": ["u", "v"]}]
    json.dumps(out)
    fam.append(frozenset({edge(3, 4)}))
    out = rainbow_aap_or_badge(s.skeleton, fam).to_json()
    assert out["kind"] == "witness" and len(out["path"]) % 2 == 0
    assert Decision().kind == "none"


def test_contraction_frame_round_trip():
    # triangle 0-1-2 with 1-2 matched; two paths leave it
    paths = {0: (3, 4, 5, 1, 2, 6), 1: (7, 8)}
    frame = _contract(paths, (0, 1, 2), 9)
    assert isinstance(frame, ContractionFrame)
    child = frame.child_paths(paths)
    assert child[0] == (3, 4, 5, 9) and child[1] == (7, 8)
    assert frame.attach(0) == 1
    assert frame.oriented(paths)[0] == paths[0]


def test_cooperative_strip_with_inner_set():
    s = make_origamistrip(1)  # x=0, u1=1, v1=2, y=3
    fam = [s.path_edges("A"), s.path_edges("B"), frozenset({edge(1, 2)})]
    d = cooperative_decide(s.skeleton, fam, t=1)
    assert d.kind == "certificate"
    assert d.certificate.j_set == {2}
    assert verify_badge(s.skeleton, fam, d.certificate)


def test_cooperative_t_zero_matches_plain():
    rng = random.Random(11)
    for _ in range(100):
        f, fam, _ = perturbed_badge_family(rng, 3)
        if not is_path_family(f, fam):
            continue
        a = rainbow_aap_or_badge(f, fam)
        b = cooperative_decide(f, fam, 0)
        assert a.kind == b.kind
        if a.kind == "certificate":
            assert a.certificate == b.certificate


def test_cooperative_precondition_error():
    f = frozenset({edge(1, 2)})
    fam = [frozenset({edge(0, 1)}), frozenset({edge(2, 3)}), frozenset()]
    assert check_union_condition(f, fam, 2) == (0, 2)
    with pytest.raises(PreconditionError) as info:
        cooperative_decide(f, fam, 1)
    assert info.value.indices == (0, 2)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 2))
def test_cooperative_agrees_with_oracle(seed, t):
    f, fam, _ = perturbed_badge_family(random.Random(seed), 3, t)
    if check_union_condition(f, fam, t + 1) is not None:
        return
    d = cooperative_decide(f, fam, t, check=False, allow_fallback=False)
    _check_decision(f, fam, d)
    if d.kind == "certificate":
        assert len(d.certificate.j_set) == t


def test_cooperative_extra_set_forces_witness():
    rng = random.Random(2)
    done = 0
    while done < 100:
        f, fam, nv = perturbed_badge_family(rng, 2, 1)
        fam.append(frozenset(path_edges((nv, nv + 1))))
        if check_union_condition(f, fam, 2) is not None:
            continue
        done += 1
        d = cooperative_decide(f, fam, 1, allow_fallback=False)
        assert d.kind == "witness" and is_rainbow_aap(d.witness, f, fam)
