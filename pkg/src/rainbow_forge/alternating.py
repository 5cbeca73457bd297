"""Alternating and augmenting paths relative to a reference matching."""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .graph_core import Edge, covered, edge, symmetric_difference_components


def path_edges(vertices: Sequence[int]) -> list[Edge]:
    return [edge(u, v) for u, v in itertools.pairwise(vertices)]


def is_alternating(vertices: Sequence[int], matching: frozenset) -> bool:
    """Simple path whose edges alternate in and out of ``matching``."""
    if len(vertices) < 2 or len(set(vertices)) != len(vertices):
        return False
    flags = [e in matching for e in path_edges(vertices)]
    return all(a != b for a, b in itertools.pairwise(flags))


def is_aap(vertices: Sequence[int], matching: frozenset) -> bool:
    """Augmenting alternating path: odd, starts and ends off the matching."""
    if not is_alternating(vertices, matching):
        return False
    used = covered(matching)
    return (len(vertices) % 2 == 0
            and vertices[0] not in used and vertices[-1] not in used
            and path_edges(vertices)[0] not in matching)


def is_alternating_odd_cycle(vertices: Sequence[int], matching: frozenset) -> bool:
    """Odd cycle alternating except for two adjacent non-matching edges."""
    k = len(vertices)
    if k < 3 or k % 2 == 0 or len(set(vertices)) != k:
        return False
    flags = [edge(vertices[i], vertices[(i + 1) % k]) in matching for i in range(k)]
    return sum(flags) == (k - 1) // 2 and sum(
        1 for i in range(k) if not flags[i] and not flags[(i + 1) % k]) == 1


@dataclass(frozen=True)
class AlternatingPath:
    vertices: tuple[int, ...]
    f_edges: frozenset

    @property
    def edges(self) -> list[Edge]:
        return path_edges(self.vertices)

    @property
    def non_f_edges(self) -> list[Edge]:
        return [e for e in self.edges if e not in self.f_edges]

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class Aap(AlternatingPath):
    @classmethod
    def from_vertices(cls, vertices: Sequence[int], matching: Iterable[Edge]) -> Aap:
        matching = frozenset(matching)
        vertices = tuple(vertices)
        if not is_aap(vertices, matching):
            raise ValueError(f"{vertices} is not an augmenting alternating path")
        if vertices[-1] < vertices[0]:
            vertices = vertices[::-1]
        return cls(vertices, frozenset(e for e in path_edges(vertices) if e in matching))


def max_matching(edges: Iterable[Edge]) -> frozenset:
    """Maximum-cardinality matching by branch and bound.

    Intended for the small graphs this package handles (a few dozen
    vertices).  Degree-one vertices are matched greedily, which is always
    safe; otherwise the lowest-degree vertex is branched on.
    """
    adj: dict[int, set[int]] = defaultdict(set)
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    adj = {v: set(n) for v, n in adj.items()}

    best: list = [_greedy(adj)]

    def search(active: dict[int, set[int]], chosen: list[Edge]) -> None:
        active = {v: set(n) for v, n in active.items()}
        chosen = list(chosen)
        while True:
            for v in [v for v, n in active.items() if not n]:
                del active[v]
            leaf = next((v for v in sorted(active) if len(active[v]) == 1), None)
            if leaf is None:
                break
            (u,) = active[leaf]
            chosen.append(edge(leaf, u))
            _drop(active, leaf)
            _drop(active, u)
        if len(chosen) + len(active) // 2 <= len(best[0]):
            return
        if not active:
            best[0] = frozenset(chosen)
            return
        v = min(sorted(active), key=lambda x: len(active[x]))
        for u in sorted(active[v]):
            nxt = {x: set(n) for x, n in active.items()}
            _drop(nxt, v)
            _drop(nxt, u)
            search(nxt, chosen + [edge(v, u)])
        nxt = {x: set(n) for x, n in active.items()}
        _drop(nxt, v)
        search(nxt, chosen)

    search(adj, [])
    return best[0]


def _drop(active: dict[int, set[int]], v: int) -> None:
    for u in active.pop(v, ()):
        if u in active:
            active[u].discard(v)


def _greedy(adj: dict[int, set[int]]) -> frozenset:
    used: set[int] = set()
    out = []
    for v in sorted(adj, key=lambda x: (len(adj[x]), x)):
        if v in used:
            continue
        for u in sorted(adj[v], key=lambda x: (len(adj[x]), x)):
            if u not in used:
                used |= {u, v}
                out.append(edge(u, v))
                break
    return frozenset(out)


def find_f_aap(matching: Iterable[Edge], edges: Iterable[Edge]) -> Aap | None:
    """An F-augmenting path inside ``edges ∪ F``, or ``None`` if there is none.

    Among the surplus components of ``M △ F`` for a maximum matching ``M``,
    the one with the smallest vertex sequence is returned.
    """
    f = frozenset(matching)
    pool = frozenset(edges) | f
    m = max_matching(pool)
    if len(m) <= len(f):
        return None
    comps = [c for c in symmetric_difference_components(f, m)
             if c.kind == "path" and c.surplus == 1]
    comp = min(comps, key=lambda c: c.vertices)
    return Aap.from_vertices(comp.vertices, f)


def augment(matching: Iterable[Edge], path: AlternatingPath) -> frozenset:
    """Return ``F △ path``; the path must be a valid F-AAP."""
    f = frozenset(matching)
    if not is_aap(path.vertices, f):
        raise ValueError("not an augmenting alternating path for this matching")
    return f.symmetric_difference(path_edges(path.vertices))


@dataclass(frozen=True)
class RainbowAap(AlternatingPath):
    """An F-AAP together with a colour for each of its non-F edges."""

    colors: tuple = ()  # ((edge, color), ...) in path order

    def selection(self) -> list[tuple[int, Edge]]:
        return [(c, e) for e, c in self.colors]

    def color_of(self, e: Edge) -> int:
        return dict(self.colors)[e]


def make_rainbow_aap(vertices: Sequence[int], matching: Iterable[Edge],
                     colors: dict) -> RainbowAap:
    """Assemble a coloured path; ``colors`` maps each non-F edge to its colour."""
    f = frozenset(matching)
    vertices = tuple(vertices)
    if vertices[-1] < vertices[0]:
        vertices = vertices[::-1]
    steps = path_edges(vertices)
    fe = frozenset(e for e in steps if e in f)
    return RainbowAap(vertices, fe, tuple((e, colors[e]) for e in steps if e not in f))


def is_rainbow_aap(path: RainbowAap, matching: Iterable[Edge], fam) -> bool:
    """Check a coloured witness against the matching and the colour family.

    ``fam`` may be a sequence (colours are positions) or a dict keyed by colour.
    """
    f = frozenset(matching)
    if not is_aap(path.vertices, f):
        return False
    non_f = [e for e in path_edges(path.vertices) if e not in f]
    if sorted(non_f) != sorted(e for e, _ in path.colors):
        return False
    used = [c for _, c in path.colors]
    if len(set(used)) != len(used):
        return False
    if not isinstance(fam, dict):
        fam = dict(enumerate(fam))
    return all(c in fam and e in fam[c] for e, c in path.colors)
