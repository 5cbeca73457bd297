"""Vertices, edges, matchings and rainbow selections.

Vertices are dense non-negative integers.  An edge is the canonical pair
``(min, max)`` so that two edges compare equal exactly when they join the
same vertices.  Edge sets are ``frozenset`` objects and a colour family is a
tuple of edge sets indexed from 0.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

Edge = tuple[int, int]
EdgeSet = frozenset
ColorFamily = tuple  # tuple[frozenset[Edge], ...]


def edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def edge_set(edges: Iterable[Sequence[int]]) -> frozenset:
    return frozenset(edge(u, v) for u, v in edges)


def family(colors: Iterable[Iterable[Sequence[int]]]) -> tuple:
    """Build a colour family from nested pairs, e.g. ``[[(0, 1), (2, 3)], []]``."""
    return tuple(edge_set(c) for c in colors)


def covered(edges: Iterable[Edge]) -> set[int]:
    """Vertices touched by ``edges``."""
    out: set[int] = set()
    for u, v in edges:
        out.add(u)
        out.add(v)
    return out


def validate_matching(edges: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for u, v in edges:
        if u in seen or v in seen:
            return False
        seen.add(u)
        seen.add(v)
    return True


def mate_map(matching: Iterable[Edge]) -> dict[int, int]:
    mate: dict[int, int] = {}
    for u, v in matching:
        mate[u] = v
        mate[v] = u
    return mate


def vertices_of(fam: Iterable[Iterable[Edge]]) -> set[int]:
    out: set[int] = set()
    for c in fam:
        out |= covered(c)
    return out


@dataclass(frozen=True)
class Component:
    """A connected component of the symmetric difference of two matchings.

    ``vertices`` lists the component in traversal order; for a cycle the
    first vertex is not repeated at the end.
    """

    kind: str  # "path" or "cycle"
    vertices: tuple[int, ...]
    first_count: int
    second_count: int

    @property
    def surplus(self) -> int:
        return self.second_count - self.first_count


def symmetric_difference_components(m1: Iterable[Edge], m2: Iterable[Edge]) -> list[Component]:
    """Split ``m1 △ m2`` into alternating paths and even cycles.

    Components come out in a deterministic order (by smallest vertex) and
    each path is read from its smaller endpoint.
    """
    m1 = frozenset(m1)
    m2 = frozenset(m2)
    diff = m1 ^ m2
    adj: dict[int, list[int]] = defaultdict(list)
    for u, v in diff:
        adj[u].append(v)
        adj[v].append(u)

    seen: set[int] = set()
    comps: list[Component] = []
    # paths first start at degree-one vertices
    starts = sorted(v for v in adj if len(adj[v]) == 1) + sorted(adj)
    for s in starts:
        if s in seen:
            continue
        order = [s]
        seen.add(s)
        prev, cur = None, s
        while True:
            nxt = [x for x in adj[cur] if x != prev and x not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seen.add(cur)
            order.append(cur)
        closed = len(adj[s]) == 2
        kind = "cycle" if closed else "path"
        if kind == "path" and order[-1] < order[0]:
            order.reverse()
        steps = list(itertools.pairwise(order))
        if closed:
            steps.append((order[-1], order[0]))
        c1 = sum(1 for u, v in steps if edge(u, v) in m1)
        comps.append(Component(kind, tuple(order), c1, len(steps) - c1))
    comps.sort(key=lambda c: c.vertices)
    return comps


def is_rainbow_selection(fam: Sequence[frozenset], selection: Iterable[tuple[int, Edge]]) -> bool:
    """True iff colour indices are distinct and each edge lies in its colour."""
    used: set[int] = set()
    for color, e in selection:
        if color in used or not 0 <= color < len(fam):
            return False
        if edge(*e) not in fam[color]:
            return False
        used.add(color)
    return True


def relabel(labels: Sequence[str]) -> dict[str, int]:
    """Map human labels to dense ids, rejecting duplicates."""
    ids: dict[str, int] = {}
    for i, name in enumerate(labels):
        if name in ids:
            raise ValueError(f"duplicate vertex label {name!r}")
        ids[name] = i
    return ids
