"""Bounded search for families violating a rainbow-matching statement.

Statements are written ``(m,n)->k`` or ``(m,q,n)->k`` with each entry a
linear expression in ``n`` and ``t`` (``"(3n-3+t,t+1,n)->n"``).  The
three-entry form asks for a rainbow matching of size k among m edge sets
whose every q-union contains a matching of size n.
"""

from __future__ import annotations

import random
import re
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

import networkx as nx
from networkx.algorithms.isomorphism import categorical_node_match

from .engine import BudgetExceeded, default_budget
from .graph_core import edge
from .solver import rainbow_matching_oracle, union_condition_violation

EXHAUSTIVE_VERTEX_CAP = 10
_TERM = re.compile(r"([+-]?)(\d*)([nt]?)")


def eval_linear(expr: str, n: int, t: int) -> int:
    """Value of an expression such as ``3n-3+t``."""
    text = expr.replace(" ", "")
    if not text or not re.fullmatch(r"([+-]?\d*[nt]?)+", text):
        raise ValueError(f"cannot read expression {expr!r}")
    total, pos = 0, 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        sign, digits, var = m.groups()
        if not digits and not var:
            raise ValueError(f"cannot read expression {expr!r}")
        coef = int(digits) if digits else 1
        value = coef * {"n": n, "t": t, "": 1}[var]
        total += -value if sign == "-" else value
        pos = m.end()
    return total


@dataclass(frozen=True)
class Statement:
    text: str
    colors: int
    union: int  # q: how many sets must jointly contain a size-`size` matching
    size: int
    target: int


def parse_statement(text: str, n: int, t: int = 0) -> Statement:
    m = re.fullmatch(r"\s*\(([^)]*)\)\s*->\s*(.+)", text)
    if not m:
        raise ValueError(f"statement {text!r} is not of the form (m,n)->k")
    parts = [p.strip() for p in m.group(1).split(",")]
    if len(parts) == 2:
        mm, size, q = parts[0], parts[1], "1"
    elif len(parts) == 3:
        mm, q, size = parts
    else:
        raise ValueError("a statement has two or three entries")
    st = Statement(text.replace(" ", ""), eval_linear(mm, n, t), eval_linear(q, n, t),
                   eval_linear(size, n, t), eval_linear(m.group(2), n, t))
    if st.colors < 1 or st.union < 1 or st.size < 1 or st.target < 1:
        raise ValueError("statement entries must be positive for these parameters")
    return st


@dataclass(frozen=True)
class ExplorerJob:
    statement: str
    n: int
    t: int = 0
    bipartite: bool = False
    vertices: int | None = None
    exhaustive: bool = False
    samples: int = 1000
    seed: int = 0
    budget: int | None = None
    workers: int = 1

    def host_vertices(self) -> int:
        v = self.vertices if self.vertices is not None else 2 * self.n
        if self.bipartite and v % 2:
            v += 1
        return v


def host_edges(v: int, bipartite: bool) -> list:
    if bipartite:
        h = v // 2
        return [edge(i, h + j) for i in range(h) for j in range(h)]
    return [edge(i, j) for i, j in combinations(range(v), 2)]


def matchings_of_size(edges: Sequence, size: int) -> list[frozenset]:
    out = []

    def grow(start: int, chosen: list, used: set):
        if len(chosen) == size:
            out.append(frozenset(chosen))
            return
        for i in range(start, len(edges)):
            a, b = edges[i]
            if a in used or b in used:
                continue
            grow(i + 1, chosen + [edges[i]], used | {a, b})

    grow(0, [], set())
    return sorted(out, key=sorted)


def _iso_graph(fam: Sequence[frozenset]) -> nx.Graph:
    g = nx.Graph()
    for c, es in enumerate(fam):
        g.add_node(("c", c), kind="color")
        for u, v in es:
            node = ("e", c, u, v)
            g.add_node(node, kind="edge")
            for x in (u, v):
                g.add_node(("v", x), kind="vertex")
                g.add_edge(node, ("v", x))
            g.add_edge(node, ("c", c))
    return g


def _signature(fam: Sequence[frozenset]) -> tuple:
    degree: dict = {}
    for c, es in enumerate(fam):
        for u, v in es:
            for x in (u, v):
                degree[x] = degree.get(x, 0) + 1
    return (tuple(sorted(len(c) for c in fam)), tuple(sorted(degree.values())))


class IsoDedup:
    """Keeps one family per isomorphism class (vertices and colours both relabelled)."""

    def __init__(self):
        self.buckets: dict = {}

    def is_new(self, fam: Sequence[frozenset]) -> bool:
        key = _signature(fam)
        g = _iso_graph(fam)
        match = categorical_node_match("kind", None)
        for other in self.buckets.get(key, []):
            if nx.is_isomorphic(g, other, node_match=match):
                return False
        self.buckets.setdefault(key, []).append(g)
        return True


def enumerate_families(job: ExplorerJob, st: Statement) -> Iterator[tuple]:
    v = job.host_vertices()
    edges = host_edges(v, job.bipartite)
    if job.exhaustive:
        if v > EXHAUSTIVE_VERTEX_CAP:
            raise ValueError(f"exhaustive mode is limited to {EXHAUSTIVE_VERTEX_CAP} vertices")
        options = matchings_of_size(edges, st.size)
        dedup = IsoDedup()
        if st.union == 1:
            # every matching of a given size is equivalent under relabelling
            first = options[0]
            stream = ((first,) + rest
                      for rest in combinations_with_replacement(options, st.colors - 1))
        else:
            stream = combinations_with_replacement([frozenset()] + options, st.colors)
        for fam in stream:
            if dedup.is_new(fam):
                yield tuple(fam)
        return
    rng = random.Random(job.seed)
    h = v // 2
    for _ in range(job.samples):
        fam = []
        for _ in range(st.colors):
            if st.union > 1 and rng.random() < 0.2:
                fam.append(frozenset())
            elif job.bipartite:
                left, right = rng.sample(range(h), st.size), rng.sample(range(h, v), st.size)
                fam.append(frozenset(edge(a, b) for a, b in zip(left, right)))
            else:
                vs = rng.sample(range(v), 2 * st.size)
                fam.append(frozenset(edge(vs[2 * i], vs[2 * i + 1]) for i in range(st.size)))
        yield tuple(fam)


def evaluate(args) -> dict:
    """Decide one family; pure so it can run in a worker process."""
    fam, st, budget = args
    out = {"colors": [[[str(u), str(v)] for u, v in sorted(c)] for c in fam]}
    if st.union > 1 and union_condition_violation(fam, st.union, st.size) is not None:
        out["status"] = "skipped"
        return out
    try:
        w = rainbow_matching_oracle(fam, st.target, budget)
    except BudgetExceeded:
        out["status"] = "inconclusive"
        return out
    if w is None:
        # confirm with an unbounded pass before reporting
        w = rainbow_matching_oracle(fam, st.target, budget=10**15)
    if w is not None:
        out["status"] = "rainbow"
        try:
            out["tight"] = rainbow_matching_oracle(fam[:-1], st.target, budget) is None
        except BudgetExceeded:
            out["tight"] = False
        return out
    out["status"] = "counterexample-candidate"
    return out


def run(job: ExplorerJob) -> Iterator[dict]:
    """Yield one record per examined family, then a summary record."""
    st = parse_statement(job.statement, job.n, job.t)
    budget = default_budget() if job.budget is None else job.budget
    stream = ((fam, st, budget) for fam in enumerate_families(job, st))
    counts = {"instances": 0, "rainbow": 0, "counterexample-candidate": 0, "inconclusive": 0,
              "skipped": 0, "tight": 0}
    if job.workers > 1:
        with ProcessPoolExecutor(max_workers=job.workers) as pool:
            results = pool.map(evaluate, stream, chunksize=16)
            yield from _tally(results, counts)
    else:
        yield from _tally(map(evaluate, stream), counts)
    yield {"summary": {"statement": st.text, "n": job.n, "t": job.t, "colors": st.colors,
                       "size": st.size, "target": st.target, "bipartite": job.bipartite,
                       "vertices": job.host_vertices(),
                       "mode": "exhaustive" if job.exhaustive else "random",
                       "seed": job.seed, **counts}}


def _tally(results, counts: dict) -> Iterator[dict]:
    for i, rec in enumerate(results):
        counts["instances"] += 1
        counts[rec["status"]] += 1
        counts["tight"] += int(rec.get("tight", False))
        yield {"index": i, **rec}
