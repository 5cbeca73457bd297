"""Instance files, Latin squares and text diagrams of strips.

An instance file is ``{"vertices": [labels], "colors": [[[a, b], ...], ...]}``
with string labels; ``"matching"`` (a list of label pairs) is optional and
used by the augmenting-path commands.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass

from .badge import Origamistrip
from .graph_core import edge, relabel, validate_matching


@dataclass(frozen=True)
class Instance:
    labels: tuple[str, ...]
    colors: tuple  # tuple[frozenset[Edge], ...]
    matching: frozenset | None = None

    @property
    def ids(self) -> dict[str, int]:
        return relabel(self.labels)

    def to_json(self) -> dict:
        name = self.labels
        out = {"vertices": list(name),
               "colors": [[[name[u], name[v]] for u, v in sorted(c)] for c in self.colors]}
        if self.matching is not None:
            out["matching"] = [[name[u], name[v]] for u, v in sorted(self.matching)]
        return out


def _edges(pairs, ids: dict, where: str) -> frozenset:
    out = set()
    for pair in pairs:
        if len(pair) != 2:
            raise ValueError(f"{where}: edge {pair!r} is not a pair")
        a, b = pair
        if a not in ids or b not in ids:
            raise ValueError(f"{where}: unknown vertex in {pair!r}")
        e = edge(ids[a], ids[b])
        if e in out:
            raise ValueError(f"{where}: repeated edge {pair!r} (multi-edges are not supported)")
        out.add(e)
    return frozenset(out)


def parse_instance(data: dict) -> Instance:
    if not isinstance(data, dict) or "vertices" not in data or "colors" not in data:
        raise ValueError("instance needs 'vertices' and 'colors'")
    labels = tuple(data["vertices"])
    if not all(isinstance(x, str) for x in labels):
        raise ValueError("vertex labels must be strings")
    ids = relabel(labels)
    colors = tuple(_edges(c, ids, f"colour {i}") for i, c in enumerate(data["colors"]))
    matching = None
    if data.get("matching") is not None:
        matching = _edges(data["matching"], ids, "matching")
        if not validate_matching(matching):
            raise ValueError("'matching' is not a matching")
    return Instance(labels, colors, matching)


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, one trailing newline)."""
    return json.dumps(obj, sort_keys=True) + "\n"


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(json.load(fh))


def from_family(colors: Sequence[frozenset], labels: Sequence[str] | None = None,
                matching: frozenset | None = None) -> Instance:
    used = {v for c in colors for e in c for v in e} | {v for e in matching or () for v in e}
    top = max(used, default=-1)
    if labels is None:
        labels = [str(i) for i in range(top + 1)]
    if len(labels) <= top:
        raise ValueError("not enough labels for the vertices used")
    return Instance(tuple(labels), tuple(frozenset(c) for c in colors),
                    None if matching is None else frozenset(matching))


def parse_latin(text: str) -> list[list[str]]:
    """Rows separated by ``/``; each row a string of one-character symbols."""
    rows = [list(r.strip()) for r in text.split("/") if r.strip()]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("a Latin square needs n rows of n symbols")
    symbols = sorted(set(rows[0]))
    if len(symbols) != n:
        raise ValueError("first row must use n distinct symbols")
    for r in rows:
        if sorted(r) != symbols:
            raise ValueError("every row must be a permutation of the symbols")
    for j in range(n):
        if sorted(r[j] for r in rows) != symbols:
            raise ValueError("every column must be a permutation of the symbols")
    return rows


def cyclic_latin(n: int) -> list[list[str]]:
    if not 1 <= n <= 35:
        raise ValueError("order must be between 1 and 35")
    digits = "123456789abcdefghijklmnopqrstuvwxyz"
    return [[digits[(i + j) % n] for j in range(n)] for i in range(n)]


def latin_instance(rows: list[list[str]]) -> Instance:
    """Symbol s becomes the perfect matching {r_i c_j : L[i][j] = s} of K_{n,n}."""
    n = len(rows)
    symbols = sorted(set(rows[0]))
    labels = [f"r{i + 1}" for i in range(n)] + [f"c{j + 1}" for j in range(n)]
    colors = []
    for s in symbols:
        colors.append(frozenset(edge(i, n + j) for i in range(n) for j in range(n) if rows[i][j] == s))
    return Instance(tuple(labels), tuple(colors))


def strip_diagram(strip: Origamistrip, labels: Sequence[str] | None = None) -> list[str]:
    """Two lines per strip: ``--`` marks side edges, ``==`` skeleton edges."""
    name = (lambda v: str(v)) if labels is None else (lambda v: labels[v])
    out = [f"strip {name(strip.x)} .. {name(strip.y)} (m={strip.m})"]
    for side in "AB":
        p = strip.path(side)
        parts = [name(p[0])]
        for i in range(1, len(p)):
            parts.append("==" if i % 2 == 0 else "--")
            parts.append(name(p[i]))
        out.append(f"  {side}: " + " ".join(parts))
    return out
