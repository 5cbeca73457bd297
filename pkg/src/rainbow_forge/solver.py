"""Rainbow matchings of size n from families of matchings or edge sets.

``solve_cooperative`` follows the two inductions: a rainbow matching ``F``
of size ``n-1`` comes from the smaller instance, the unused colours are
handed to ``cooperative_decide``, and a rainbow F-AAP is flipped into ``F``.
In the ``3n-3+t`` variant a badge certificate is turned into a matching by
the single-strip and several-strip arguments.  Colour assignments for the
final matching are computed as a system of distinct representatives, which
the arguments guarantee to exist.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .alternating import AlternatingPath, RainbowAap, max_matching, path_edges
from .badge import BadgeCertificate, extend_badge_rainbow_aap
from .engine import (
    BudgetExceeded,
    EngineError,
    PreconditionError,
    cooperative_decide,
    default_budget,
)
from .graph_core import Edge, edge, validate_matching

VARIANTS = ("3n-2+t", "3n-3+t")


@dataclass(frozen=True)
class RainbowMatchingWitness:
    matching: frozenset
    assignment: tuple  # ((color, edge), ...) sorted by edge

    @property
    def size(self) -> int:
        return len(self.matching)

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        name = (lambda v: v) if labels is None else (lambda v: labels[v])
        return {"kind": "witness",
                "matching": [[[name(u), name(v)], c] for c, (u, v) in self.assignment]}


@dataclass
class SolveReport:
    outcome: str = "inconclusive"  # witness | counterexample-candidate | inconclusive
    witness: RainbowMatchingWitness | None = None
    trace: list = field(default_factory=list)
    permutation: tuple = ()

    def log(self, phase: str, **info) -> None:
        self.trace.append({"phase": phase, **info})


def verify_witness(fam: Sequence[frozenset], w: RainbowMatchingWitness,
                   size: int | None = None) -> bool:
    """Valid matching, one distinct colour per edge, each edge in its colour."""
    edges = [e for _, e in w.assignment]
    colors = [c for c, _ in w.assignment]
    if sorted(edges) != sorted(w.matching) or len(set(edges)) != len(edges):
        return False
    if not validate_matching(w.matching) or len(set(colors)) != len(colors):
        return False
    if size is not None and len(w.matching) != size:
        return False
    return all(0 <= c < len(fam) and e in fam[c] for c, e in w.assignment)


def assign_colors(fam: Sequence[frozenset], matching: Iterable[Edge],
                  prefer: dict | None = None) -> RainbowMatchingWitness | None:
    """Distinct colours for the edges of ``matching``, or ``None`` if impossible.

    ``prefer`` maps edges to a first-choice colour; it is kept whenever it
    already forms a valid assignment.
    """
    edges = sorted(matching)
    if prefer is not None:
        chosen = [(prefer.get(e), e) for e in edges]
        w = RainbowMatchingWitness(frozenset(edges), tuple(chosen))
        if all(c is not None for c, _ in chosen) and verify_witness(fam, w):
            return w
    options = {e: [c for c in range(len(fam)) if e in fam[c]] for e in edges}
    owner: dict = {}

    def place(e: Edge, seen: set) -> bool:
        for c in options[e]:
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or place(owner[c], seen):
                owner[c] = e
                return True
        return False

    for e in edges:
        if not place(e, set()):
            return None
    by_edge = {e: c for c, e in owner.items()}
    return RainbowMatchingWitness(frozenset(edges), tuple((by_edge[e], e) for e in edges))


def rainbow_matching_oracle(fam: Sequence[frozenset], size: int,
                            budget: int | None = None) -> RainbowMatchingWitness | None:
    """Exhaustive search for a rainbow matching with ``size`` edges.

    Colours are scanned in order, each either skipped or given an edge
    disjoint from the edges chosen so far.  Raises ``BudgetExceeded``.
    """
    budget = default_budget() if budget is None else budget
    fam = [frozenset(c) for c in fam]
    ncol = len(fam)
    nodes = [0]
    picked: list = []

    def search(i: int, used: frozenset) -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"matching oracle exceeded {budget} nodes")
        if len(picked) == size:
            return True
        if ncol - i < size - len(picked):
            return False
        for e in sorted(fam[i]):
            if e[0] in used or e[1] in used:
                continue
            picked.append((i, e))
            if search(i + 1, used | set(e)):
                return True
            picked.pop()
        return search(i + 1, used)

    if size == 0:
        return RainbowMatchingWitness(frozenset(), ())
    if not search(0, frozenset()):
        return None
    ordered = sorted(picked, key=lambda ce: ce[1])
    return RainbowMatchingWitness(frozenset(e for _, e in picked), tuple(ordered))


def union_condition_violation(fam: Sequence[frozenset], q: int, n: int,
                              exhaustive_limit: int = 100_000, samples: int = 1000,
                              seed: int = 0) -> tuple[int, ...] | None:
    """A q-subset of colours whose union has no matching of size n, if one is found."""
    cols = range(len(fam))
    if q > len(fam):
        return None
    if comb(len(fam), q) <= exhaustive_limit:
        subsets: Iterable = combinations(cols, q)
    else:
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(cols, q))) for _ in range(samples))
    for sub in subsets:
        if len(max_matching(frozenset().union(*(fam[c] for c in sub)))) < n:
            return tuple(sub)
    return None


def _flip(f: frozenset, path: AlternatingPath) -> frozenset:
    return f.symmetric_difference(path_edges(path.vertices))


def _greedy(fam: Sequence[frozenset], n: int) -> RainbowMatchingWitness | None:
    used: set = set()
    chosen = []
    for c, es in enumerate(fam):
        e = next((e for e in sorted(es) if e[0] not in used and e[1] not in used), None)
        if e is not None:
            chosen.append((c, e))
            used |= set(e)
            if len(chosen) == n:
                return RainbowMatchingWitness(frozenset(e for _, e in chosen),
                                              tuple(sorted(chosen, key=lambda x: x[1])))
    return None


def _finish(fam, matching, prefer, report: SolveReport, how: str) -> RainbowMatchingWitness:
    w = assign_colors(fam, matching, prefer)
    if w is None:
        raise EngineError(f"{how}: matching {sorted(matching)} admits no rainbow colouring")
    report.log("finish", case=how, matching=sorted(w.matching))
    return w


def _from_aap(fam, f: frozenset, f_colors: dict, q: RainbowAap, report, how):
    """Flip a rainbow F-AAP into F and colour the result."""
    m = _flip(f, q)
    prefer = {e: c for e, c in f_colors.items() if e in m}
    prefer.update(dict(q.colors))
    return _finish(fam, m, prefer, report, how)


def _base(fam, t: int, n: int, report: SolveReport, variant: str) -> RainbowMatchingWitness:
    """Rainbow matching of size n for 3n-2+t sets (the first that many are used)."""
    k = 3 * n - 2 + t
    if n == 1:
        for c in range(k):
            if fam[c]:
                e = min(fam[c])
                return RainbowMatchingWitness(frozenset([e]), ((c, e),))
        raise PreconditionError(range(min(k, t + 1)), "no edge in any of the sets")
    smaller = _base(fam, t, n - 1, report, variant)
    report.log("base", size=n - 1, matching=[[c, list(e)] for c, e in smaller.assignment])
    f = frozenset(smaller.matching)
    f_colors = {e: c for c, e in smaller.assignment}
    rest = {c: frozenset(fam[c]) for c in range(k) if c not in f_colors.values()}
    d = cooperative_decide(f, rest, t, check=False)
    if d.kind != "witness":
        raise EngineError("2|F|+t+1 sets produced no rainbow F-AAP")
    report.log("aap", size=n, path=list(d.witness.vertices), fallback=d.fallback)
    return _from_aap(fam, f, f_colors, d.witness, report, "augment")


def solve_cooperative(fam: Sequence[Iterable[Edge]], t: int, n: int, variant: str = "3n-2+t",
                      check: bool = True, report: SolveReport | None = None
                      ) -> RainbowMatchingWitness:
    """Rainbow matching of size n when every t+1 of the sets have a size-n matching in their union.

    ``variant`` is ``"3n-2+t"`` (needs ``3n-2+t`` sets, any ``n >= 1``) or
    ``"3n-3+t"`` (needs ``3n-3+t`` sets and ``n >= 3``).
    """
    fam = tuple(frozenset(edge(*e) for e in es) for es in fam)
    report = SolveReport() if report is None else report
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if t < 0 or n < 1:
        raise ValueError("need t >= 0 and n >= 1")
    need = 3 * n - 2 + t if variant == "3n-2+t" else 3 * n - 3 + t
    if variant == "3n-3+t" and n < 3:
        raise ValueError("the 3n-3+t bound needs n >= 3")
    if len(fam) != need:
        raise ValueError(f"variant {variant} with n={n}, t={t} needs {need} sets, got {len(fam)}")
    if check:
        bad = union_condition_violation(fam, t + 1, n)
        if bad is not None:
            raise PreconditionError(bad, f"sets {list(bad)} have no matching of size {n} in their union")
    if variant == "3n-2+t":
        w = _base(fam, t, n, report, variant)
    else:
        w = _tight(fam, t, n, report)
    if not verify_witness(fam, w, n):
        raise EngineError("solver produced an invalid witness")
    report.outcome, report.witness = "witness", w
    return w


def _tight(fam, t: int, n: int, report: SolveReport) -> RainbowMatchingWitness:
    smaller = _base(fam, t, n - 1, report, "3n-2+t")
    f = frozenset(smaller.matching)
    f_colors = {e: c for c, e in smaller.assignment}
    used = sorted(f_colors.values())
    rest = [c for c in range(len(fam)) if c not in f_colors.values()]
    report.permutation = tuple(used + rest)
    report.log("base", size=n - 1, matching=[[c, list(e)] for c, e in smaller.assignment])
    d = cooperative_decide(f, {c: fam[c] for c in rest}, t, check=False)
    if d.kind == "witness":
        report.log("aap", size=n, path=list(d.witness.vertices), fallback=d.fallback)
        return _from_aap(fam, f, f_colors, d.witness, report, "augment")
    cert: BadgeCertificate = d.certificate
    jset = sorted(cert.j_set)
    strips = cert.badge.strips
    report.log("badge", strips=len(strips), j_set=jset)
    if len(strips) == 1:
        return _single_strip(fam, f, f_colors, cert, jset, report)
    return _several_strips(fam, f, f_colors, cert, jset, report)


def _single_strip(fam, f, f_colors, cert: BadgeCertificate, jset, report):
    os_ = cert.badge.strips[0]
    x, y = os_.x, os_.y
    e1 = edge(os_.u(1), os_.v(1))
    c1 = f_colors[e1]
    d1 = frozenset().union(fam[c1], *(fam[j] for j in jset))
    spare = sorted(d1 - f)
    strip_vertices = set(os_.vertices)
    a_edges = sorted(os_.a_side)

    def with_a_edges(e: Edge, how: str):
        keep = [g for g in a_edges if not set(g) & set(e)][: len(a_edges) - 1]
        return _finish(fam, frozenset(keep) | {e}, None, report, how)

    def through_x(z: int, e: Edge, how: str):
        q = os_.q_path_from(z, x)
        verts = tuple(q) + (next(v for v in e if v != z),)
        m = f.symmetric_difference(path_edges(verts))
        return _finish(fam, m, None, report, how)

    for e in spare:
        if not set(e) & strip_vertices:
            return with_a_edges(e, "single strip, edge away from the strip")
    for e in spare:
        inside = [v for v in e if v in strip_vertices]
        if len(inside) == 1:
            z = inside[0]
            if z in (x, y):
                return with_a_edges(e, "single strip, edge from a strip end")
            return through_x(z, e, "single strip, edge from an interior vertex")
    at_y = [e for e in spare if y in e]
    if not at_y:
        raise PreconditionError([c1] + jset, "union has no matching of size n")
    e = at_y[0]
    z = e[0] if e[1] == y else e[1]
    if z != x:
        return through_x(z, e, "single strip, edge zy")
    e_a = edge(os_.v(1), os_.u(2))
    e_b = edge(os_.u(1), os_.v(2))
    rest = [edge(os_.u(i), os_.v(i)) for i in range(3, os_.m + 1)]
    return _finish(fam, frozenset([e, e_a, e_b] + rest), None, report, "single strip, edge xy")


def _several_strips(fam, f, f_colors, cert: BadgeCertificate, jset, report):
    c1 = min(f_colors.values())
    e1 = next(e for e, c in f_colors.items() if c == c1)
    d1 = frozenset().union(fam[c1], *(fam[j] for j in jset))
    spare = sorted(d1 - f)
    if not spare:
        raise PreconditionError([c1] + jset, "union has no matching of size n")
    e = spare[0]
    plain = BadgeCertificate(cert.badge, cert.color_map)
    q = extend_badge_rainbow_aap(plain, None, e, extra_color=c1)
    how = "several strips" + ("" if e1 in q.f_edges else ", e1 recoloured")
    return _from_aap(fam, f, f_colors, q, report, how)


def solve_main(fam: Sequence[Iterable[Edge]], n: int, fast_path: bool = False,
               report: SolveReport | None = None) -> RainbowMatchingWitness:
    """Rainbow matching of size n from 3n-3 matchings of size n (n >= 3)."""
    fam = tuple(frozenset(edge(*e) for e in es) for es in fam)
    report = SolveReport() if report is None else report
    if n < 3:
        raise ValueError("3n-3 matchings of size n need not have a rainbow matching when n <= 2")
    if len(fam) != 3 * n - 3:
        raise ValueError(f"need {3 * n - 3} colours, got {len(fam)}")
    for c, es in enumerate(fam):
        if not validate_matching(es) or len(es) < n:
            raise ValueError(f"colour {c} is not a matching of size {n}")
    if fast_path:
        w = _greedy(fam, n)
        if w is not None:
            report.log("greedy", size=n)
            report.outcome, report.witness = "witness", w
            return w
    return solve_cooperative(fam, 0, n, "3n-3+t", check=False, report=report)
