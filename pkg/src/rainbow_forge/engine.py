"""Rainbow augmenting paths versus badge certificates.

Given a matching ``F`` and a family of F-augmenting paths (or, in the
cooperative setting, edge sets whose (t+1)-unions carry F-augmenting paths),
the decision procedures here either build a rainbow F-AAP or certify that the
family is a (generalized) badge.  They follow the inductive argument
directly: every step that would "derive a contradiction" instead builds the
rainbow path that the contradiction exhibits.

Colours keep their original indices through every contraction, so a witness
found deep in the recursion is lifted back level by level without search.

``rainbow_aap_oracle`` is an independent exhaustive search used to check the
engine; the engine itself only falls back to search when one of its
structural steps meets a configuration the argument leaves implicit, and it
says so in the returned ``Decision``.
"""

from __future__ import annotations

import os
import random
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations, pairwise, product
from math import comb
from typing import NamedTuple

from .alternating import (
    RainbowAap,
    find_f_aap,
    is_aap,
    is_rainbow_aap,
    make_rainbow_aap,
    path_edges,
)
from .badge import (
    Badge,
    BadgeCertificate,
    Origamistrip,
    close_path,
    extend_badge_rainbow_aap,
    verify_badge,
    with_edits,
)
from .graph_core import Edge, covered, edge, mate_map

DEFAULT_BUDGET = 10_000_000


def default_budget() -> int:
    return int(os.environ.get("RAINBOW_FORGE_BUDGET", DEFAULT_BUDGET))


class BudgetExceeded(RuntimeError):
    """The exhaustive search ran out of nodes before reaching a verdict."""


class EngineError(RuntimeError):
    """An internal invariant failed (a lifted path did not check out)."""


class PreconditionError(ValueError):
    """The (t+1)-union hypothesis fails; ``indices`` is a violating colour set."""

    def __init__(self, indices: Iterable[int], message: str = ""):
        self.indices = tuple(sorted(indices))
        super().__init__(message or f"colours {list(self.indices)} have no F-AAP in their union")


class _Gap(Exception):
    """A structural step met a case the argument only covers implicitly."""


class Triangle(NamedTuple):
    v: int
    a: int
    b: int
    color_va: int
    color_vb: int


@dataclass
class Decision:
    """Either a rainbow F-AAP witness or a badge certificate.

    ``kind`` is ``"none"`` only for families smaller than the theorem covers
    when no witness exists.
    """

    witness: RainbowAap | None = None
    certificate: BadgeCertificate | None = None
    fallback: bool = False
    notes: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        if self.witness is not None:
            return "witness"
        if self.certificate is not None:
            return "certificate"
        return "none"

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        name = (lambda v: v) if labels is None else (lambda v: labels[v])
        out: dict = {"kind": self.kind}
        if self.witness is not None:
            out["path"] = [name(v) for v in self.witness.vertices]
            out["colors"] = [[[name(u), name(v)], c] for (u, v), c in self.witness.colors]
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json(labels)
        if self.fallback:
            out["fallback"] = True
        return out


# ---------------------------------------------------------------------------
# exhaustive oracle

def _assign(edge_colors: list, assignment: dict, e: Edge, seen: set) -> bool:
    # Kuhn step: give edge e a colour, re-routing earlier edges if needed
    for c in edge_colors[e]:
        if c in seen:
            continue
        seen.add(c)
        holder = assignment.get(c)
        if holder is None or _assign(edge_colors, assignment, holder, seen):
            assignment[c] = e
            return True
    return False


def rainbow_aap_oracle(matching: Iterable[Edge], fam: Sequence[frozenset] | dict,
                       budget: int | None = None) -> RainbowAap | None:
    """Exhaustive search for a rainbow F-AAP.

    Simple F-alternating paths are grown from every uncovered vertex; a
    colour assignment for the non-F edges is maintained as a bipartite
    matching, so colours are never branched on.  Raises ``BudgetExceeded``
    when more than ``budget`` search nodes are needed.
    """
    f = frozenset(matching)
    fam = fam if isinstance(fam, dict) else dict(enumerate(fam))
    budget = default_budget() if budget is None else budget
    mate = mate_map(f)
    colors_of: dict = defaultdict(list)
    for c in sorted(fam):
        for e in fam[c]:
            if e not in f:
                colors_of[e].append(c)
    adj: dict = defaultdict(list)
    for u, v in colors_of:
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj.values():
        nbrs.sort()
    nodes = [0]

    def grow(path: list, on_path: set, assignment: dict) -> RainbowAap | None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"oracle exceeded {budget} nodes")
        cur = path[-1]
        for nb in adj[cur]:
            if nb in on_path:
                continue
            e = edge(cur, nb)
            trial = dict(assignment)
            if not _assign(colors_of, trial, e, set()):
                continue
            if nb not in mate:
                verts = path + [nb]
                return make_rainbow_aap(verts, f, {e2: c for c, e2 in trial.items()})
            nxt = mate[nb]
            if nxt in on_path:
                continue
            found = grow(path + [nb, nxt], on_path | {nb, nxt}, trial)
            if found is not None:
                return found
        return None

    for s in sorted(adj):
        if s in mate:
            continue
        found = grow([s], {s}, {})
        if found is not None:
            return found
    return None


# ---------------------------------------------------------------------------
# helpers shared by the structural steps

def path_from_edges(edges: Iterable[Edge]) -> tuple[int, ...]:
    """Order an edge set that forms a simple path; read from the smaller end."""
    edges = list(edges)
    if not edges:
        raise ValueError("empty edge set is not a path")
    adj: dict = defaultdict(list)
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    ends = sorted(v for v in adj if len(adj[v]) == 1)
    if len(ends) != 2 or any(len(n) > 2 for n in adj.values()):
        raise ValueError("edge set is not a simple path")
    seq = [ends[0]]
    prev = None
    while True:
        nxt = [x for x in adj[seq[-1]] if x != prev]
        if not nxt:
            break
        prev = seq[-1]
        seq.append(nxt[0])
    if len(seq) != len(adj):
        raise ValueError("edge set is not connected")
    return tuple(seq)


def _all_vertices(matching: frozenset, items: Iterable) -> int:
    top = max(covered(matching), default=-1)
    for it in items:
        for x in it:
            top = max(top, *x) if isinstance(x, tuple) else max(top, x)
    return top


def _walk_cycle(cycle: Sequence[int], start: int, matching: frozenset) -> list[int]:
    """Even path inside an odd alternating cycle from ``start`` to ``cycle[0]``."""
    k = len(cycle)
    i = cycle.index(start)
    if i == 0:
        return [start]
    step = 1 if edge(cycle[i], cycle[(i + 1) % k]) in matching else -1
    out = [start]
    while i != 0:
        i = (i + step) % k
        out.append(cycle[i])
    return out


@dataclass(frozen=True)
class ContractionFrame:
    """One contraction of an odd alternating cycle to a single vertex.

    ``rewrites`` holds ``(color, original, rewritten, attach)``: for a path
    family the original and rewritten paths, for edge sets the original and
    rewritten edge.  ``attach`` is the cycle vertex the rewritten object used,
    which is all a lift needs to map it back.
    """

    cycle: tuple[int, ...]
    merged: int
    rewrites: tuple = ()

    def attach(self, color: int, item=None) -> int:
        for c, orig, new, at in self.rewrites:
            if c == color and (item is None or new == item):
                return at
        raise KeyError((color, item))

    def child_paths(self, paths: dict) -> dict:
        out = dict(paths)
        for c, _, new, _ in self.rewrites:
            out[c] = new
        return out

    def oriented(self, paths: dict) -> dict:
        out = dict(paths)
        for c, orig, _, _ in self.rewrites:
            out[c] = orig
        return out


def _contract(paths: dict, cycle: Sequence[int], new: int) -> ContractionFrame:
    """Contract ``cycle`` to ``new``; each touching path becomes its prefix.

    A path meeting the cycle is read from an endpoint off the cycle up to
    its first cycle vertex, which is replaced by ``new``.  The frame stores
    the orientation used for each rewritten path.
    """
    group = set(cycle)
    rewrites = []
    for c, p in sorted(paths.items()):
        if not group & set(p):
            continue
        seq = tuple(p[::-1] if p[0] in group else p)
        i = next(j for j, x in enumerate(seq) if x in group)
        rewrites.append((c, seq, seq[:i] + (new,), seq[i]))
    return ContractionFrame(tuple(cycle), new, tuple(rewrites))


@dataclass
class _Ctx:
    depth_limit: int
    notes: list = field(default_factory=list)
    frames: list = field(default_factory=list)

    def deeper(self, depth: int) -> int:
        if depth + 1 > self.depth_limit:
            raise EngineError("recursion deeper than the matching allows")
        return depth + 1


def _edges_of(paths: dict) -> dict:
    return {c: frozenset(path_edges(p)) for c, p in paths.items()}


def _check(w: RainbowAap, matching: frozenset, fam: dict) -> RainbowAap:
    if not is_rainbow_aap(w, matching, fam):
        raise EngineError(f"lifted path {w.vertices} is not a rainbow F-AAP")
    return w


def _single(e: Edge, color: int, matching: frozenset) -> RainbowAap:
    return make_rainbow_aap(e, matching, {e: color})


# ---------------------------------------------------------------------------
# rainbow AAP or badge, for families of F-AAPs

def _decide(f: frozenset, paths: dict, ctx: _Ctx, depth: int):
    k = len(f)
    colors = sorted(paths)
    if len(colors) > 2 * k:
        keep, spare = colors[: 2 * k], colors[2 * k]
        res = _decide(f, {c: paths[c] for c in keep}, ctx, depth)
        if isinstance(res, RainbowAap):
            return res
        p = paths[spare]
        e = next(x for x in path_edges(p) if x not in f)
        return _check(extend_badge_rainbow_aap(res, None, e, extra_color=spare), f,
                      _edges_of(paths))
    if len(colors) < 2 * k:
        raise _Gap("family smaller than 2|F|")
    if k == 0:
        return BadgeCertificate(Badge(()))

    depth = ctx.deeper(depth)
    tri = _triangle(f, paths, ctx, depth)
    if isinstance(tri, RainbowAap):
        return tri
    return _from_triangle(f, paths, tri, ctx, depth)


def _triangle(f: frozenset, paths: dict, ctx: _Ctx, depth: int):
    """A rainbow triangle v-a-b with ab in F, or a rainbow F-AAP."""
    mate = mate_map(f)
    c0 = min(paths)
    q = paths[c0]
    if len(q) == 2:
        return _single(edge(*q), c0, f)
    (_, v, a) = min((edge(q[0], q[1]), q[0], q[1]), (edge(q[-1], q[-2]), q[-1], q[-2]))
    b = mate[a]
    vb = edge(v, b)
    for c in sorted(paths):
        if c != c0 and vb in path_edges(paths[c]):
            return Triangle(v, a, b, c0, c)

    # no path uses vb: delete a, recurse with one colour more than enough
    ab = edge(a, b)
    f1 = f - {ab}
    sub = {}
    for c, p in paths.items():
        if c == c0:
            continue
        if ab in path_edges(p):
            i = p.index(a)
            sub[c] = p[i + 1:] if p[i + 1] == b else p[:i][::-1]
        else:
            sub[c] = p
    res = _decide(f1, sub, ctx, depth)
    if not isinstance(res, RainbowAap):
        raise _Gap("2k-1 paths after deleting a vertex produced a certificate")
    fam = _edges_of(paths)
    r = res.vertices
    if b not in r:
        return _check(res, f, fam)
    if r[0] == b:
        r = r[::-1]
    colors = dict(res.colors)
    colors[edge(a, v)] = c0
    if v not in r:
        return _check(make_rainbow_aap(r + (a, v), f, colors), f, fam)
    # r runs from v to b: with b-a-v it closes an odd rainbow cycle of length >= 5
    return _long_cycle(f, paths, list(r) + [a], colors, ctx, depth)


def _long_cycle(f: frozenset, paths: dict, cycle: list, colors: dict, ctx: _Ctx, depth: int):
    """Rainbow F-AAP from an odd rainbow alternating cycle longer than 3.

    ``cycle[0]`` is the uncovered vertex; ``colors`` colours its non-F edges.
    """
    c_edges = {edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}
    used = {colors[e] for e in c_edges if e not in f}
    f2 = f - c_edges
    rest = {c: p for c, p in paths.items() if c not in used}
    new = _all_vertices(f, paths.values()) + 1
    frame = _contract(rest, cycle, new)
    ctx.frames.append(frame)
    child = frame.child_paths(rest)
    res = _decide(f2, child, ctx, depth)
    if not isinstance(res, RainbowAap):
        raise _Gap("contracted long cycle produced a certificate")
    fam = _edges_of(paths)
    r = res.vertices
    out_colors = dict(res.colors)
    if new in r:
        if r[0] == new:
            r = r[::-1]
        y = r[-2]
        col = out_colors.pop(edge(y, new))
        s = frame.attach(col)
        out_colors[edge(y, s)] = col
        tail = _walk_cycle(cycle, s, f)
        for u, x in pairwise(tail):
            if edge(u, x) not in f:
                out_colors[edge(u, x)] = colors[edge(u, x)]
        r = tuple(r[:-1]) + tuple(tail)
    return _check(make_rainbow_aap(r, f, out_colors), f, fam)


def _lift_triangle(res: RainbowAap, f: frozenset, paths: dict, frame: ContractionFrame,
                   via: dict) -> RainbowAap:
    """Lift a path found after contracting the triangle v-a-b to ``new``.

    ``via[a]`` colours the edge a-v and ``via[b]`` the edge b-v.
    """
    v, a, b = frame.cycle
    new = frame.merged
    fam = _edges_of(paths)
    r = res.vertices
    colors = dict(res.colors)
    if new not in r:
        return _check(res, f, fam)
    if r[0] == new:
        r = r[::-1]
    y = r[-2]
    col = colors.pop(edge(y, new))
    s = frame.attach(col)
    colors[edge(y, s)] = col
    if s == v:
        tail = (v,)
    elif s == a:
        tail = (a, b, v)
        colors[edge(b, v)] = via[b]
    else:
        tail = (b, a, v)
        colors[edge(a, v)] = via[a]
    return _check(make_rainbow_aap(tuple(r[:-1]) + tail, f, colors), f, fam)


def _from_triangle(f: frozenset, paths: dict, tri: Triangle, ctx: _Ctx, depth: int):
    v, a, b, ca, cb = tri
    ab = edge(a, b)
    f1 = f - {ab}
    new = _all_vertices(f, paths.values()) + 1
    frame = _contract(paths, (v, a, b), new)
    ctx.frames.append(frame)
    child, oriented = frame.child_paths(paths), frame.oriented(paths)
    fam = _edges_of(paths)

    sub = {c: p for c, p in child.items() if c not in (ca, cb)}
    res = _decide(f1, sub, ctx, depth)
    if isinstance(res, RainbowAap):
        return _lift_triangle(res, f, paths, frame, {a: ca, b: cb})
    b1: BadgeCertificate = res

    at_w = [i for i, s in enumerate(b1.badge.strips) if new in s.endpoints]
    if not at_w:
        return _case_one(f, paths, child, b1, tri, new, fam)

    strip = b1.badge.strips[at_w[0]]
    if strip.x == new:
        strip = strip.reversed()
    z = strip.x
    seq = {side: strip.path(side)[:-1] for side in "AB"}
    pools = b1.pools()
    groups = {side: list(pools[(at_w[0], side)]) for side in "AB"}
    hook = {}
    for side in "AB":
        for c in groups[side]:
            o = oriented[c]
            if o[: len(seq[side])] != seq[side]:
                raise _Gap("strip path does not lift to a prefix")
            hook[c] = o[len(seq[side])]

    if all(hook[c] == v for side in "AB" for c in groups[side]):
        os_ = Origamistrip(z, v, strip.interior)
        os_groups = groups
        ctx.notes.append("case IIa")
    else:
        side, c_i = next((sd, c) for sd in "AB" for c in groups[sd] if hook[c] in (a, b))
        un = _Uncontract(f, paths, f1, frame, hook, tri, seq, groups, b1, ctx, depth)
        out = un.run(side, c_i, hook[c_i])
        if isinstance(out, RainbowAap):
            return out
        os_, os_groups = out
        ctx.notes.append("case IIb")
    return _peel_strip(f, paths, os_, os_groups, ctx, depth)


def _case_one(f, paths, child, b1: BadgeCertificate, tri: Triangle, new: int, fam: dict):
    v, a, b, ca, cb = tri
    for c in (ca, cb):
        img = child[c]
        if len(img) > 2:
            e = edge(img[0], img[1])
            w = extend_badge_rainbow_aap(b1, None, e, extra_color=c)
            if new in w.vertices:
                raise _Gap("extension through the contracted vertex")
            return _check(w, f, fam)
    z, t = child[ca][0], child[cb][0]
    if not (paths[ca] in ((v, a, b, z), (z, b, a, v)) and paths[cb] in ((v, b, a, t), (t, a, b, v))):
        raise _Gap("short triangle paths of unexpected shape")
    if z != t:
        return _check(make_rainbow_aap((z, b, a, t), f, {edge(z, b): ca, edge(a, t): cb}), f, fam)
    strips = b1.badge.strips + (Origamistrip(v, z, (a, b)),)
    idx = len(strips) - 1
    cert = BadgeCertificate(Badge(strips), b1.color_map + ((ca, idx, "A"), (cb, idx, "B")))
    if not verify_badge(f, fam, cert):
        raise _Gap("case Ib badge does not verify")
    return cert


def _peel_strip(f, paths, os_: Origamistrip, groups: dict, ctx: _Ctx, depth: int):
    """Remove a strip identified in the family and recurse on what is left."""
    fam = _edges_of(paths)
    strip_colors = set(groups["A"]) | set(groups["B"])
    for side in "AB":
        for c in groups[side]:
            if fam[c] != os_.path_edges(side):
                raise _Gap("identified strip does not match its paths")
    f_rest = f - os_.skeleton
    rest = {c: p for c, p in paths.items() if c not in strip_colors}
    pools = {(0, side): sorted(groups[side]) for side in "AB"}
    inside = set(os_.interior)
    # A remaining path may come back into the strip after passing through
    # the contracted triangle.  Cut it at the first interior vertex u seen
    # from one of its ends and end it at a fresh uncovered stand-in for u:
    # that is an AAP of the smaller matching, and no badge can have a strip
    # end met by a single path, so the recursion must return a witness.  The
    # witness can still fail to route back through the strip (two stand-ins
    # for one vertex), so every choice of cut end is tried in turn.
    crossing = sorted(c for c, p in rest.items() if not is_aap(p, f_rest))
    if len(crossing) > 6:
        raise _Gap("too many remaining paths re-enter the strip")
    top = _all_vertices(f, paths.values())
    for flips in product((False, True), repeat=len(crossing)):
        stand_in: dict = {}
        trial = dict(rest)
        for n_, (c, flip) in enumerate(zip(crossing, flips)):
            p = trial[c][::-1] if flip else trial[c]
            i = next(j for j, x in enumerate(p) if x in inside)
            stand_in[top + 1 + n_] = p[i]
            trial[c] = tuple(p[:i]) + (top + 1 + n_,)
            if not is_aap(trial[c], f_rest):
                raise _Gap("remaining path enters the strip from a strip end")
        try:
            res = _decide(f_rest, trial, ctx, depth)
        except _Gap:
            if not crossing:
                raise
            continue
        if isinstance(res, RainbowAap):
            back = stand_in.get
            core = tuple(back(x, x) for x in res.vertices)
            if len(set(core)) != len(core):
                continue
            colors = {edge(back(u, u), back(x, x)): c for (u, x), c in res.colors}
            w = close_path(core, colors, f, [os_], pools)
            if w is not None:
                return _check(w, f, fam)
            continue
        if not stand_in:
            break
    else:
        raise _Gap("could not route the remainder witness through the strip")
    strips = res.badge.strips + (os_,)
    idx = len(strips) - 1
    cmap = res.color_map + tuple((c, idx, side) for side in "AB" for c in groups[side])
    cert = BadgeCertificate(Badge(strips), cmap)
    if not verify_badge(f, fam, cert):
        raise _Gap("assembled badge does not verify")
    return cert


class _Uncontract:
    """Reopen the strip ending at the contracted vertex when some path uses ab."""

    def __init__(self, f, paths, f1, frame, hook, tri, seq, groups, b1, ctx, depth):
        self.f, self.paths, self.f1, self.frame = f, paths, f1, frame
        self.child, self.oriented = frame.child_paths(paths), frame.oriented(paths)
        self.hook, self.new = hook, frame.merged
        self.v, self.a, self.b = tri.v, tri.a, tri.b
        self.T = {tri.a: tri.color_va, tri.b: tri.color_vb}
        self.seq, self.groups, self.b1 = seq, groups, b1
        self.ctx, self.depth = ctx, depth
        self.fam = _edges_of(paths)

    def other(self, r):
        return self.b if r == self.a else self.a

    def _same(self, p, q) -> bool:
        return tuple(p) == tuple(q) or tuple(p) == tuple(q)[::-1]

    def step12(self, side: str, c: int, r: int) -> RainbowAap | None:
        """Path c on ``side`` turns into r after the strip: it must be seq+r+s+v = T_s."""
        v, s, f = self.v, self.other(r), self.f
        o = self.oriented[c]
        n0 = len(self.seq[side])
        expect = tuple(self.seq[side]) + (r, s, v)
        if o[n0] != r or len(o) < n0 + 2 or o[n0 + 1] != s:
            raise _Gap("strip path leaves through an unexpected vertex")
        if o != expect:
            y = o[n0 + 2]
            core = (v, r, s, y)
            colors = {edge(v, r): self.T[r], edge(s, y): c}
            if y not in covered(f):
                return _check(make_rainbow_aap(core, f, colors), f, self.fam)
            pools = {g: [x for x in cs if x != c] for g, cs in self.b1.pools().items()}
            w = close_path(core, colors, f, self.b1.badge.strips, pools, bad_ends={self.new})
            if w is None:
                raise _Gap("could not continue v-r-s-y through a strip")
            return _check(w, f, self.fam)
        if self._same(self.paths[self.T[s]], expect):
            return None
        sub = {x: p for x, p in self.child.items() if x not in (self.T[r], c)}
        res = _decide(self.f1, sub, self.ctx, self.depth)
        if isinstance(res, RainbowAap):
            return _lift_triangle(res, f, self.paths, self.frame, {r: self.T[r], s: c})
        raise _Gap("two badges differing in one path")

    def step3(self, side: str, c_j: int, r: int) -> RainbowAap | None:
        """With T_s = seq(side)+r+s+v, every path on the other side is seq+s+r+v."""
        v, s = self.v, self.other(r)
        od = "B" if side == "A" else "A"
        last, last_o = self.seq[side][-1], self.seq[od][-1]
        for c_l in self.groups[od]:
            x = self.hook[c_l]
            if x == v:
                cycle = [v, s, r, last, last_o]
                colors = {edge(v, s): self.T[s], edge(r, last): c_j, edge(last_o, v): c_l}
                return _long_cycle(self.f, self.paths, cycle, colors, self.ctx, self.depth)
            if x == r:
                w = self.step12(od, c_l, r)
                if w is None:
                    raise _Gap("T_s equal to paths on both sides")
                return w
            w = self.step12(od, c_l, s)
            if w is not None:
                return w
        return None

    def run(self, side: str, c_i: int, r: int):
        s = self.other(r)
        od = "B" if side == "A" else "A"
        for step in (lambda: self.step12(side, c_i, r),
                     lambda: self.step3(side, c_i, r),
                     lambda: self.step3(od, self.groups[od][0], s)):
            w = step()
            if w is not None:
                return w
        os_ = Origamistrip(self.seq["A"][0], self.v, self._interior(side, r, s))
        groups = {side: self.groups[side] + [self.T[s]], od: self.groups[od] + [self.T[r]]}
        return os_, groups

    def _interior(self, side: str, r: int, s: int) -> tuple:
        base = tuple(self.seq["A"][1:])
        return base + ((r, s) if side == "A" else (s, r))


def _as_paths(matching: frozenset, fam: Sequence[frozenset] | dict) -> dict:
    fam = fam if isinstance(fam, dict) else dict(enumerate(fam))
    paths = {}
    for c, es in fam.items():
        p = path_from_edges(es)
        if not is_aap(p, matching):
            raise ValueError(f"colour {c} is not an F-augmenting path")
        paths[c] = p
    return paths


def find_rainbow_triangle(matching: Iterable[Edge], fam: Sequence[frozenset] | dict):
    """A rainbow triangle ``v-a-b`` (``ab`` in F, ``v`` uncovered) or a rainbow F-AAP.

    Needs exactly ``2|F|`` colours, each an F-AAP.
    """
    f = frozenset(matching)
    paths = _as_paths(f, fam)
    if len(paths) != 2 * len(f) or not f:
        raise ValueError("need exactly 2|F| > 0 augmenting paths")
    ctx = _Ctx(depth_limit=2 * (len(f) + 1))
    return _triangle(f, paths, ctx, 0)


def rainbow_aap_or_badge(matching: Iterable[Edge], fam: Sequence[frozenset] | dict,
                         allow_fallback: bool = True, budget: int | None = None) -> Decision:
    """Rainbow F-AAP, or a badge certificate when the family has exactly 2|F| paths.

    Families larger than 2|F| always yield a witness.  Smaller families are
    outside the structural argument; they are settled by search and may come
    back with ``kind == "none"``.
    """
    f = frozenset(matching)
    paths = _as_paths(f, fam)
    ctx = _Ctx(depth_limit=2 * (len(f) + 1))
    try:
        res = _decide(f, paths, ctx, 0)
    except _Gap as gap:
        if not allow_fallback:
            raise EngineError(f"structural step failed: {gap}") from gap
        return _fallback(f, _edges_of(paths), str(gap), budget)
    if isinstance(res, RainbowAap):
        return Decision(witness=res, notes=ctx.notes)
    return Decision(certificate=res, notes=ctx.notes)


def _fallback(f: frozenset, fam: dict, reason: str, budget: int | None) -> Decision:
    w = rainbow_aap_oracle(f, fam, budget)
    return Decision(witness=w, fallback=True, notes=[reason])


# ---------------------------------------------------------------------------
# cooperative version: edge sets whose (t+1)-unions carry F-AAPs

def _contract_sets(sets: dict, cycle: Sequence[int], new: int):
    """Contract ``cycle`` in each edge set.

    Edges inside the cycle disappear and edges leaving it are redirected to
    ``new``; when several cycle vertices give the same redirected edge the
    one earliest on the cycle is remembered.
    """
    order = {x: i for i, x in enumerate(cycle)}
    out, rewrites = {}, {}
    for c, es in sorted(sets.items()):
        kept = set()
        for u, x in es:
            inside = (u in order) + (x in order)
            if inside == 2:
                continue
            if inside == 0:
                kept.add((u, x))
                continue
            g, o = (u, x) if u in order else (x, u)
            ne = edge(o, new)
            kept.add(ne)
            prev = rewrites.get((c, ne))
            if prev is None or order[g] < order[prev[3]]:
                rewrites[(c, ne)] = (c, (u, x), ne, g)
        out[c] = frozenset(kept)
    return out, ContractionFrame(tuple(cycle), new, tuple(rewrites[k] for k in sorted(rewrites)))


def _lift_sets(res: RainbowAap, f: frozenset, sets: dict, frame: ContractionFrame,
               tail_for) -> RainbowAap:
    """Undo a set contraction; ``tail_for(s, colors)`` returns the path from s to the exit."""
    new = frame.merged
    r = res.vertices
    colors = dict(res.colors)
    if new in r:
        if r[0] == new:
            r = r[::-1]
        y = r[-2]
        col = colors.pop(edge(y, new))
        s = frame.attach(col, edge(y, new))
        colors[edge(y, s)] = col
        r = tuple(r[:-1]) + tuple(tail_for(s, colors))
    return _check(make_rainbow_aap(r, f, colors), f, sets)


def _coop(f: frozenset, sets: dict, t: int, ctx: _Ctx, depth: int):
    k = len(f)
    cols = sorted(sets)
    m = len(cols)

    if k == 0:
        for c in cols:
            if sets[c]:
                return _single(min(sets[c]), c, f)
        if m <= t:
            return BadgeCertificate(Badge(()), (), frozenset(cols))
        raise PreconditionError(cols[: t + 1])

    if t == 0:
        if m > 2 * k:
            keep, spare = cols[: 2 * k], cols[2 * k]
            res = _coop(f, {c: sets[c] for c in keep}, 0, ctx, depth)
            if isinstance(res, RainbowAap):
                return res
            e = min(x for x in sets[spare] if x not in f) if sets[spare] - f else None
            if e is None:
                raise PreconditionError([spare])
            return _check(extend_badge_rainbow_aap(res, None, e, extra_color=spare), f, sets)
        if m < 2 * k:
            raise _Gap("fewer than 2|F| sets")
        paths = {}
        for c in cols:
            p = find_f_aap(f, sets[c])
            if p is None:
                raise PreconditionError([c])
            paths[c] = p.vertices
        res = _decide(f, paths, ctx, depth)
        if isinstance(res, RainbowAap):
            return _check(res, f, sets)
        for c in cols:
            extra = sorted(sets[c] - f - frozenset(path_edges(paths[c])))
            if extra:
                w = extend_badge_rainbow_aap(res, c, extra[0])
                return _check(w, f, sets)
        return with_edits(res, sets)

    if m > 2 * k + t:
        keep = cols[: 2 * k + t]
        spare = cols[2 * k + t]
        res = _coop(f, {c: sets[c] for c in keep}, t, ctx, depth)
        if isinstance(res, RainbowAap):
            return res
        i = min(res.j_set)
        keep2 = [c for c in keep if c != i] + [spare]
        res2 = _coop(f, {c: sets[c] for c in keep2}, t, ctx, depth)
        if isinstance(res2, RainbowAap):
            return res2
        raise PreconditionError(sorted(set(res.j_set) | set(res2.j_set))[: t + 1])
    if m < 2 * k + t:
        raise _Gap("fewer than 2|F|+t sets")

    depth = ctx.deeper(depth)
    jset = [c for c in cols if sets[c] <= f]
    if len(jset) > t:
        raise PreconditionError(jset[: t + 1])
    if len(jset) == t:
        res = _coop(f, {c: sets[c] for c in cols if c not in jset}, 0, ctx, depth)
        if isinstance(res, RainbowAap):
            return res
        return BadgeCertificate(res.badge, res.color_map, frozenset(jset), res.edits)
    if jset:
        i = jset[0]
        res = _coop(f, {c: sets[c] for c in cols if c != i}, t - 1, ctx, depth)
        if isinstance(res, RainbowAap):
            return res
        raise _Gap("certificate with too small a J-set")

    union = frozenset().union(*sets.values())
    p = find_f_aap(f, union)
    if p is None:
        raise PreconditionError(cols[: t + 1])
    if len(p) == 1:
        e = p.edges[0]
        return _single(e, min(c for c in cols if e in sets[c]), f)
    v, a = p.vertices[0], p.vertices[1]
    mate = mate_map(f)
    b = mate[a]
    va, vb = edge(v, a), edge(v, b)
    c1 = min(c for c in cols if va in sets[c])
    c2 = next((c for c in cols if c != c1 and vb in sets[c]), None)
    if c2 is not None:
        return _coop_contract(f, sets, t, (v, a, b), c1, c2, ctx, depth)
    return _coop_delete(f, sets, t, (v, a, b), c1, ctx, depth)


def _coop_contract(f, sets, t, tri, c1, c2, ctx, depth):
    v, a, b = tri
    f1 = f - {edge(a, b)}
    new = _all_vertices(f, sets.values()) + 1
    child, frame = _contract_sets(sets, (v, a, b), new)
    ctx.frames.append(frame)

    def lift(res, via):
        def tail(s, colors):
            if s == v:
                return (v,)
            o = b if s == a else a
            colors[edge(o, v)] = via[o]
            return (s, o, v)
        return _lift_sets(res, f, sets, frame, tail)

    fam1 = {c: child[c] for c in child if c not in (c1, c2)}
    res = _coop(f1, fam1, t, ctx, depth)
    if isinstance(res, RainbowAap):
        return lift(res, {a: c1, b: c2})
    j1 = sorted(res.j_set)
    i = next((c for c in j1 if edge(v, a) in sets[c]), None)
    if i is not None:
        via, back = {a: i, b: c2}, c1
    else:
        i = next((c for c in j1 if edge(v, b) in sets[c]), None)
        if i is None:
            raise _Gap("J-set member outside F without a triangle edge")
        via, back = {a: c1, b: i}, c2
    fam2 = {c: s for c, s in fam1.items() if c != i}
    fam2[back] = child[back]
    res2 = _coop(f1, fam2, t, ctx, depth)
    if isinstance(res2, RainbowAap):
        return lift(res2, via)
    spill = sorted(child[back] - f1)
    if spill:
        badge_part = BadgeCertificate(res.badge, res.color_map)
        w = extend_badge_rainbow_aap(badge_part, None, spill[0], extra_color=back)
        return lift(w, via)
    idx = [back] + j1
    if find_f_aap(f, frozenset().union(*(sets[c] for c in idx))) is None:
        raise PreconditionError(idx)
    raise _Gap("second contraction certificate without a violated union")


def _coop_delete(f, sets, t, tri, c1, ctx, depth):
    v, a, b = tri
    f1 = f - {edge(a, b)}
    d = {c: frozenset(e for e in es if a not in e) for c, es in sets.items() if c != c1}
    res = _coop(f1, d, t, ctx, depth)
    if not isinstance(res, RainbowAap):
        raise _Gap("enlarged family produced a certificate")
    r = res.vertices
    if b not in r:
        return _check(res, f, sets)
    if r[0] == b:
        r = r[::-1]
    colors = dict(res.colors)
    colors[edge(a, v)] = c1
    if v not in r:
        return _check(make_rainbow_aap(r + (a, v), f, colors), f, sets)
    return _coop_long_cycle(f, sets, t, list(r) + [a], colors, ctx, depth)


def _coop_long_cycle(f, sets, t, cycle, colors, ctx, depth):
    c_edges = {edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}
    used = {colors[e] for e in c_edges if e not in f}
    f2 = f - c_edges
    rest = {c: s for c, s in sets.items() if c not in used}
    new = _all_vertices(f, sets.values()) + 1
    child, frame = _contract_sets(rest, cycle, new)
    ctx.frames.append(frame)
    res = _coop(f2, child, t, ctx, depth)
    if not isinstance(res, RainbowAap):
        raise _Gap("contracted long cycle produced a certificate")

    def tail(s, out_colors):
        walk = _walk_cycle(cycle, s, f)
        for u, x in pairwise(walk):
            if edge(u, x) not in f:
                out_colors[edge(u, x)] = colors[edge(u, x)]
        return walk

    return _lift_sets(res, f, sets, frame, tail)


def check_union_condition(matching: Iterable[Edge], fam: Sequence[frozenset] | dict, q: int,
                          exhaustive_limit: int = 100_000, samples: int = 1000,
                          seed: int = 0) -> tuple[int, ...] | None:
    """First q-subset of colours whose union plus F has no F-AAP, else ``None``.

    All subsets are tried when there are at most ``exhaustive_limit`` of
    them; otherwise ``samples`` random subsets are drawn.
    """
    f = frozenset(matching)
    fam = fam if isinstance(fam, dict) else dict(enumerate(fam))
    cols = sorted(fam)
    if q > len(cols):
        return None
    if comb(len(cols), q) <= exhaustive_limit:
        subsets: Iterable = combinations(cols, q)
    else:
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(cols, q))) for _ in range(samples))
    for sub in subsets:
        union = frozenset().union(*(fam[c] for c in sub))
        if find_f_aap(f, union) is None:
            return tuple(sub)
    return None


def cooperative_decide(matching: Iterable[Edge], fam: Sequence[frozenset] | dict, t: int,
                       check: bool = True, allow_fallback: bool = True,
                       budget: int | None = None) -> Decision:
    """Rainbow F-AAP for sets whose (t+1)-unions contain F-AAPs, or a certificate.

    With ``2|F|+t`` sets and no witness, the certificate lists a J-set of
    ``t`` colours inside F and maps the rest onto a generalized badge.
    Raises ``PreconditionError`` when the union hypothesis fails.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    f = frozenset(matching)
    sets = fam if isinstance(fam, dict) else dict(enumerate(fam))
    sets = {c: frozenset(s) for c, s in sets.items()}
    if check:
        bad = check_union_condition(f, sets, t + 1)
        if bad is not None:
            raise PreconditionError(bad)
    ctx = _Ctx(depth_limit=2 * (len(f) + t + 1))
    try:
        res = _coop(f, sets, t, ctx, 0)
    except PreconditionError as exc:
        union = frozenset().union(*(sets[c] for c in exc.indices)) if exc.indices else frozenset()
        if find_f_aap(f, union) is None:
            raise
        if not allow_fallback:
            raise EngineError("reported a precondition failure that does not hold") from exc
        return _fallback(f, sets, "spurious precondition report", budget)
    except _Gap as gap:
        if not allow_fallback:
            raise EngineError(f"structural step failed: {gap}") from gap
        return _fallback(f, sets, str(gap), budget)
    if isinstance(res, RainbowAap):
        return Decision(witness=res, notes=ctx.notes)
    return Decision(certificate=res, notes=ctx.notes)
