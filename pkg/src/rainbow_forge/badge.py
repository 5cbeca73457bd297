"""Origamistrips, badges and badge certificates.

An m-origamistrip on endpoints ``x, y`` and interior ``u1 v1 ... um vm`` is
the union of three matchings: the skeleton ``{ui vi}``, the A side
``{x u1, v1 u2, ..., vm y}`` and the B side ``{x v1, u1 v2, ..., um y}``.
Both ``A ∪ skeleton`` and ``B ∪ skeleton`` are skeleton-augmenting paths
from ``x`` to ``y``.  A badge glues strips along a weighted multigraph and
lists each strip's two paths ``weight`` times.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

from .alternating import RainbowAap, is_aap, make_rainbow_aap, path_edges
from .graph_core import Edge, covered, edge

SIDES = ("A", "B")


@dataclass(frozen=True)
class Origamistrip:
    x: int
    y: int
    interior: tuple[int, ...]  # u1, v1, u2, v2, ..., um, vm

    def __post_init__(self):
        if len(self.interior) < 2 or len(self.interior) % 2:
            raise ValueError("an origamistrip needs m >= 1 interior pairs")
        if len({self.x, self.y, *self.interior}) != len(self.interior) + 2:
            raise ValueError("origamistrip vertices must be distinct")

    @property
    def m(self) -> int:
        return len(self.interior) // 2

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.x, self.y

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.x, *self.interior, self.y)

    def u(self, i: int) -> int:
        return self.interior[2 * i - 2]

    def v(self, i: int) -> int:
        return self.interior[2 * i - 1]

    @property
    def skeleton(self) -> frozenset:
        return frozenset(edge(self.u(i), self.v(i)) for i in range(1, self.m + 1))

    def path(self, side: str) -> tuple[int, ...]:
        """Vertex sequence of P^A or P^B, read from ``x`` to ``y``."""
        seq = [self.x]
        for i in range(1, self.m + 1):
            pair = (self.u(i), self.v(i)) if side == "A" else (self.v(i), self.u(i))
            seq.extend(pair)
        seq.append(self.y)
        return tuple(seq)

    def side_edges(self, side: str) -> frozenset:
        return frozenset(path_edges(self.path(side))) - self.skeleton

    @property
    def a_side(self) -> frozenset:
        return self.side_edges("A")

    @property
    def b_side(self) -> frozenset:
        return self.side_edges("B")

    def path_edges(self, side: str) -> frozenset:
        return frozenset(path_edges(self.path(side)))

    def reversed(self) -> Origamistrip:
        """Same strip read from ``y``; the A and B edge sets are unchanged."""
        return Origamistrip(self.y, self.x, self.interior[::-1])

    def q_path(self, v: int, side: str) -> tuple[int, ...]:
        """The even skeleton-alternating subpath of P^side ending at ``v``.

        Returned from its strip endpoint to ``v``.
        """
        seq = self.path(side)
        if v not in self.interior:
            raise ValueError(f"{v} is not an interior vertex")
        i = seq.index(v)
        return seq[: i + 1] if i % 2 == 0 else seq[i:][::-1]

    def q_path_from(self, v: int, endpoint: int) -> tuple[int, ...]:
        for side in SIDES:
            q = self.q_path(v, side)
            if q[0] == endpoint:
                return q
        raise ValueError(f"{endpoint} is not an endpoint of this strip")


def make_origamistrip(m: int, labels: Sequence[int] | None = None) -> Origamistrip:
    """Build an m-strip; ``labels`` is ``[x, u1, v1, ..., um, vm, y]``."""
    if m < 1:
        raise ValueError("m must be positive")
    labels = list(range(2 * m + 2)) if labels is None else list(labels)
    if len(labels) != 2 * m + 2:
        raise ValueError(f"need {2 * m + 2} labels, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate labels")
    return Origamistrip(labels[0], labels[-1], tuple(labels[1:-1]))


@dataclass(frozen=True)
class Badge:
    strips: tuple[Origamistrip, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for s in self.strips:
            if seen & set(s.interior):
                raise ValueError("strip interiors must be disjoint")
            seen |= set(s.interior)
        for s in self.strips:
            if {s.x, s.y} & seen:
                raise ValueError("a strip endpoint lies inside another strip")

    @property
    def host_edges(self) -> list[tuple[int, int]]:
        return [(s.x, s.y) for s in self.strips]

    @property
    def weights(self) -> list[int]:
        return [s.m for s in self.strips]

    @property
    def weight(self) -> int:
        return sum(self.weights)

    @property
    def skeleton(self) -> frozenset:
        out: frozenset = frozenset()
        for s in self.strips:
            out |= s.skeleton
        return out

    @property
    def vertices(self) -> set[int]:
        return {v for s in self.strips for v in s.vertices}

    def strip_of(self, v: int) -> int | None:
        for i, s in enumerate(self.strips):
            if v in s.interior:
                return i
        return None

    def slots(self) -> list[tuple[int, str]]:
        """Path slots in listing order: each strip's A copies, then its B copies."""
        return [(i, side) for i, s in enumerate(self.strips) for side in SIDES for _ in range(s.m)]


def make_badge(host: Sequence[tuple[int, int]], weights: Sequence[int],
               first_label: int | None = None) -> Badge:
    """Badge over the multigraph ``host`` with fresh interior labels per strip."""
    if len(host) != len(weights):
        raise ValueError("one weight per host edge")
    if any(w < 1 for w in weights):
        raise ValueError("weights must be positive")
    if any(x == y for x, y in host):
        raise ValueError("host loops are not supported")
    nxt = first_label
    if nxt is None:
        nxt = max((v for e in host for v in e), default=-1) + 1
    strips = []
    for (x, y), w in zip(host, weights):
        strips.append(Origamistrip(x, y, tuple(range(nxt, nxt + 2 * w))))
        nxt += 2 * w
    return Badge(tuple(strips))


@dataclass(frozen=True)
class GeneralizedBadge:
    """A badge whose listed paths gain or lose skeleton edges.

    ``edits`` holds ``(slot, added, removed)`` triples against ``base.slots()``.
    """

    base: Badge
    edits: tuple = ()

    def __post_init__(self):
        skel = self.base.skeleton
        for _, added, removed in self.edits:
            if not (set(added) | set(removed)) <= skel:
                raise ValueError("edits may only touch skeleton edges")


def badge_paths(b: Badge | GeneralizedBadge) -> tuple:
    """The badge's path family as a colour family of edge sets."""
    base = b.base if isinstance(b, GeneralizedBadge) else b
    fam = [base.strips[i].path_edges(side) for i, side in base.slots()]
    if isinstance(b, GeneralizedBadge):
        for slot, added, removed in b.edits:
            fam[slot] = (fam[slot] | frozenset(added)) - frozenset(removed)
    return tuple(fam)


@dataclass(frozen=True)
class BadgeCertificate:
    """Claim that a colour family is a (generalized) badge.

    ``color_map`` is a tuple of ``(color, strip, side)``; ``j_set`` lists the
    colours lying entirely inside the matching; ``edits`` is a tuple of
    ``(color, added, removed)`` for generalized paths.
    """

    badge: Badge
    color_map: tuple = ()
    j_set: frozenset = frozenset()
    edits: tuple = ()

    @property
    def k(self) -> int:
        return self.badge.weight

    def pools(self) -> dict[tuple[int, str], list[int]]:
        out: dict[tuple[int, str], list[int]] = {}
        for color, strip, side in sorted(self.color_map):
            out.setdefault((strip, side), []).append(color)
        return out

    def slot_of(self, color: int) -> tuple[int, str]:
        for c, strip, side in self.color_map:
            if c == color:
                return strip, side
        raise KeyError(color)

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        name = (lambda v: v) if labels is None else (lambda v: labels[v])
        strips = self.badge.strips
        host_vertices = sorted({v for s in strips for v in s.endpoints})
        return {
            "host": {"vertices": [name(v) for v in host_vertices],
                     "edges": [[name(s.x), name(s.y)] for s in strips]},
            "weights": [s.m for s in strips],
            "strips": [{"x": name(s.x), "y": name(s.y), "interior": [name(v) for v in s.interior]}
                       for s in strips],
            "color_map": [[c, i, side] for c, i, side in sorted(self.color_map)],
            "j_set": sorted(self.j_set),
            "edits": [[c, sorted([name(u), name(v)] for u, v in added),
                       sorted([name(u), name(v)] for u, v in removed)]
                      for c, added, removed in sorted(self.edits)],
        }

    @classmethod
    def from_json(cls, data: dict, ids: dict | None = None) -> BadgeCertificate:
        vid = (lambda v: v) if ids is None else (lambda v: ids[v])
        strips = tuple(Origamistrip(vid(s["x"]), vid(s["y"]), tuple(vid(v) for v in s["interior"]))
                       for s in data["strips"])
        edits = tuple((c, frozenset(edge(vid(u), vid(v)) for u, v in added),
                       frozenset(edge(vid(u), vid(v)) for u, v in removed))
                      for c, added, removed in data.get("edits", []))
        return cls(Badge(strips), tuple((c, i, side) for c, i, side in data["color_map"]),
                   frozenset(data.get("j_set", [])), edits)


def identity_certificate(b: Badge | GeneralizedBadge) -> BadgeCertificate:
    base = b.base if isinstance(b, GeneralizedBadge) else b
    cmap = tuple((c, i, side) for c, (i, side) in enumerate(base.slots()))
    edits = ()
    if isinstance(b, GeneralizedBadge):
        edits = tuple((slot, frozenset(a), frozenset(r)) for slot, a, r in b.edits if a or r)
    return BadgeCertificate(base, cmap, frozenset(), edits)


class Verdict(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_badge(matching: Iterable[Edge], fam: Sequence[frozenset] | dict,
                 cert: BadgeCertificate) -> Verdict:
    """Check that ``cert`` describes ``fam`` as a (generalized) badge on ``matching``."""
    f = frozenset(matching)
    fam = fam if isinstance(fam, dict) else dict(enumerate(fam))
    try:
        badge = Badge(tuple(cert.badge.strips))
    except ValueError as exc:
        return Verdict(False, f"malformed badge: {exc}")
    if badge.skeleton != f:
        return Verdict(False, "badge skeleton differs from the matching")
    mapped = [c for c, _, _ in cert.color_map]
    if len(set(mapped)) != len(mapped) or set(mapped) & set(cert.j_set):
        return Verdict(False, "a colour is mapped twice")
    if set(mapped) | set(cert.j_set) != set(fam):
        return Verdict(False, "colour map does not cover the family exactly")
    counts = Counter((i, side) for _, i, side in cert.color_map)
    for i, s in enumerate(badge.strips):
        for side in SIDES:
            if counts[(i, side)] != s.m:
                return Verdict(False, f"strip {i} side {side} listed {counts[(i, side)]} times, "
                                      f"weight is {s.m}")
    if sum(counts.values()) != 2 * badge.weight:
        return Verdict(False, "colour map refers to unknown strips")
    for j in cert.j_set:
        if not fam[j] <= f:
            return Verdict(False, f"colour {j} is in the J-set but leaves the matching")
    recorded = {c: (frozenset(a), frozenset(r)) for c, a, r in cert.edits}
    for c, i, side in cert.color_map:
        strip = badge.strips[i]
        if fam[c] - f != strip.side_edges(side):
            return Verdict(False, f"colour {c} is not the {side} path of strip {i}")
        added = (fam[c] & f) - strip.skeleton
        removed = strip.skeleton - fam[c]
        want = recorded.get(c, (frozenset(), frozenset()))
        if (added, removed) != want:
            return Verdict(False, f"colour {c} skeleton edits not recorded correctly")
    return Verdict(True)


def with_edits(cert: BadgeCertificate, fam: Sequence[frozenset] | dict) -> BadgeCertificate:
    """Fill in the skeleton edits that ``fam`` makes against the plain badge."""
    fam = fam if isinstance(fam, dict) else dict(enumerate(fam))
    f = cert.badge.skeleton
    edits = []
    for c, i, _ in sorted(cert.color_map):
        strip = cert.badge.strips[i]
        added = (fam[c] & f) - strip.skeleton
        removed = strip.skeleton - fam[c]
        if added or removed:
            edits.append((c, added, removed))
    return BadgeCertificate(cert.badge, cert.color_map, cert.j_set, tuple(edits))


def sharpness_instance(n: int, allow_odd: bool = False) -> tuple:
    """2n-1 matchings of size n with no rainbow matching of size n (n even).

    Built on an (n-1)-strip labelled ``x=0, u1=1, v1=2, ..., y=2n-1``:
    n-1 copies of A, n-1 copies of B and the skeleton plus ``xy``.
    With ``allow_odd`` the same construction is returned for odd n, where it
    does have a rainbow matching.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n % 2 and not allow_odd:
        raise ValueError("the construction needs n even")
    os_ = make_origamistrip(n - 1)
    a, b = os_.a_side, os_.b_side
    return (a,) * (n - 1) + (b,) * (n - 1) + (os_.skeleton | {edge(os_.x, os_.y)},)


def close_path(core: Sequence[int], core_colors: dict, matching: frozenset,
               strips: Sequence[Origamistrip], pools: dict,
               bad_ends: Iterable[int] = ()) -> RainbowAap | None:
    """Extend a coloured alternating ``core`` through strips into a rainbow AAP.

    Each end of ``core`` that lies inside a strip is continued along one of
    that strip's Q-paths to a strip endpoint.  ``pools`` maps ``(strip, side)``
    to the colours still free for that side; ``bad_ends`` are vertices that
    may not become endpoints.  Side choices are tried in the order
    (A, A), (A, B), (B, A), (B, B).
    """
    core = tuple(core)
    bad = set(bad_ends)
    used = covered(matching)
    where = {v: i for i, s in enumerate(strips) for v in s.interior}

    def options(v: int) -> list:
        if v not in used:
            return [None]
        if v not in where:
            return []
        i = where[v]
        out = []
        for side in SIDES:
            q = strips[i].q_path(v, side)
            if q[0] not in bad:
                out.append((i, side, q))
        return out

    for first, last in product(options(core[0]), options(core[-1])):
        seq = list(core)
        if first is not None:
            seq = list(first[2][:-1]) + seq
        if last is not None:
            seq = seq + list(last[2][::-1][1:])
        if not is_aap(seq, matching):
            continue
        need: Counter = Counter()
        for piece in (first, last):
            if piece is None:
                continue
            i, side, q = piece
            need[(i, side)] += sum(1 for e in path_edges(q) if e not in matching)
        if any(need[g] > len(pools.get(g, ())) for g in need):
            continue
        free = {g: list(pools.get(g, ())) for g in need}
        colors = dict(core_colors)
        for piece in (first, last):
            if piece is None:
                continue
            i, side, q = piece
            for e in path_edges(q):
                if e not in matching:
                    colors[e] = free[(i, side)].pop(0)
        return make_rainbow_aap(seq, matching, colors)
    return None


def extend_badge_rainbow_aap(b: Badge | BadgeCertificate, target: int | None, e: Edge,
                             extra_color: int | None = None) -> RainbowAap:
    """Rainbow skeleton-AAP after adding edge ``e`` to a badge.

    With ``target`` set, ``e`` joins the path of colour ``target``; with
    ``target=None`` it forms an extra singleton colour ``extra_color``
    (default: the next unused colour index).
    """
    cert = b if isinstance(b, BadgeCertificate) else identity_certificate(b)
    badge = cert.badge
    f = badge.skeleton
    e = edge(*e)
    if e in f:
        raise ValueError("the added edge lies in the skeleton")
    pools = cert.pools()
    if target is not None:
        group = cert.slot_of(target)
        if e in badge.strips[group[0]].path_edges(group[1]):
            raise ValueError("the added edge already lies on the target path")
        pools[group] = [c for c in pools[group] if c != target]
        color = target
    else:
        color = extra_color
        if color is None:
            color = len(cert.color_map) + len(cert.j_set)
    found = close_path(e, {e: color}, f, badge.strips, pools)
    if found is None:
        raise RuntimeError(f"no rainbow AAP through {e}; badge input is inconsistent")
    return found
