"""Command line: ``rainbow-forge gen|solve|explore``.

Exit status of ``solve``: 0 witness found, 2 nonexistence verified, 3 search
budget exhausted, 1 malformed input or refused preconditions.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Sequence

from . import io
from .alternating import is_rainbow_aap
from .badge import (
    badge_paths,
    make_badge,
    make_origamistrip,
    sharpness_instance,
    verify_badge,
)
from .engine import (
    BudgetExceeded,
    EngineError,
    PreconditionError,
    cooperative_decide,
    rainbow_aap_or_badge,
    rainbow_aap_oracle,
)
from .explorer import ExplorerJob, run
from .graph_core import edge
from .solver import (
    SolveReport,
    rainbow_matching_oracle,
    solve_cooperative,
    solve_main,
    verify_witness,
)

EXIT_WITNESS, EXIT_ERROR, EXIT_NONE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# gen

def _parse_host(text: str) -> tuple[list[str], list[tuple[int, int]], list[int]]:
    """``"xy:3,yz:2"`` (single-character names) or ``"x-y:3,y-z:2"``."""
    names: list[str] = []
    host, weights = [], []
    for item in filter(None, (p.strip() for p in text.split(","))):
        pair, _, w = item.partition(":")
        ends = pair.split("-") if "-" in pair else list(pair)
        if len(ends) != 2 or not w.isdigit():
            raise UsageError(f"cannot read host edge {item!r}")
        ids = []
        for e in ends:
            if e not in names:
                names.append(e)
            ids.append(names.index(e))
        if ids[0] == ids[1]:
            raise UsageError(f"host edge {item!r} is a loop")
        host.append((ids[0], ids[1]))
        weights.append(int(w))
    if not host:
        raise UsageError("empty host graph")
    return names, host, weights


def _badge_instance(names, host, weights) -> io.Instance:
    b = make_badge(host, weights)
    labels = list(names)
    seen: dict = {}
    for (x, y), s in zip(host, b.strips):
        tag = names[x] + names[y]
        seen[tag] = seen.get(tag, 0) + 1
        if seen[tag] > 1:
            tag += f"#{seen[tag]}"
        for i in range(1, s.m + 1):
            labels += [f"{tag}.u{i}", f"{tag}.v{i}"]
    return io.Instance(tuple(labels), tuple(badge_paths(b)), b.skeleton)


def _strip_labels(m: int) -> list[str]:
    return ["x"] + [f"{c}{i}" for i in range(1, m + 1) for c in "uv"] + ["y"]


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "origamistrip":
        os_ = make_origamistrip(args.m)
        paths = (os_.path_edges("A"),) * args.m + (os_.path_edges("B"),) * args.m
        inst = io.Instance(tuple(_strip_labels(args.m)), paths, os_.skeleton)
    elif kind == "badge":
        inst = _badge_instance(*_parse_host(args.host))
    elif kind == "sharpness":
        if args.n is None:
            raise UsageError("sharpness needs --n")
        try:
            fam = sharpness_instance(args.n, allow_odd=args.allow_odd)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        inst = io.Instance(tuple(_strip_labels(args.n - 1)), tuple(fam))
    elif kind == "random":
        if args.n is None:
            raise UsageError("random needs --n")
        inst = _random_instance(args)
    elif kind == "latin":
        rows = io.parse_latin(args.square) if args.square else io.cyclic_latin(args.order)
        if args.order is not None and len(rows) != args.order:
            raise UsageError("--order does not match the square")
        inst = io.latin_instance(rows)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(kind)
    _emit(io.dumps(inst.to_json()), args.out)
    return 0


def _random_instance(args) -> io.Instance:
    rng = random.Random(args.seed)
    n = args.n
    count = args.colors if args.colors is not None else 3 * n - 3
    v = args.vertices if args.vertices is not None else 2 * n + 2
    if v < 2 * n:
        raise UsageError("not enough vertices for a matching of size n")
    colors = []
    for _ in range(count):
        if args.bipartite:
            h = v // 2
            if h < n:
                raise UsageError("not enough vertices per side")
            left, right = rng.sample(range(h), n), rng.sample(range(h, 2 * h), n)
            colors.append(frozenset(edge(a, b) for a, b in zip(left, right)))
        else:
            vs = rng.sample(range(v), 2 * n)
            colors.append(frozenset(edge(vs[2 * i], vs[2 * i + 1]) for i in range(n)))
    return io.Instance(tuple(str(i) for i in range(v)), tuple(colors))


# ---------------------------------------------------------------------------
# solve

def _path_json(w, labels) -> dict:
    return {"kind": "witness", "path": [labels[v] for v in w.vertices],
            "colors": [[[labels[u], labels[v]], c] for (u, v), c in w.colors]}


def _solve_matching(args, inst: io.Instance, result: dict) -> int:
    fam = inst.colors
    report = SolveReport()
    sizes = {len(c) for c in fam if c}
    n = args.n if args.n is not None else (min(sizes) if sizes else 0)
    try:
        if args.mode == "main":
            w = solve_main(fam, n, fast_path=args.fast_path, report=report)
        else:
            variant = args.variant or ("3n-3+t" if len(fam) == 3 * n - 3 + args.t and n >= 3
                                       else "3n-2+t")
            w = solve_cooperative(fam, args.t, n, variant, report=report)
    except (ValueError, PreconditionError) as exc:
        result["error"] = str(exc)
        if isinstance(exc, PreconditionError):
            result["violating_colors"] = list(exc.indices)
        if not args.verify:
            return EXIT_ERROR
        # the solver refused; let the oracle settle existence
        w = rainbow_matching_oracle(fam, n, args.budget)
        result["source"] = "oracle"
        if w is None:
            result["result"] = {"kind": "none", "size": n}
            report.outcome = "counterexample-candidate"
            return EXIT_NONE
    result["result"] = w.to_json(inst.labels)
    if args.trace:
        result["trace"] = report.trace
        result["permutation"] = list(report.permutation)
    if args.verify:
        result["verified"] = verify_witness(fam, w, n)
    return EXIT_WITNESS


def _solve_engine(args, inst: io.Instance, result: dict) -> int:
    if inst.matching is None:
        raise UsageError("aap-engine needs a 'matching' in the instance")
    f, fam = inst.matching, inst.colors
    if args.t is not None and args.t > 0:
        d = cooperative_decide(f, fam, args.t, budget=args.budget)
    else:
        d = rainbow_aap_or_badge(f, fam, budget=args.budget)
    result["result"] = d.to_json(inst.labels)
    if d.witness is not None:
        result["result"] = {**_path_json(d.witness, inst.labels),
                            **({"fallback": True} if d.fallback else {})}
    if args.trace and d.certificate is not None:
        result["diagram"] = [line for s in d.certificate.badge.strips
                             for line in io.strip_diagram(s, inst.labels)]
    if args.verify:
        if d.witness is not None:
            result["verified"] = is_rainbow_aap(d.witness, f, fam)
        elif d.certificate is not None:
            result["verified"] = bool(verify_badge(f, fam, d.certificate)) and \
                rainbow_aap_oracle(f, fam, args.budget) is None
        else:
            result["verified"] = rainbow_aap_oracle(f, fam, args.budget) is None
    return EXIT_WITNESS if d.witness is not None else EXIT_NONE


def cmd_solve(args) -> int:
    try:
        inst = io.load_instance(args.instance)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    result: dict = {"mode": args.mode}
    try:
        if args.mode == "aap-engine":
            code = _solve_engine(args, inst, result)
        else:
            if args.mode == "cooperative" and (args.t is None or args.n is None):
                raise UsageError("cooperative mode needs --t and --n")
            args.t = args.t or 0
            code = _solve_matching(args, inst, result)
    except BudgetExceeded as exc:
        result["error"] = str(exc)
        code = EXIT_INCONCLUSIVE
    except (UsageError, ValueError, EngineError) as exc:
        result["error"] = str(exc)
        code = EXIT_ERROR
    result["exit"] = code
    _emit(io.dumps(result), args.out)
    return code


# ---------------------------------------------------------------------------
# explore

def cmd_explore(args) -> int:
    job = ExplorerJob(statement=args.statement, n=args.n, t=args.t or 0, bipartite=args.bipartite,
                      vertices=args.exhaustive_vertices or args.vertices,
                      exhaustive=args.exhaustive_vertices is not None, samples=args.samples,
                      seed=args.seed, budget=args.budget, workers=args.workers)
    try:
        lines = [io.dumps(rec) for rec in run(job)]
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    _emit("".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rainbow-forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=None,
                        help="oracle node limit (default: $RAINBOW_FORGE_BUDGET or 10^7)")
        sp.add_argument("--out", default=None, help="write to this file instead of stdout")

    g = sub.add_parser("gen", help="write an instance file")
    g.add_argument("kind", choices=["origamistrip", "badge", "sharpness", "random", "latin"])
    g.add_argument("--m", type=int, default=1, help="strip length for origamistrip")
    g.add_argument("--host", default="xy:1", help='badge host, e.g. "xy:3,yz:2"')
    g.add_argument("--n", type=int)
    g.add_argument("--allow-odd", action="store_true", help="sharpness construction for odd n")
    g.add_argument("--colors", type=int)
    g.add_argument("--vertices", type=int)
    g.add_argument("--bipartite", action="store_true")
    g.add_argument("--order", type=int, default=None)
    g.add_argument("--square", default=None, help='rows separated by "/", e.g. "123/231/312"')
    common(g)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    s.add_argument("--mode", choices=["main", "cooperative", "aap-engine"], default="main")
    s.add_argument("--n", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--variant", choices=["3n-2+t", "3n-3+t"])
    s.add_argument("--verify", action="store_true", help="re-check the result with the oracles")
    s.add_argument("--trace", action="store_true", help="include solver phases and strip diagrams")
    s.add_argument("--fast-path", action="store_true", help="try a greedy rainbow matching first")
    common(s)
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("explore", help="search for families violating a statement")
    e.add_argument("--statement", required=True, help='e.g. "(2n-1,n)->n" or "(3n-3+t,t+1,n)->n"')
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--t", type=int, default=0)
    e.add_argument("--bipartite", action="store_true")
    e.add_argument("--exhaustive-vertices", type=int, default=None,
                   help="enumerate every family on this many vertices")
    e.add_argument("--vertices", type=int, default=None, help="host size for random sampling")
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--workers", type=int, default=1)
    common(e)
    e.set_defaults(func=cmd_explore)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
