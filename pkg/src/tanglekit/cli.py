"""Command line front end.

Five subcommands over one input format (an edge list, see load_graph):

    tangles           list the tangles, profiles or blocks of order < k
    decompose         distinguishing decomposition, inessential parts refined
    refine-essential  decompose, then shrink the essential parts too
    width             exact width for the chosen family, tangle yes/no at k
    check             invariant battery with a pass/fail report

JSON output is deterministic: same input and flags, same bytes.  Exit
codes: 0 fine, 1 bad input, 2 a size guard tripped, 3 an internal
invariant broke (always a bug, never the input's fault).
"""

import argparse
import json
import math
import random
import sys as _sys

from .errors import InvariantViolation, SizeError, TanglekitError
from .graph import Graph, dump_graph, load_graph, random_connected, set_of, torso
from .seps import (Sep, canonical_orientation, is_nested, is_valid_sep, join,
                   leq, make_system, meet)
from .tangles import (BLOCK_ORACLE, PROFILE_TRIPLES, TANGLE_STARS,
                      TANGLE_TRIPLES, block_oracle, enumerate_blocks,
                      enumerate_tangles, profile_triples, tangle_stars,
                      tangle_triples)
from .streedec import (dot_of_treedec, find_stree_over, locate,
                       stree_of_treedec, width_over_family)
from .refine import refine_all, refine_essential, uncross_pair

FAMILY_KINDS = {
    "tangle": TANGLE_STARS,
    "profile": PROFILE_TRIPLES,
    "block": BLOCK_ORACLE,
}
FAMILY_BUILDERS = {
    "tangle": tangle_stars,
    "profile": profile_triples,
    "block": block_oracle,
}
WIDTH_LABELS = {
    "tangle": "branch-width",
    "profile": "profile-width",
    "block": "block-width",
}


class UsageError(TanglekitError):
    pass


class _Parser(argparse.ArgumentParser):
    # bad flags are invalid input (exit 1), not argparse's default 2
    def error(self, message):
        raise UsageError("%s\n%s" % (message, self.format_usage().rstrip()))


def _read_graph(path: str) -> Graph:
    if path == "-":
        return load_graph(_sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return load_graph(fh.read())


def _write(path, text: str):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _emit(doc: dict, args):
    _write(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _guard_kwargs(args):
    return {} if args.max_nodes is None else {"node_guard": args.max_nodes}


def _tangle_node(td, o):
    if len(td.parts) == 1:
        return next(iter(td.parts))
    return locate(o, stree_of_treedec(td))


def _torso_width_at(g, td, node) -> int:
    adhs = [td.adhesion(node, u) for u in td.adj[node]]
    tg, _ = torso(g, td.parts[node], adhs)
    return width_over_family(tg, TANGLE_TRIPLES)


def _part_labels(parts_report: dict) -> dict:
    out = {}
    for node, info in parts_report.items():
        if info["classification"] == "essential":
            out[node] = "tangle %d" % info["tangle"]
        else:
            out[node] = "torso width %d" % info["torso_width"]
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_tangles(g: Graph, args) -> int:
    sys = make_system(g, args.k)
    doc = {
        "n": g.n,
        "m": g.m,
        "k": args.k,
        "family": FAMILY_KINDS[args.family],
        "separations": sys.size,
    }
    if args.family == "block":
        found = enumerate_blocks(g, args.k, sys)
        doc["count"] = len(found)
        doc["blocks"] = [
            {"vertices": sorted(set_of(b)), "orientation": t.json()}
            for b, t in found
        ]
    else:
        fam = FAMILY_BUILDERS[args.family](sys)
        found = enumerate_tangles(sys, fam, **_guard_kwargs(args))
        doc["count"] = len(found)
        doc["tangles"] = [t.json() for t in found]
    _emit(doc, args)
    return 0


def _decompose_doc(g, k, td, report) -> dict:
    tdj = td.json()
    for node in tdj["nodes"]:
        node.update(report["parts"][node["id"]])
    return {
        "k": k,
        "family": report["family"],
        "tangles": report["tangles"],
        "width": td.width,
        "nodes": tdj["nodes"],
        "edges": tdj["edges"],
        "refinements": report["refinements"],
    }


def cmd_decompose(g: Graph, args) -> int:
    td, report = refine_all(g, args.k, **_guard_kwargs(args))
    _emit(_decompose_doc(g, args.k, td, report), args)
    if args.dot:
        _write(args.dot, dot_of_treedec(td, _part_labels(report["parts"])))
    return 0


def cmd_refine_essential(g: Graph, args) -> int:
    td, report = refine_all(g, args.k, **_guard_kwargs(args))
    sys = make_system(g, args.k)
    phi = enumerate_tangles(sys, tangle_stars(sys), **_guard_kwargs(args))
    out = refine_essential(g, args.k, td, phi) if phi else td

    where = {_tangle_node(out, t): i for i, t in enumerate(phi)}
    parts_report = {}
    for node in sorted(out.parts):
        if node in where:
            parts_report[node] = {"classification": "essential",
                                  "tangle": where[node]}
        else:
            parts_report[node] = {
                "classification": "inessential",
                "torso_width": _torso_width_at(g, out, node),
            }
    outj = out.json()
    for node in outj["nodes"]:
        node.update(parts_report[node["id"]])

    doc = _decompose_doc(g, args.k, td, report)
    doc["refined"] = {
        "width": out.width,
        "nodes": outj["nodes"],
        "edges": outj["edges"],
    }
    _emit(doc, args)
    if args.dot:
        labels = {}
        for node, info in parts_report.items():
            if info["classification"] == "essential":
                labels[node] = "tangle %d" % info["tangle"]
            else:
                labels[node] = "torso width %d" % info["torso_width"]
        _write(args.dot, dot_of_treedec(out, labels))
    return 0


def cmd_width(g: Graph, args) -> int:
    w = width_over_family(g, FAMILY_KINDS[args.family])
    sys = make_system(g, args.k)
    fam = FAMILY_BUILDERS[args.family](sys)
    exists = bool(enumerate_tangles(sys, fam, first_only=True,
                                    **_guard_kwargs(args)))
    label = WIDTH_LABELS[args.family]
    wtxt = "infinite" if w == math.inf else str(w)
    if exists:
        line = "%s %s, %d-%s exists" % (label, wtxt, args.k, args.family)
    else:
        line = "%s %s, no %d-%s" % (label, wtxt, args.k, args.family)
    print(line)
    if args.out:
        _emit({
            "family": FAMILY_KINDS[args.family],
            "k": args.k,
            "width": None if w == math.inf else w,
            "exists": exists,
        }, args)
    return 0


# ---------------------------------------------------------------------------
# the check battery

def _check_roundtrip(g, k, rng):
    assert load_graph(dump_graph(g)) == g, "graph text round-trip changed g"


def _check_system(g, k, rng):
    sys = make_system(g, k)
    for s in sys.seps:
        assert is_valid_sep(g, s), "system holds an invalid separation"
        assert s.order < k, "system holds a separation of order >= k"
        assert canonical_orientation(s) == s, "stored orientation not canonical"


def _check_algebra(g, k, rng):
    sys = make_system(g, k)
    if not sys.size:
        return
    for _ in range(200):
        x = sys.seps[rng.randrange(sys.size)]
        y = sys.seps[rng.randrange(sys.size)]
        if rng.random() < 0.5:
            x = x.inv
        if rng.random() < 0.5:
            y = y.inv
        j, m = join(x, y), meet(x, y)
        assert is_valid_sep(g, j) and is_valid_sep(g, m)
        assert j.inv == meet(x.inv, y.inv), "de Morgan failed"
        assert j.order + m.order <= x.order + y.order, "submodularity failed"
        assert leq(m, x) and leq(x, j), "lattice order failed"


def _check_duality(g, k, rng):
    sys = make_system(g, k)
    fam = tangle_stars(sys)
    tree = find_stree_over(sys, fam)
    has_tangle = bool(enumerate_tangles(sys, fam, first_only=True))
    assert (tree is None) == has_tangle, "tree and tangle dichotomy failed"


def _check_star_triple(g, k, rng):
    if g.n < k:
        return
    sys = make_system(g, k)
    a = {t.word for t in enumerate_tangles(sys, tangle_stars(sys))}
    b = {t.word for t in enumerate_tangles(sys, tangle_triples(sys))}
    assert a == b, "star and triple families disagree on the tangles"


def _check_uncross(g, k, rng):
    sys = make_system(g, k)
    crossing = [(x, y)
                for i, x in enumerate(sys.seps)
                for y in sys.seps[i + 1:]
                if not is_nested(x, y)]
    rng.shuffle(crossing)
    for x, y in crossing[:50]:
        u1, u2 = uncross_pair(sys, x, y)
        assert is_nested(u1, u2), "uncrossed pair still crosses"
        assert u1.order <= x.order and u2.order <= y.order


def _check_refine(g, k, rng):
    td, report = refine_all(g, k)
    for a, b in td.edges:
        assert bin(td.adhesion(a, b)).count("1") < k, "adhesion too large"
    ess = [n for n, i in report["parts"].items()
           if i["classification"] == "essential"]
    assert len(ess) == report["tangles"], "tangle and part counts differ"


def _check_random_duality(g, k, rng):
    for _ in range(3):
        h = random_connected(rng, 6)
        _check_duality(h, k, rng)
        _check_star_triple(h, k, rng)


CHECKS = (
    ("graph-roundtrip", _check_roundtrip),
    ("system-membership", _check_system),
    ("separation-algebra", _check_algebra),
    ("tree-tangle-duality", _check_duality),
    ("star-triple-agreement", _check_star_triple),
    ("uncross-postconditions", _check_uncross),
    ("refinement", _check_refine),
    ("random-graph-duality", _check_random_duality),
)


def cmd_check(g: Graph, args) -> int:
    failed = 0
    lines = []
    for name, fn in CHECKS:
        rng = random.Random(args.seed)
        try:
            fn(g, args.k, rng)
        except (AssertionError, InvariantViolation) as e:
            failed += 1
            lines.append("FAIL %s: %s" % (name, e))
        else:
            lines.append("ok   %s" % name)
    lines.append("%d checks, %d failed" % (len(CHECKS), failed))
    text = "\n".join(lines) + "\n"
    _write(args.out, text)
    if args.out:
        print(lines[-1])
    return 3 if failed else 0


# ---------------------------------------------------------------------------

def _parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("graph", help="edge-list file, or - for stdin")
    common.add_argument("-k", type=int, required=True, metavar="K",
                        help="order bound: separations of order < K")
    common.add_argument("--out", metavar="PATH",
                        help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized checks (default 0)")
    common.add_argument("--max-nodes", type=int, default=None, metavar="N",
                        help="cap on search tree nodes before giving up")

    p = _Parser(prog="tanglekit",
                description="exact tangles and tree-decompositions "
                            "for small graphs")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("tangles", parents=[common],
                        help="list tangles, profiles or blocks")
    sp.add_argument("--family", choices=sorted(FAMILY_KINDS),
                    default="tangle")
    sp.set_defaults(func=cmd_tangles)

    sp = sub.add_parser("decompose", parents=[common],
                        help="tangle-distinguishing tree-decomposition "
                             "with refined inessential parts")
    sp.add_argument("--dot", metavar="PATH",
                    help="also write a DOT drawing")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("refine-essential", parents=[common],
                        help="decompose, then shrink the essential parts")
    sp.add_argument("--dot", metavar="PATH",
                    help="also write a DOT drawing of the final tree")
    sp.set_defaults(func=cmd_refine_essential)

    sp = sub.add_parser("width", parents=[common],
                        help="exact width and tangle existence at k")
    sp.add_argument("--family", choices=sorted(FAMILY_KINDS),
                    default="tangle")
    sp.set_defaults(func=cmd_width)

    sp = sub.add_parser("check", parents=[common],
                        help="run the invariant battery")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        g = _read_graph(args.graph)
        if args.k < 1:
            raise UsageError("K must be positive")
        return args.func(g, args)
    except InvariantViolation as e:
        print("invariant violation: %s" % e, file=_sys.stderr)
        return 3
    except SizeError as e:
        print("size guard: %s" % e, file=_sys.stderr)
        return 2
    except (TanglekitError, OSError, ValueError) as e:
        print("error: %s" % e, file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
