"""Refinement of tangle-distinguishing tree-decompositions.

Two pipelines live here.  The first decomposes the parts of a skeleton
that hold no tangle: shift a whole tree onto each star member so the
member becomes a leaf separation, then splice the trees back in.  The
second shrinks the parts that do hold tangles: uncross the maximal
inessential separations of each tangle against the part's star and
attach a decomposition certificate behind every surviving one.

Everything follows constructive arguments whose conclusions double as
runtime assertions; a failed assertion is a bug, never an input error,
and raises InvariantViolation.
"""

import itertools

from .distinguish import build_distinguishing_set
from .errors import ContractError, InvariantViolation, SizeError
from .graph import Graph, set_of, torso
from .seps import (Sep, SepSystem, canonical_orientation, emulates, is_nested,
                   is_star, is_valid_sep, leq, linked_to, make_system, meet,
                   sep_to_json, shift_sep)
from .streedec import (STree, TreeDecomposition, find_stree_over,
                       induced_separations, is_refinement, locate,
                       make_irredundant, oracle_star_family,
                       treedec_from_nested_set, treedec_of_stree,
                       validate_stree_over, width_over_family)
from .tangles import (BLOCK_ORACLE, PROFILE_TRIPLES, TANGLE_STARS,
                      TANGLE_TRIPLES, Family, Tangle, enumerate_tangles,
                      kappa, maximal_inessential, maximal_of, tangle_stars)

__all__ = [
    "shift_stree", "refine_part", "refine_all", "iness_tree",
    "min_order_between", "uncross_pair", "uncross_star",
    "refine_essential", "vertex_status",
]

# interval scans enumerate per-vertex membership flags; this caps the
# product of the per-vertex choice counts
MIN_ORDER_SCAN_CAP = 1 << 20


def _sep_sort_key(s: Sep):
    return (s.order,) + s.key()


# ---------------------------------------------------------------------------
# interval minimisation and uncrossing

def min_order_between(sys: SepSystem, s: Sep, r: Sep) -> Sep:
    """Minimum-order separation u with s <= u <= r, canonical tie-break.

    The interval lives in the full universe of separations of the
    graph, not just the system, so it is scanned directly: each vertex
    has at most three (A,B)-membership patterns once s pins it from
    below and r from above.  Minimality makes u linked above s and u*
    linked above r*, which is asserted before returning.
    """
    if not leq(s, r):
        raise ContractError("empty interval: s <= r is required")
    g = sys.g
    opts = []
    total = 1
    for v in range(g.n):
        allowed = []
        for a, b in ((1, 0), (0, 1), (1, 1)):
            if s.A >> v & 1 and not a:
                continue
            if a and not (r.A >> v & 1):
                continue
            if r.B >> v & 1 and not b:
                continue
            if b and not (s.B >> v & 1):
                continue
            allowed.append((a, b))
        opts.append(allowed)
        total *= len(allowed)
        if total > MIN_ORDER_SCAN_CAP:
            raise SizeError(
                "interval scan needs %d assignments (cap %d)"
                % (total, MIN_ORDER_SCAN_CAP))
    best = None
    for assign in itertools.product(*opts):
        a = 0
        b = 0
        for v, (fa, fb) in enumerate(assign):
            if fa:
                a |= 1 << v
            if fb:
                b |= 1 << v
        u = Sep(a, b)
        if not is_valid_sep(g, u):
            continue
        rank = (u.order,) + u.key()
        if best is None or rank < best[0]:
            best = (rank, u)
    # s itself is a valid candidate, so the scan cannot come up empty
    u = best[1]
    if s in sys and not linked_to(u, s, sys):
        raise InvariantViolation("interval minimum is not linked above s")
    if r.inv in sys and not linked_to(u.inv, r.inv, sys):
        raise InvariantViolation("interval minimum is not linked above r*")
    return u


def uncross_pair(sys: SepSystem, x1: Sep, x2: Sep):
    """Replace (x1, x2) by a nested pair (u1, u2) without raising orders.

    u1 is a minimum-order separation between x1 ^ x2* and x1, u2 is
    x2 ^ u1*.  The advertised conclusions are asserted: star form, both
    order bounds, the meet identity, linkedness of both outputs above
    the originals' inverses, and the side-cover identity.
    """
    if x1 not in sys or x2 not in sys:
        raise ContractError("uncross_pair arguments must lie in the system")
    u1 = min_order_between(sys, meet(x1, x2.inv), x1)
    u2 = meet(x2, u1.inv)
    checks = (
        (leq(u1, u2.inv), "outputs are not in star form"),
        (u1.order <= x1.order, "first order bound failed"),
        (u2.order <= x2.order, "second order bound failed"),
        (u1 == meet(x1, u2.inv), "meet identity failed"),
        (linked_to(u1.inv, x1.inv, sys), "u1* is not linked above x1*"),
        (linked_to(u2.inv, x2.inv, sys), "u2* is not linked above x2*"),
        ((x1.A | x2.A) == (u1.A | u2.A), "side cover changed"),
    )
    for ok, msg in checks:
        if not ok:
            raise InvariantViolation("uncross_pair: " + msg)
    return u1, u2


def _distinguishes_efficiently(r: Sep, phi) -> bool:
    for p, q in itertools.combinations(phi, 2):
        if p.contains(r) != q.contains(r) and kappa(p, q)[0] == r.order:
            return True
    return False


def uncross_star(sys: SepSystem, rs, xs, phi=()):
    """Uncross the family xs against itself and the fixed star rs.

    One pass over all index pairs in lexicographic order, xs indices
    first: an x/x pair goes through uncross_pair, an x/r pair shrinks
    the x by a meet with r* (r itself is a minimum of its interval, so
    it never moves), and r/r pairs are already nested.  Star form,
    once established for a pair, survives the rest of the pass because
    replacements only ever move members downward.  Returns the final
    versions of xs; all five conclusions are asserted.
    """
    rs = tuple(rs)
    xs = tuple(xs)
    phi = tuple(phi)
    for a in xs + rs:
        if a not in sys:
            raise ContractError("uncross_star member outside the system")
        if a.is_degenerate:
            raise ContractError("degenerate separation in uncross_star")
    if rs and not is_star(rs):
        raise ContractError("rs is not a star")
    if phi:
        for r in rs:
            if not _distinguishes_efficiently(r, phi):
                raise ContractError(
                    "fixed member %r distinguishes no profile pair at its "
                    "own order" % (r,))
        for x in xs:
            if any(not t.contains(x) for t in phi):
                raise ContractError(
                    "family member %r is not contained in every profile"
                    % (x,))
    ys = list(xs) + list(rs)
    old = list(ys)
    nx = len(xs)
    for i in range(len(ys)):
        for j in range(i + 1, len(ys)):
            if j < nx:
                ys[i], ys[j] = uncross_pair(sys, ys[i], ys[j])
            elif i < nx:
                # the fixed member is a minimum of its own interval or
                # the meet below could beat its order
                w = min_order_between(sys, meet(ys[j], ys[i].inv), ys[j])
                if w.order != ys[j].order:
                    raise InvariantViolation(
                        "uncross_star: fixed member %r lost efficiency"
                        % (ys[j],))
                ys[i] = meet(ys[i], ys[j].inv)
    for i in range(nx, len(ys)):
        if ys[i] != old[i]:
            raise InvariantViolation("uncross_star: fixed member moved")
    _assert_uncross_star(sys, old, ys, nx)
    return tuple(ys[:nx])


def _assert_uncross_star(sys, old, new, nx):
    members = []
    for s in new:
        if s not in members:
            members.append(s)
    if not is_star(members):
        raise InvariantViolation("uncross_star: output is not a star")
    cover_old = 0
    cover_new = 0
    for s in old:
        cover_old |= s.A
    for s in new:
        cover_new |= s.A
    if cover_old != cover_new:
        raise InvariantViolation("uncross_star: side cover changed")
    for i in range(nx):
        if new[i].order > old[i].order:
            raise InvariantViolation("uncross_star: order grew at index %d" % i)
        if not linked_to(new[i].inv, old[i].inv, sys):
            raise InvariantViolation(
                "uncross_star: output %d is not linked above its original" % i)
        fold = old[i]
        for j in range(len(old)):
            if j != i:
                fold = meet(fold, old[j].inv)
        if not (leq(fold, new[i]) and leq(new[i], old[i])):
            raise InvariantViolation(
                "uncross_star: interval bound failed at index %d" % i)


# ---------------------------------------------------------------------------
# shifting whole trees

def _fuse_series_images(st: STree, keep=()) -> STree:
    """Collapse runs of edges that share one image.

    Joining with s can send two consecutive edges to the same
    separation; the node between them then sees both orientations of
    that separation in its in-star, which no star family accepts.  The
    two edges fuse into one and the middle node's other branches fall
    away.  Both surviving endpoints keep their in-stars, so validity
    elsewhere is untouched.  A discarded branch ending in a leaf whose
    separation is in keep means structure that had to survive did not;
    that is a bug upstream, reported loudly.
    """
    adj = {t: list(ns) for t, ns in st.adj.items()}
    alpha = dict(st.alpha)
    keep = set(keep)
    while True:
        hit = None
        for t in sorted(adj):
            for p in adj[t]:
                x = alpha[(p, t)]
                for q in adj[t]:
                    if q != p and alpha[(t, q)] == x:
                        hit = (p, t, q, x)
                        break
                if hit:
                    break
            if hit:
                break
        if hit is None:
            break
        p, t, q, x = hit
        drop = {t}
        stack = [u for u in adj[t] if u not in (p, q)]
        while stack:
            u = stack.pop()
            drop.add(u)
            stack.extend(w for w in adj[u] if w not in drop)
        for u in drop:
            if u != t and len(adj[u]) == 1 and alpha[(u, adj[u][0])] in keep:
                raise InvariantViolation(
                    "fusing duplicate images of %r would discard the leaf "
                    "separation %r" % (x, alpha[(u, adj[u][0])]))
        for a, b in list(alpha):
            if a in drop or b in drop:
                del alpha[(a, b)]
        for u in drop:
            del adj[u]
        adj[p] = sorted([w for w in adj[p] if w not in drop] + [q])
        adj[q] = sorted([w for w in adj[q] if w not in drop] + [p])
        alpha[(p, q)] = x
        alpha[(q, p)] = x.inv
    edges = sorted((a, b) for a in adj for b in adj[a] if a < b)
    return STree(edges, {e: alpha[e] for e in alpha})


def shift_stree(st: STree, r: Sep, s: Sep, f: Family, keep=()) -> STree:
    """Shift a tree onto s: images with an orientation above r join
    with s, the r-leaf itself becomes the s-leaf.

    Edges whose images collapse onto one separation under the join are
    fused afterwards, so the output validates over f extended by the
    singleton {s*}, with s the image of exactly one directed edge, at
    a leaf.  Leaf separations listed in keep must survive the fuse.
    """
    sys = f.sys
    if r not in sys:
        raise ContractError("r outside the system")
    if r.is_degenerate:
        raise ContractError("cannot shift from a degenerate separation")
    if sys.is_trivial(r):
        raise ContractError("cannot shift from a trivial separation")
    if r not in st.leaf_seps():
        raise ContractError("r is not a leaf separation")
    if sum(1 for a in st.alpha.values() if a == r) != 1:
        raise ContractError("r is the image of more than one edge")
    if not emulates(s, r, sys):
        raise ContractError("s does not emulate r in the system")
    alpha = {}
    for (a, b), x in st.alpha.items():
        if a < b:
            if x == r:
                alpha[(a, b)] = s
            elif x == r.inv:
                alpha[(a, b)] = s.inv
            else:
                alpha[(a, b)] = shift_sep(x, r, s)
    out = _fuse_series_images(STree(st.edges, alpha), keep=tuple(keep) + (s,))
    extras = list(f.extras)
    if s.inv not in extras:
        extras.append(s.inv)
    ok, report = validate_stree_over(out, f.with_extras(extras, closure=f.closure))
    if not ok:
        raise InvariantViolation(
            "shifted tree fails family validation at %r" % (report[:1],))
    if s not in out.leaf_seps():
        raise InvariantViolation("s is not a leaf separation after the shift")
    if sum(1 for a in out.alpha.values() if a == s) != 1:
        raise InvariantViolation("s is the image of more than one edge")
    return out


# ---------------------------------------------------------------------------
# one part of a skeleton

def _far_tangle(s: Sep, phi):
    """The canonically first tangle containing s* in a pair that s
    distinguishes at the pair's own order."""
    for p, q in itertools.combinations(phi, 2):
        for o1, o2 in ((p, q), (q, p)):
            if (o1.contains(s) and o2.contains(s.inv)
                    and kappa(o1, o2)[0] == s.order):
                return o2
    raise ContractError(
        "star member %r distinguishes no tangle pair at its own order"
        % (s,))


def refine_part(sys: SepSystem, f: Family, sigma, phi):
    """Either a tangle orienting the whole star inward, or a tree over
    f plus the star's inverse singletons in which every sigma member is
    a leaf separation.

    The tree branch searches over the upward-closed extension first,
    then walks sigma from the last member to the first.  Each member is
    shifted onto from the sink leaf of a tangle it efficiently
    distinguishes; members already placed stay put because the star
    form absorbs later joins.
    """
    sigma = tuple(sigma)
    phi = sorted(phi, key=lambda t: t.orientation.word)
    if not sigma:
        raise ContractError("sigma must be a nonempty star")
    for s in sigma:
        if s.is_degenerate:
            raise ContractError("sigma contains a degenerate separation")
        if s not in sys:
            raise ContractError("sigma member outside the system")
    if not is_star(sigma):
        raise ContractError("sigma is not a star")
    for s in sigma:
        if not any(p.contains(s) != q.contains(s)
                   for p, q in itertools.combinations(phi, 2)):
            raise ContractError("sigma member %r is not phi-essential" % (s,))

    extras = [s.inv for s in sigma]
    fbar = f.with_extras(extras, closure=True)
    fprime = f.with_extras(extras, closure=False)
    found = enumerate_tangles(sys, fbar, first_only=True)
    if found:
        return Tangle(found[0].orientation, fprime)
    st = find_stree_over(sys, fbar)
    if st is None:
        raise InvariantViolation(
            "neither a tangle nor a tree over the extended family")

    placed = []
    for s in reversed(sigma):
        st = make_irredundant(st, protected_leaves=tuple(placed), family=fbar)
        sink = locate(_far_tangle(s, phi), st)
        star = st.in_star(sink)
        if len(star) != 1:
            raise InvariantViolation(
                "tangle sink is not a singleton leaf during the shift walk")
        xin = star[0]
        x = xin.inv
        if x == s:
            placed.append(s)
            continue
        if not leq(s.inv, xin):
            raise InvariantViolation(
                "sink leaf is not above the star member's inverse")
        if not emulates(s, x, sys):
            raise InvariantViolation(
                "star member fails to emulate its shift leaf")
        st = make_irredundant(st, protected_leaves=tuple(placed) + (x,),
                              family=fbar)
        st = shift_stree(st, x, s, fbar, keep=tuple(placed))
        placed.append(s)

    st = make_irredundant(st, protected_leaves=tuple(placed), family=fbar)
    ok, report = validate_stree_over(st, fprime)
    if not ok:
        raise InvariantViolation(
            "final tree fails the strict family at %r" % (report[:1],))
    leafset = st.leaf_seps()
    for s in sigma:
        if s not in leafset:
            raise InvariantViolation(
                "star member %r did not end as a leaf separation" % (s,))
    return st


# ---------------------------------------------------------------------------
# whole-graph pipeline

def _family_for(sys, f_kind):
    if f_kind == TANGLE_STARS:
        return tangle_stars(sys)
    if f_kind in (PROFILE_TRIPLES, BLOCK_ORACLE):
        return oracle_star_family(sys, f_kind)
    if f_kind == TANGLE_TRIPLES:
        raise ContractError(
            "refinement needs a star family; triples are not stars")
    raise ContractError("unknown family kind %r" % (f_kind,))


def _locate_part(o, td: TreeDecomposition):
    """The part whose in-star the orientation points at."""
    if len(td.parts) == 1:
        return next(iter(td.parts))
    ind = induced_separations(td)
    sinks = []
    for t in sorted(td.parts):
        if all(o.contains(ind[(u, t)]) for u in td.adj[t]):
            sinks.append(t)
    if len(sinks) != 1:
        raise ContractError(
            "expected one sink part, found %d" % len(sinks))
    return sinks[0]


def _torso_width(g, td, node):
    adhs = [td.adhesion(node, u) for u in td.adj[node]]
    tg, _ = torso(g, td.parts[node], adhs)
    return width_over_family(tg, TANGLE_TRIPLES)


def refine_all(g: Graph, k: int, f_kind=TANGLE_STARS, node_guard=None):
    """Distinguishing skeleton plus a decomposition of every part that
    holds no tangle.

    Returns (decomposition, report).  The report classifies each part,
    names the tangle of each essential part, and carries the star and
    the tree separations of each refined skeleton part.
    """
    if k < 3:
        raise ContractError("refinement needs k >= 3")
    sys = make_system(g, k)
    f = _family_for(sys, f_kind)
    kwargs = {} if node_guard is None else {"node_guard": node_guard}
    phi = enumerate_tangles(sys, f, **kwargs)

    if not phi:
        st = find_stree_over(sys, f)
        if st is None:
            raise InvariantViolation("no tangles, yet no tree either")
        out = treedec_of_stree(st, g)
        report = {
            "k": k, "family": f_kind, "tangles": 0,
            "parts": {t: {"classification": "inessential",
                          "torso_width": _torso_width(g, out, t)}
                      for t in sorted(out.parts)},
            "refinements": {},
        }
        return out, report

    nd = build_distinguishing_set(sys, phi)
    td = treedec_from_nested_set(g, nd)
    where = {}
    for idx, o in enumerate(phi):
        where[idx] = _locate_part(o, td)
    if len(set(where.values())) != len(phi):
        raise InvariantViolation("two tangles share a skeleton part")
    essential = set(where.values())

    ind = induced_separations(td)
    refinements = {}
    nested = {canonical_orientation(s) for s in ind.values()}
    for node in sorted(td.parts):
        if node in essential:
            continue
        sigma = tuple(sorted((ind[(u, node)] for u in td.adj[node]),
                             key=_sep_sort_key))
        res = refine_part(sys, f, sigma, phi)
        if isinstance(res, Tangle):
            raise InvariantViolation(
                "part without a located tangle produced a tangle")
        tree_seps = sorted({canonical_orientation(a)
                            for a in res.alpha.values()
                            if not (a.is_small or a.inv.is_small)},
                           key=_sep_sort_key)
        nested.update(tree_seps)
        refinements[node] = {
            "star": [sep_to_json(s) for s in sigma],
            "separations": [sep_to_json(s) for s in tree_seps],
        }

    out = treedec_from_nested_set(g, sorted(nested, key=_sep_sort_key))
    if not is_refinement(out, td):
        raise InvariantViolation("output does not refine the skeleton")
    for a, b in out.edges:
        if bin(out.adhesion(a, b)).count("1") >= k:
            raise InvariantViolation("adhesion of order >= k")

    parts_report = {}
    out_where = {}
    oind = induced_separations(out)
    for idx, o in enumerate(phi):
        node = _locate_part(o, out)
        out_where[node] = idx
        old_star = {canonical_orientation(ind[(u, where[idx])])
                    for u in td.adj[where[idx]]}
        new_star = {canonical_orientation(oind[(u, node)])
                    for u in out.adj[node]}
        if old_star != new_star:
            raise InvariantViolation(
                "the star at a tangle part changed during refinement")
    for node in sorted(out.parts):
        w = _torso_width(g, out, node)
        if node in out_where:
            parts_report[node] = {"classification": "essential",
                                  "tangle": out_where[node],
                                  "torso_width": w}
        else:
            if w >= k:
                raise InvariantViolation(
                    "inessential torso has width %d >= k" % w)
            parts_report[node] = {"classification": "inessential",
                                  "torso_width": w}
    report = {
        "k": k, "family": f_kind, "tangles": len(phi),
        "parts": parts_report, "refinements": refinements,
    }
    return out, report


# ---------------------------------------------------------------------------
# shrinking essential parts

def iness_tree(sys: SepSystem, o: Tangle, x: Sep, phi) -> STree:
    """A decomposition certificate behind one maximal inessential
    separation: a tree over the coverage stars plus the single extra
    star {x}, with x* appearing as a leaf separation."""
    phi = tuple(phi)
    if x not in sys:
        raise ContractError("x outside the system")
    if sys.is_trivial(x):
        raise ContractError("x must be nontrivial")
    for t in phi:
        if t.contains(x.inv):
            raise ContractError(
                "x is not inessential: a tangle contains its inverse")
    if x not in maximal_inessential(o, phi):
        raise ContractError("x is not maximal inessential for the tangle")
    fx = tangle_stars(sys).with_extras([x], closure=False)
    st = find_stree_over(sys, fx)
    if st is None:
        raise InvariantViolation(
            "no tree over the singleton-extended star family")
    if x.inv not in st.leaf_seps():
        raise InvariantViolation("x* is not a leaf separation of the tree")
    return st


def _td_star(td, ind, node):
    return tuple(sorted((ind[(u, node)] for u in td.adj[node]),
                        key=_sep_sort_key))


def refine_essential(g: Graph, k: int, td: TreeDecomposition, phi):
    """Shrink the essential parts: attach a certificate tree behind the
    uncrossed version of every maximal inessential separation of every
    tangle, then rebuild the decomposition from the union.

    Small uncrossed members are dropped: their far side holds no vertex
    of its own, so attaching them would only add pendant copies of
    separator sets.  Triviality of the original forces triviality of
    the uncrossed member; that implication is asserted, not assumed.
    """
    if k < 3:
        raise ContractError("k >= 3 required")
    phi = sorted(phi, key=lambda t: t.orientation.word)
    if not phi:
        return td
    sys = phi[0].sys
    for t in phi:
        if t.sys is not sys:
            raise ContractError("tangles come from different systems")
    if sys.g != g or sys.k != k:
        raise ContractError("tangle system does not match g and k")
    if td.g != g:
        raise ContractError("decomposition of a different graph")

    ind = induced_separations(td) if len(td.parts) > 1 else {}
    where = [_locate_part(o, td) for o in phi]
    if len(set(where)) != len(phi):
        raise ContractError("decomposition does not separate the tangles")
    for node in where:
        for u in td.adj[node]:
            if not _distinguishes_efficiently(ind[(u, node)], phi):
                raise ContractError(
                    "in-star member %r at a tangle part is not an "
                    "efficient distinguisher" % (ind[(u, node)],))

    collected = set()
    seen = set()
    for o, node in zip(phi, where):
        rs = _td_star(td, ind, node) if len(td.parts) > 1 else ()
        xs = maximal_inessential(o, phi)
        if not xs:
            continue
        us = uncross_star(sys, rs, xs, phi)
        for x, u in zip(xs, us):
            if sys.is_trivial(x) and not sys.is_trivial(u):
                raise InvariantViolation(
                    "trivial member uncrossed to a nontrivial one")
            if u.is_small:
                # A side inside B side: liberates no vertex
                continue
            if u in seen:
                continue
            seen.add(u)
            st = iness_tree(sys, o, x, phi)
            if u != x:
                fx = tangle_stars(sys).with_extras([x], closure=False)
                st = make_irredundant(st, protected_leaves=(x.inv,),
                                      family=fx)
                st = shift_stree(st, x.inv, u.inv, fx)
                fu = tangle_stars(sys).with_extras([u], closure=False)
                ok, report = validate_stree_over(st, fu)
                if not ok:
                    raise InvariantViolation(
                        "shifted certificate is not tight over the target "
                        "singleton at %r" % (report[:1],))
            # small images carve no vertex of their own; keeping them
            # only litters the merged set with boundary-less members
            collected.update(
                c for c in (canonical_orientation(a)
                            for a in st.alpha.values())
                if not (c.is_small or c.is_cosmall))

    nested = {canonical_orientation(s) for s in ind.values()}
    nested |= collected
    out = treedec_from_nested_set(g, sorted(nested, key=_sep_sort_key))
    _assert_shrunk(g, k, td, out, phi)
    return out


def _assert_shrunk(g, k, td_in, out, phi):
    """The three advertised conclusions of the essential-part
    refinement, checked on the finished decomposition."""
    ind = induced_separations(td_in) if len(td_in.parts) > 1 else {}
    ess = set()
    for s in ind.values():
        c = canonical_orientation(s)
        if any(p.contains(c) != q.contains(c)
               for p, q in itertools.combinations(phi, 2)):
            ess.add(c)
    skeleton = treedec_from_nested_set(g, sorted(ess, key=_sep_sort_key))
    spots = [_locate_part(o, skeleton) for o in phi]
    if len(set(spots)) != len(phi):
        raise InvariantViolation(
            "essential skeleton does not separate the tangles")
    owhere = {_locate_part(o, out) for o in phi}
    for node in sorted(out.parts):
        if node in owhere:
            continue
        if _torso_width(g, out, node) >= k:
            raise InvariantViolation(
                "inessential torso of width >= %d after shrinking" % k)
    for o in phi:
        node = _locate_part(o, out)
        for v in set_of(out.parts[node]):
            if vertex_status(g, k, o, skeleton, v)["inessentially_separated"]:
                raise InvariantViolation(
                    "vertex %d of an essential part is still inessentially "
                    "separated from its tangle" % v)


def vertex_status(g: Graph, k: int, o: Tangle, tdp: TreeDecomposition,
                  v: int) -> dict:
    """Separation status of one vertex relative to a tangle.

    inessentially_separated: some member of the system, nested with
    every maximal inessential member of the tangle and with the star at
    the tangle's part of tdp, has v strictly on its small side and lies
    below a maximal inessential member.

    well_separated: the same with the tangle's maximal members in both
    roles, independent of any decomposition.
    """
    sys = o.sys
    if sys.g != g or sys.k != k:
        raise ContractError("tangle system does not match g and k")
    if not (0 <= v < g.n):
        raise ContractError("vertex %d out of range" % v)
    phi = enumerate_tangles(sys, o.family)
    node = _locate_part(o, tdp)
    if len(tdp.parts) > 1:
        ind = induced_separations(tdp)
        rs = tuple(ind[(u, node)] for u in tdp.adj[node])
    else:
        rs = ()
    mi = maximal_inessential(o, phi)
    mm = maximal_of(o)

    def scan(anchors, dominators):
        for i in range(sys.size):
            base = sys.seps[i]
            cands = (base,) if base.is_degenerate else (base, base.inv)
            for cand in cands:
                if not (cand.A >> v & 1) or cand.B >> v & 1:
                    continue
                if any(not is_nested(cand, m) for m in anchors):
                    continue
                if any(leq(cand, x) for x in dominators):
                    return True
        return False

    return {
        "inessentially_separated": scan(mi + rs, mi),
        "well_separated": scan(mm, mm),
    }
