"""S-trees, tree-decompositions, widths, and the duality search.

An S-tree is a tree whose directed edges carry oriented separations,
inverse directions carrying inverse separations.  A tree-decomposition
carries vertex sets.  The two views convert into each other, and the
searches below construct S-trees over a family or report that none
exists.
"""

from __future__ import annotations

import math
from collections import deque
from functools import cached_property

from .errors import (ContractError, InvariantViolation, SizeError,
                     ValidationError)
from .graph import Graph, bits, set_key, set_of
from .seps import (Sep, SepSystem, canonical_orientation, is_nested, is_star,
                   join, leq, lt, make_system)
from .tangles import Family, TANGLE_STARS, TANGLE_TRIPLES, cover_tables

INFINITY = math.inf

TREE_NODE_CAP = 10 ** 5


class STree:
    """Tree plus alpha: directed edge -> oriented separation.

    alpha holds both directions of every edge and respects the
    involution.  At least one edge (single-node S-trees are not a
    thing: every node needs an in-star)."""

    def __init__(self, edges, alpha):
        self.adj = {}
        self.alpha = {}
        for a, b in edges:
            self.adj.setdefault(a, []).append(b)
            self.adj.setdefault(b, []).append(a)
        if not self.adj:
            raise ValidationError("S-tree needs at least one edge")
        for t in self.adj:
            self.adj[t].sort()
        for (a, b), s in alpha.items():
            self.alpha[(a, b)] = s
        for a, b in list(self.alpha):
            s = self.alpha[(a, b)]
            back = self.alpha.get((b, a))
            if back is None:
                self.alpha[(b, a)] = s.inv
            elif back != s.inv:
                raise ValidationError(
                    "alpha(%s,%s) is not the inverse of alpha(%s,%s)"
                    % (b, a, a, b))
        for a in self.adj:
            for b in self.adj[a]:
                if (a, b) not in self.alpha:
                    raise ValidationError("edge (%s,%s) missing alpha" % (a, b))
        self._check_tree()

    def _check_tree(self):
        nodes = list(self.adj)
        seen = {nodes[0]}
        q = deque(seen)
        while q:
            t = q.popleft()
            for u in self.adj[t]:
                if u not in seen:
                    seen.add(u)
                    q.append(u)
        ne = sum(len(v) for v in self.adj.values()) // 2
        if len(seen) != len(nodes) or ne != len(nodes) - 1:
            raise ValidationError("alpha domain is not a tree")

    @property
    def nodes(self):
        return sorted(self.adj)

    @property
    def edges(self):
        return sorted((a, b) for a in self.adj for b in self.adj[a] if a < b)

    def neighbours(self, t):
        return self.adj[t]

    def in_star(self, t):
        """The in-star at t as a duplicate-free sorted tuple."""
        seen = []
        for u in self.adj[t]:
            s = self.alpha[(u, t)]
            if s not in seen:
                seen.append(s)
        return tuple(sorted(seen, key=lambda s: s.key()))

    def leaves(self):
        return [t for t in self.adj if len(self.adj[t]) == 1]

    def leaf_seps(self):
        """Leaf separations: alpha oriented from each leaf into the tree."""
        return [self.alpha[(t, self.adj[t][0])] for t in self.leaves()]

    def side_nodes(self, a, b):
        """Nodes in the component of a when the edge ab is removed."""
        seen = {a}
        q = deque([a])
        while q:
            t = q.popleft()
            for u in self.adj[t]:
                if u != b and u not in seen:
                    seen.add(u)
                    q.append(u)
        return seen

    def __repr__(self):
        return "STree(%d nodes)" % len(self.adj)


class TreeDecomposition:
    """Tree plus parts.  Validity (cover, edges, interpolation) is
    checked on construction against the graph."""

    def __init__(self, g: Graph, edges, parts: dict):
        self.g = g
        self.parts = dict(parts)
        self.adj = {t: [] for t in self.parts}
        for a, b in edges:
            if a not in self.parts or b not in self.parts:
                raise ValidationError("edge endpoint without a part")
            self.adj[a].append(b)
            self.adj[b].append(a)
        for t in self.adj:
            self.adj[t].sort()
        if not self.parts:
            raise ValidationError("tree-decomposition needs a node")
        self._check()

    def _check(self):
        nodes = list(self.parts)
        seen = {nodes[0]}
        q = deque(seen)
        while q:
            t = q.popleft()
            for u in self.adj[t]:
                if u not in seen:
                    seen.add(u)
                    q.append(u)
        ne = sum(len(v) for v in self.adj.values()) // 2
        if len(seen) != len(nodes) or ne != len(nodes) - 1:
            raise ValidationError("decomposition graph is not a tree")
        cover = 0
        for p in self.parts.values():
            cover |= p
        if cover != self.g.vmask:
            raise ValidationError("parts do not cover the vertex set")
        for u, v in self.g.edges:
            m = 1 << u | 1 << v
            if not any(p & m == m for p in self.parts.values()):
                raise ValidationError("edge (%d,%d) in no part" % (u, v))
        # interpolation: the nodes holding each vertex span a subtree
        for v in range(self.g.n):
            holders = {t for t, p in self.parts.items() if p >> v & 1}
            if not holders:
                continue
            start = next(iter(holders))
            reach = {start}
            q = deque([start])
            while q:
                t = q.popleft()
                for u in self.adj[t]:
                    if u in holders and u not in reach:
                        reach.add(u)
                        q.append(u)
            if reach != holders:
                raise ValidationError(
                    "vertex %d appears in disconnected parts" % v)

    @property
    def nodes(self):
        return sorted(self.parts)

    @property
    def edges(self):
        return sorted((a, b) for a in self.adj for b in self.adj[a] if a < b)

    def adhesion(self, a, b) -> int:
        return self.parts[a] & self.parts[b]

    @property
    def width(self) -> int:
        return max(bin(p).count("1") for p in self.parts.values()) - 1

    def side_nodes(self, a, b):
        seen = {a}
        q = deque([a])
        while q:
            t = q.popleft()
            for u in self.adj[t]:
                if u != b and u not in seen:
                    seen.add(u)
                    q.append(u)
        return seen

    def json(self) -> dict:
        nodes = [{"id": t, "part": sorted(set_of(self.parts[t]))}
                 for t in self.nodes]
        edges = [{"a": a, "b": b,
                  "adhesion": sorted(set_of(self.adhesion(a, b)))}
                 for a, b in self.edges]
        return {"nodes": nodes, "edges": edges}

    def __repr__(self):
        return "TreeDecomposition(%d parts, width %d)" % (
            len(self.parts), self.width)


def treedec_from_json(g: Graph, data: dict) -> TreeDecomposition:
    from .graph import mask_of

    parts = {n["id"]: mask_of(n["part"]) for n in data["nodes"]}
    edges = [(e["a"], e["b"]) for e in data["edges"]]
    return TreeDecomposition(g, edges, parts)


def dot_of_treedec(td: TreeDecomposition, labels: dict = None) -> str:
    """DOT text: parts as node labels, adhesions as edge labels.
    labels optionally adds a per-node annotation line."""
    out = ["graph treedec {", "  node [shape=box];"]
    for t in td.nodes:
        lab = "{%s}" % ",".join(str(v) for v in sorted(set_of(td.parts[t])))
        if labels and t in labels:
            lab += "\\n" + labels[t]
        out.append('  n%s [label="%s"];' % (t, lab))
    for a, b in td.edges:
        adh = ",".join(str(v) for v in sorted(set_of(td.adhesion(a, b))))
        out.append('  n%s -- n%s [label="{%s}"];' % (a, b, adh))
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# conversions

def induced_separations(td: TreeDecomposition) -> dict:
    """Directed tree edge -> the separation it induces: union of parts
    on the tail side against union of parts on the head side.  The
    collected set is nested (asserted)."""
    out = {}
    for a, b in td.edges:
        aside = 0
        for t in td.side_nodes(a, b):
            aside |= td.parts[t]
        bside = 0
        for t in td.side_nodes(b, a):
            bside |= td.parts[t]
        out[(a, b)] = Sep(aside, bside)
        out[(b, a)] = Sep(bside, aside)
    seps = list(out.values())
    for i in range(len(seps)):
        for j in range(i + 1, len(seps)):
            assert is_nested(seps[i], seps[j]), \
                "induced separations of a tree-decomposition must be nested"
    return out


def stree_of_treedec(td: TreeDecomposition) -> STree:
    if not td.edges:
        raise ValidationError("single-node decomposition induces no S-tree")
    return STree(td.edges, induced_separations(td))


def treedec_of_stree(st: STree, g: Graph) -> TreeDecomposition:
    """Parts are the regions the in-stars point at: intersection of the
    B-sides."""
    parts = {}
    for t in st.adj:
        p = g.vmask
        for s in st.in_star(t):
            p &= s.B
        parts[t] = p
    return TreeDecomposition(g, st.edges, parts)


def treedec_from_nested_set(g: Graph, nested) -> TreeDecomposition:
    """The tree-decomposition whose nodes are the consistent
    orientations of the nested set, parts being the regions their
    maximal elements point at; adjacent iff they differ on one
    separation."""
    seps = []
    for s in nested:
        c = canonical_orientation(s)
        if c.is_degenerate:
            raise ValidationError("degenerate separation in nested set")
        if c not in seps:
            seps.append(c)
    seps.sort(key=lambda s: (s.order,) + s.key())
    for i in range(len(seps)):
        for j in range(i + 1, len(seps)):
            if not is_nested(seps[i], seps[j]):
                raise ValidationError(
                    "separations cross: %r / %r" % (seps[i], seps[j]))

    def shadowed(u):
        # an orientation below both orientations of another member can
        # never point outward in a consistent orientation, so u bounds
        # no region; such u are always small here
        if not (u.is_small or u.is_cosmall):
            return False
        for y in seps:
            if y == u:
                continue
            for uo in (u, u.inv):
                if leq(uo, y) and leq(uo, y.inv):
                    return True
        return False

    flags = [shadowed(u) for u in seps]
    dropped = [u for u, f in zip(seps, flags) if f]
    seps = [u for u, f in zip(seps, flags) if not f]
    if not seps:
        return TreeDecomposition(g, [], {0: g.vmask})

    d = len(seps)
    orientations = []

    def rec(i, chosen):
        if i == d:
            orientations.append(tuple(chosen))
            return
        for o in (seps[i], seps[i].inv):
            # consistency against what is chosen: no u with u.inv < o
            # and no o.inv < u (distinct separations throughout)
            ok = True
            for u in chosen:
                if (lt(u.inv, o) and u.inv != o) or lt(o.inv, u):
                    ok = False
                    break
            if ok:
                chosen.append(o)
                rec(i + 1, chosen)
                chosen.pop()

    rec(0, [])
    if len(orientations) != d + 1:
        raise InvariantViolation(
            "nested set of %d separations gave %d consistent orientations"
            % (d, len(orientations)))
    parts = {}
    for idx, o in enumerate(orientations):
        p = g.vmask
        for s in o:
            p &= s.B
        parts[idx] = p
    edges = []
    for i in range(len(orientations)):
        for j in range(i + 1, len(orientations)):
            delta = [a for a, bsep in zip(orientations[i], orientations[j])
                     if a != bsep]
            if len(delta) == 1:
                edges.append((i, j))
    # shadowed members come back as pendant regions, so the output
    # induces the full input set: each is a small (A,V) with A inside
    # its shadower's separator, hence inside some part already built
    nxt = len(orientations)
    for u in dropped:
        small = u if u.is_small else u.inv
        host = None
        for idx in sorted(parts):
            if parts[idx] & small.A == small.A:
                host = idx
                break
        if host is None:
            raise InvariantViolation(
                "no part can host the shadowed member %r" % (u,))
        parts[nxt] = small.A
        edges.append((host, nxt))
        nxt += 1
    return TreeDecomposition(g, edges, parts)


# ---------------------------------------------------------------------------
# validation, location, refinement order

def validate_stree_over(st: STree, f: Family):
    """(ok, report): ok iff every node's in-star belongs to f; report
    lists the offending nodes with their stars."""
    report = []
    for t in sorted(st.adj):
        star = st.in_star(t)
        if not f.contains(star):
            report.append((t, star))
    return not report, report


def locate(o, st: STree):
    """The unique sink node when st's edges are oriented by o."""
    from .tangles import Orientation, Tangle
    if isinstance(o, Tangle):
        o = o.orientation
    sinks = []
    for t in st.adj:
        if all(o.contains(st.alpha[(u, t)]) for u in st.adj[t]):
            sinks.append(t)
    if len(sinks) != 1:
        raise ValidationError(
            "expected a unique sink, found %d" % len(sinks))
    return sinks[0]


def is_refinement(fine: TreeDecomposition, coarse: TreeDecomposition) -> bool:
    if fine.g != coarse.g:
        raise ValidationError("decompositions of different graphs")

    def sepset(td):
        out = set()
        for (a, b), s in induced_separations(td).items():
            out.add(canonical_orientation(s))
        return out

    return sepset(coarse) <= sepset(fine)


def alpha_order_preserving(st: STree) -> bool:
    """alpha preserves the natural ordering of directed tree edges:
    if edge e points toward edge f then alpha(e) <= alpha(f)."""
    for a, b in st.alpha:
        for c, dd in st.alpha:
            if (a, b) == (c, dd) or (a, b) == (dd, c):
                continue
            # (a,b) <= (c,dd) iff the a-side of ab is inside the c-side of cdd
            if a in st.side_nodes(c, dd) and dd not in st.side_nodes(a, b):
                if not leq(st.alpha[(a, b)], st.alpha[(c, dd)]):
                    return False
    return True


# ---------------------------------------------------------------------------
# irredundance surgery

def make_irredundant(st: STree, protected_leaves=(), family: Family = None):
    """Collapse duplicate alpha-images.

    Every separation in protected_leaves ends up at exactly one leaf
    edge and nowhere else; sibling subtrees presenting the same image to
    their common node are merged, keeping the side that holds a
    protected leaf (canonically first side otherwise).  If a family is
    given the tree is re-validated after every rewrite."""
    protected = []
    for p in protected_leaves:
        if p.is_degenerate:
            raise ContractError("degenerate separation cannot be protected")
        if p not in protected:
            protected.append(p)
    leaf_images = st.leaf_seps()
    for p in protected:
        if p not in leaf_images:
            raise ContractError(
                "protected separation %r is not a leaf separation" % (p,))

    adj = {t: list(ns) for t, ns in st.adj.items()}
    alpha = dict(st.alpha)
    fresh = max(adj) + 1

    def side(a, b):
        seen = {a}
        q = deque([a])
        while q:
            t = q.popleft()
            for u in adj[t]:
                if u != b and u not in seen:
                    seen.add(u)
                    q.append(u)
        return seen

    def contains_protected(nodes, skip=None):
        for (a, b), s in alpha.items():
            if s == skip or s not in protected:
                continue
            if a in nodes and b in nodes:
                return True
        return False

    def delete(nodes):
        for t in nodes:
            for u in adj.pop(t):
                if u not in nodes:
                    adj[u].remove(t)
        for a, b in list(alpha):
            if a in nodes or b in nodes:
                del alpha[(a, b)]

    def revalidate():
        if family is not None:
            tree = STree([e for e in _edge_list()], dict(alpha))
            ok, report = validate_stree_over(tree, family)
            if not ok:
                raise InvariantViolation(
                    "irredundance rewrite broke the family at %r"
                    % (report[:1],))

    def _edge_list():
        return [(a, b) for a in adj for b in adj[a] if a < b]

    def surgery(a, b, p):
        # replace the subtree hanging at a with a fresh leaf copy of p
        nonlocal fresh
        doomed = side(a, b)
        if contains_protected(doomed, skip=p):
            raise InvariantViolation(
                "removing duplicates of %r would delete another protected "
                "leaf" % (p,))
        delete(doomed)
        leaf = fresh
        fresh += 1
        adj[leaf] = [b]
        adj[b].append(leaf)
        adj[b].sort()
        alpha[(leaf, b)] = p
        alpha[(b, leaf)] = p.inv

    changed = True
    while changed:
        changed = False
        # sibling merge: two neighbours presenting the same image
        for t in sorted(adj):
            by_image = {}
            for u in adj[t]:
                by_image.setdefault(alpha[(u, t)], []).append(u)
            pair = None
            for img, us in sorted(by_image.items(),
                                  key=lambda kv: kv[0].key()):
                if len(us) > 1:
                    pair = (img, sorted(us))
                    break
            if pair is None:
                continue
            img, us = pair
            sides = {u: side(u, t) for u in us}
            holding = [u for u in us if contains_protected(sides[u])]
            if len(holding) > 1:
                raise InvariantViolation(
                    "two subtrees with image %r both hold protected leaves"
                    % (img,))
            keep = holding[0] if holding else us[0]
            for u in us:
                if u is not keep:
                    if contains_protected(sides[u]):
                        raise InvariantViolation(
                            "merge toward %r would delete a protected leaf"
                            % (img,))
                    delete(sides[u])
            changed = True
            revalidate()
            break
        if changed:
            continue
        # protected separations: one leaf copy each
        for p in protected:
            copies = sorted((a, b) for (a, b), s in alpha.items() if s == p)
            if len(copies) == 1:
                a, b = copies[0]
                if len(adj[a]) == 1:
                    continue
                surgery(a, b, p)
                changed = True
            else:
                # a copy whose tail swallows another copy can absorb it
                for a, b in copies:
                    tail = side(a, b)
                    rest = [e for e in copies if e != (a, b)]
                    if any(x in tail and y in tail for x, y in rest):
                        surgery(a, b, p)
                        changed = True
                        break
                else:
                    raise InvariantViolation(
                        "parallel copies of protected %r cannot be merged"
                        % (p,))
            if changed:
                revalidate()
                break

    out = STree(_edge_list(), alpha)
    for p in protected:
        copies = [(a, b) for (a, b), s in out.alpha.items() if s == p]
        if len(copies) != 1 or len(out.adj[copies[0][0]]) != 1:
            raise InvariantViolation(
                "protected %r did not end at a single leaf edge" % (p,))
    if not alpha_order_preserving(out):
        raise InvariantViolation("irredundant tree lost order preservation")
    return out


# ---------------------------------------------------------------------------
# duality search

def _check_standard(sys: SepSystem, f: Family):
    for u in bits(sys._trivial_bits):
        if not f.contains([sys.osep(u ^ 1)]):
            raise ContractError(
                "family does not force the trivial separation %r"
                % (sys.osep(u),))


def _stree_fixpoint(sys: SepSystem, f: Family):
    """Tree search for the coverage families.

    SOLV(j) holds when a valid tree fragment can hang behind osep(j),
    its root star being {osep(j).inv} plus images of already solved
    fragments.  Computed as a least fixpoint, event-driven: each newly
    solved separation is tested as the last member completing a
    singleton, pair, or triple for every still-unsolved target."""
    nor = sys.n_oriented
    if nor == 0:
        return None
    star = f.kind == TANGLE_STARS
    cov = cover_tables(sys)
    va, ea = cov.va, cov.ea
    vm, em = cov.vmask, cov.emask
    sp = cov.star_pair
    degbit = 0
    for i, s in enumerate(sys.seps):
        if s.is_degenerate:
            degbit |= 1 << (2 * i) | 1 << (2 * i + 1)

    solved = 0
    ua = 0  # union of va over solved
    ue = 0
    witness = {}
    q = deque()

    def solve(j, wit):
        nonlocal solved, ua, ue
        solved |= 1 << j
        ua |= va[j]
        ue |= ea[j]
        witness[j] = wit
        q.append(j)

    for u in range(nor):
        if f.contains([sys.osep(u)]):
            solve(u ^ 1, ())

    while q:
        w = q.popleft()
        for j in range(nor):
            if solved >> j & 1:
                continue
            ji = j ^ 1
            if star:
                if degbit >> j & 1:
                    continue
                if not sp[ji] >> w & 1:
                    continue  # osep(w) does not point at osep(j)
            if w != ji:
                pv = va[ji] | va[w]
                pe = ea[ji] | ea[w]
                if pv == vm and pe == em:
                    solve(j, (w,))
                    continue
            else:
                pv = va[ji]
                pe = ea[ji]
            if pv | ua != vm or pe | ue != em:
                continue
            zc = solved & ~(1 << ji) & ~(1 << w)
            if star:
                zc &= sp[ji] & sp[w]
            for v in bits(vm & ~pv):
                zc &= cov.amask_v[v]
                if not zc:
                    break
            if zc:
                for e in bits(em & ~pe):
                    zc &= cov.amask_e[e]
                    if not zc:
                        break
            if zc:
                z = (zc & -zc).bit_length() - 1
                solve(j, (w, z))

    even = ((1 << nor) - 1) // 3
    both = solved & (((solved & even) << 1) | ((solved >> 1) & even))
    if not both:
        return None
    top = (both & -both).bit_length() - 1

    import sys as _sys
    _sys.setrecursionlimit(max(_sys.getrecursionlimit(), nor + 500))
    counter = [0]
    edges = []
    alpha = {}

    def build(j):
        counter[0] += 1
        if counter[0] > TREE_NODE_CAP:
            raise SizeError("constructed tree exceeds %d nodes"
                            % TREE_NODE_CAP)
        t = counter[0]
        for w in witness[j]:
            c = build(w)
            edges.append((c, t))
            alpha[(c, t)] = sys.osep(w)
        return t

    a = build(top)
    b = build(top ^ 1)
    edges.append((a, b))
    alpha[(a, b)] = sys.osep(top)
    return STree(edges, alpha)


TASK_GUARD = 10 ** 5


def _stree_tasks(sys: SepSystem, f: Family):
    """Tree search for oracle families.

    A task is the star of boundary separations pointing into the region
    still to be decomposed.  Either the star itself belongs to f (the
    region becomes one node) or some separation splits it, sending each
    boundary member to the side it points across.  Splitting can revisit
    a boundary (the task graph has cycles), so solvability is computed
    as a least fixpoint over the reachable tasks, each explored once."""
    root = frozenset()
    splits = {}  # sig -> list of (i, t1, t2); None marks a family node
    queue = deque([root])
    seen = {root}
    while queue:
        sig = queue.popleft()
        if sig and f.contains([sys.osep(j) for j in sorted(sig)]):
            splits[sig] = None
            continue
        opts = []
        for i in range(sys.size):
            if 2 * i in sig or 2 * i + 1 in sig:
                continue
            s = sys.seps[i]
            si = s.inv
            ok = True
            for y in sig:
                ys = sys.osep(y)
                if not (lt(ys, s) or lt(ys, si)):
                    ok = False
                    break
            if not ok:
                continue
            s1 = frozenset(y for y in sig if lt(sys.osep(y), s))
            t1 = s1 | {2 * i + 1}
            t2 = (sig - s1) | {2 * i}
            opts.append((i, t1, t2))
            for t in (t1, t2):
                if t not in seen:
                    seen.add(t)
                    if len(seen) > TASK_GUARD:
                        raise SizeError(
                            "task search exceeded %d tasks" % TASK_GUARD)
                    queue.append(t)
        splits[sig] = opts

    # least fixpoint: family nodes are solved; a split solves its parent
    # once both halves are solved.  Cycles stay unsolved, as they must.
    parents = {}
    witness = {}
    work = deque()
    for sig, opts in splits.items():
        if opts is None:
            witness[sig] = None
            work.append(sig)
            continue
        for opt in opts:
            _, t1, t2 = opt
            parents.setdefault(t1, []).append((sig, opt))
            parents.setdefault(t2, []).append((sig, opt))
    while work:
        done = work.popleft()
        for sig, opt in parents.get(done, ()):
            if sig in witness:
                continue
            _, t1, t2 = opt
            if t1 in witness and t2 in witness:
                witness[sig] = opt
                work.append(sig)
    if root not in witness:
        return None

    counter = [0]
    edges = []
    alpha = {}
    import sys as _sys
    _sys.setrecursionlimit(max(_sys.getrecursionlimit(), 20000))

    def mat(sig):
        # witnesses were recorded bottom-up, so this recursion is founded
        counter[0] += 1
        if counter[0] > TREE_NODE_CAP:
            raise SizeError("constructed tree exceeds %d nodes"
                            % TREE_NODE_CAP)
        wit = witness[sig]
        if wit is None:
            t = counter[0]
            return {j: t for j in sig}
        i, t1, t2 = wit
        counter[0] -= 1  # split steps spend no node of their own
        at1 = mat(t1)
        at2 = mat(t2)
        a = at1.pop(2 * i + 1)
        b = at2.pop(2 * i)
        edges.append((b, a))
        alpha[(b, a)] = sys.osep(2 * i + 1)
        at1.update(at2)
        return at1

    mat(root)
    return STree(edges, alpha)


def find_stree_over(sys: SepSystem, f: Family):
    """An S-tree over f, or None when every orientation route is blocked
    (equivalently: an f-tangle exists).  f must be standard."""
    if f.sys is not sys:
        raise ContractError("family belongs to a different system")
    _check_standard(sys, f)
    if f.kind in (TANGLE_STARS, TANGLE_TRIPLES):
        st = _stree_fixpoint(sys, f)
    else:
        st = _stree_tasks(sys, f)
    if st is not None:
        ok, report = validate_stree_over(st, f)
        if not ok:
            raise InvariantViolation(
                "search produced a tree failing its own family at %r"
                % (report[:1],))
    return st


# ---------------------------------------------------------------------------
# widths

def branch_width(td: TreeDecomposition):
    """Largest order among the induced separations, provided every node
    star is a covering star of at most three separations; otherwise the
    decomposition validates over no coverage family at all and the
    width is INFINITY."""
    if not td.edges:
        return INFINITY
    from .tangles import edge_cover_mask
    g = td.g
    ind = induced_separations(td)
    st = STree(td.edges, ind)
    em = (1 << g.m) - 1
    for t in st.adj:
        stt = st.in_star(t)
        if len(stt) > 3 or not is_star(stt):
            return INFINITY
        av = 0
        ae = 0
        for s in stt:
            av |= s.A
            ae |= edge_cover_mask(g, s.A)
        if av != g.vmask or ae != em:
            return INFINITY
    return max(s.order for s in ind.values())


def oracle_star_family(sys: SepSystem, kind: str) -> Family:
    """Stars that no surviving orientation extends.

    The survivors are the regular avoiders of the base family; a star
    none of them contains marks a region 'too small' to hold one.  A
    sink argument gives both duality directions exactly: a tree over
    this family locates a sink inside any survivor (contradiction), and
    the maximal elements of any orientation avoiding this family form a
    star, whose extending survivor the orientation must equal.
    Enumerates the survivors up front, so desk scale only."""
    from .tangles import custom_family, enumerate_tangles, is_consistent
    from .tangles import (BLOCK_ORACLE, PROFILE_TRIPLES, block_oracle,
                          profile_triples)
    builders = {PROFILE_TRIPLES: profile_triples, BLOCK_ORACLE: block_oracle}
    base = builders[kind](sys)
    survivors = [t.obits for t in enumerate_tangles(sys, base)
                 if is_consistent(t.orientation)["regular"]]

    def pred(ms):
        if not is_star(ms):
            return False
        want = 0
        for m in ms:
            want |= 1 << sys.oid_of(m)
        return all(ob & want != want for ob in survivors)

    return custom_family(sys, pred)


def width_over_family(g: Graph, kind: str) -> int:
    """Least width over all tree-decompositions for the family kind:
    the first k whose separation system carries a tree, minus one."""
    from .tangles import (BLOCK_ORACLE, PROFILE_TRIPLES, tangle_stars,
                          tangle_triples)
    builders = {
        TANGLE_STARS: tangle_stars,
        TANGLE_TRIPLES: tangle_triples,
        PROFILE_TRIPLES: None,
        BLOCK_ORACLE: None,
    }
    if kind not in builders:
        raise ContractError("no width search for family kind %r" % (kind,))
    # systems stabilize at order n+1 (every separator allowed), so a
    # search failing there fails forever: the width is infinite.  That
    # happens: a single edge has covering stars at no order, since the
    # degenerate separation is no star member.
    for k in range(1, g.n + 2):
        sys = make_system(g, k)
        if builders[kind] is not None:
            fam = builders[kind](sys)
        else:
            fam = oracle_star_family(sys, kind)
        if find_stree_over(sys, fam) is not None:
            return k - 1
    return INFINITY
