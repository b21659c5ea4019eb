"""Independent reference implementations the tests compare against.

Everything here recomputes results straight from the definitions with
set arithmetic and exhaustive loops, on purpose avoiding the package's
own search machinery, upset tables and incremental checkers.  Slow is
fine; these run at desk scale only.
"""

import itertools
from functools import lru_cache

import numpy as np

from tanglekit.graph import Graph, is_connected
from tanglekit.seps import Sep, canonical_orientation, make_system


def oleq(x: Sep, y: Sep) -> bool:
    return x.A & ~y.A == 0 and y.B & ~x.B == 0


# ---------------------------------------------------------------------------
# graph corpora

@lru_cache(maxsize=None)
def graph_classes(n: int, connected_only: bool = True):
    """One representative per isomorphism class of graphs on n vertices.

    Walks all edge masks in increasing order; the first mask of each
    orbit is the representative and the whole orbit is marked seen, so
    no per-graph canonical form is ever needed.
    """
    pairs = list(itertools.combinations(range(n), 2))
    idx = {p: i for i, p in enumerate(pairs)}
    tables = []
    for perm in itertools.permutations(range(n)):
        tables.append([idx[tuple(sorted((perm[u], perm[v])))]
                       for u, v in pairs])
    seen = set()
    reps = []
    for mask in range(1 << len(pairs)):
        if mask in seen:
            continue
        orbit = set()
        for tab in tables:
            img = 0
            m = mask
            while m:
                b = m & -m
                img |= 1 << tab[b.bit_length() - 1]
                m ^= b
            orbit.add(img)
        seen.update(orbit)
        g = Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        if not connected_only or is_connected(g):
            reps.append(g)
    return tuple(reps)


def small_connected_corpus(max_n: int = 6):
    out = []
    for n in range(1, max_n + 1):
        out.extend(graph_classes(n))
    return out


# ---------------------------------------------------------------------------
# separations from scratch

def naive_seps(g: Graph, k: int):
    """Every separation of order < k by brute force over all (A,B)
    with A ∪ B = V (three states per vertex), as a canonical set."""
    out = set()
    for states in itertools.product((0, 1, 2), repeat=g.n):
        a = b = 0
        for v, st in enumerate(states):
            if st != 1:
                a |= 1 << v
            if st != 0:
                b |= 1 << v
        if bin(a & b).count("1") >= k:
            continue
        crossing = False
        for u, v in g.edges:
            # valid iff every edge lies inside A or inside B
            in_a = (a >> u & 1) and (a >> v & 1)
            in_b = (b >> u & 1) and (b >> v & 1)
            if not in_a and not in_b:
                crossing = True
                break
        if not crossing:
            out.add(canonical_orientation(Sep(a, b)))
    return out


def is_star_oracle(members) -> bool:
    ms = []
    for s in members:
        if s not in ms:
            ms.append(s)
    for s in ms:
        if s.is_degenerate:
            return False
    for x, y in itertools.permutations(ms, 2):
        if y == x.inv:
            # only comparable orientations point away from each other
            if not (oleq(x, x.inv) or oleq(x.inv, x)):
                return False
        elif not oleq(x, y.inv):
            return False
    return True


# ---------------------------------------------------------------------------
# tangles from scratch

def _cover_masks(g: Graph, ori):
    edges = list(g.edges)
    vc, ec = [], []
    for x in ori:
        e = 0
        for ei, (u, v) in enumerate(edges):
            if (1 << u | 1 << v) & ~x.A == 0:
                e |= 1 << ei
        vc.append(x.A)
        ec.append(e)
    return vc, ec, (1 << len(edges)) - 1


def consistent_words(sys, cap: int = 20):
    """Consistent orientation words of the system, straight from the
    pairwise definition.

    Consistency is evaluated as per-word forbidden bit patterns so the
    full word space fits through numpy; degenerate separations are
    pinned to their stored orientation.
    """
    seps = sys.seps
    m = len(seps)
    if m > cap:
        raise ValueError("word space too large: %d separations" % m)
    ori = [(s, s.inv) for s in seps]
    words = np.arange(1 << m, dtype=np.uint32)
    alive = np.ones(1 << m, dtype=bool)
    for i in range(m):
        if seps[i].is_degenerate:
            alive &= (words >> i) & 1 == 0
    for i in range(m):
        for j in range(i + 1, m):
            for a in (0, 1):
                for b in (0, 1):
                    x, y = ori[i][a], ori[j][b]
                    if (oleq(x.inv, y) and x.inv != y) or \
                       (oleq(y.inv, x) and y.inv != x):
                        mm = np.uint32(1 << i | 1 << j)
                        pp = np.uint32(a << i | b << j)
                        alive &= (words & mm) != pp
    return [int(w) for w in np.nonzero(alive)[0]], ori


def naive_tangle_words(g: Graph, k: int, stars: bool = False,
                       cap: int = 20):
    """All tangle orientation words by filtering every one of the
    2^|S_k| orientations against the raw definitions: the cover test
    runs on the few consistent survivors."""
    sys = make_system(g, k)
    seps = sys.seps
    m = len(seps)
    survivors, ori = consistent_words(sys, cap)
    flat = [ori[i][f] for i in range(m) for f in (0, 1)]
    vc, ec, em = _cover_masks(g, flat)
    triples = list(itertools.combinations_with_replacement(range(m), 3))
    out = set()
    for w in survivors:
        pick = [2 * i + (w >> i & 1) for i in range(m)]
        bad = False
        for i, j, l in triples:
            pi, pj, pl = pick[i], pick[j], pick[l]
            if vc[pi] | vc[pj] | vc[pl] != g.vmask:
                continue
            if ec[pi] | ec[pj] | ec[pl] != em:
                continue
            if stars and not is_star_oracle(
                    {flat[pi], flat[pj], flat[pl]}):
                continue
            bad = True
            break
        if not bad:
            out.add(w)
    return out, sys


def naive_width(g: Graph, stars: bool = True):
    """Largest k carrying a tangle, scanned upward; the duality reading
    of the least tree width."""
    for k in range(1, g.n + 2):
        words, _ = naive_tangle_words(g, k, stars=stars, cap=22)
        if not words:
            return k - 1
    return float("inf")


def naive_blocks(g: Graph, k: int):
    """Maximal (<k)-inseparable vertex sets of size >= k, by testing
    every subset against every low-order separation."""
    seps = [s for s in naive_seps(g, k)]
    insep = []
    for size in range(k, g.n + 1):
        for comb in itertools.combinations(range(g.n), size):
            bm = 0
            for v in comb:
                bm |= 1 << v
            if any(bm & s.A & ~s.B and bm & s.B & ~s.A for s in seps):
                continue
            insep.append(bm)
    return sorted(b for b in insep
                  if not any(o != b and o & b == b for o in insep))


def naive_profile_words(g: Graph, k: int, cap: int = 18):
    """Regular consistent orientations with no pair u, w whose inverse
    corner meet(u*, w*) is also oriented inward."""
    sys = make_system(g, k)
    survivors, ori = consistent_words(sys, cap)
    m = sys.size
    out = set()
    for w in survivors:
        members = [ori[i][w >> i & 1] for i in range(m)]
        if any(x.is_cosmall and not x.is_degenerate for x in members):
            continue
        memset = set(members)
        bad = False
        for u, v in itertools.combinations(members, 2):
            third = Sep(u.inv.A & v.inv.A, u.inv.B | v.inv.B)
            if third in memset:
                bad = True
                break
        if not bad:
            out.add(w)
    return out, sys


def naive_profile_width(g: Graph):
    for k in range(1, g.n + 2):
        words, _ = naive_profile_words(g, k)
        if not words:
            return k - 1
    return float("inf")


def naive_block_width(g: Graph):
    for k in range(1, g.n + 2):
        if not naive_blocks(g, k):
            return k - 1
    return float("inf")
