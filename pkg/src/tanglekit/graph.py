"""Graph substrate: immutable graphs on dense vertex indices with bitmask
vertex sets.

Vertex sets are plain ints used as bitmasks throughout the package; the
helpers here (mask_of, bits, set_of) are the only sanctioned way to cross
between masks and Python sets so that everything stays deterministic.
"""

from __future__ import annotations

import itertools
import random

from .errors import ParseError, SizeError, ValidationError

AUTOMORPHISM_BOUND = 10


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int):
    """Iterate set bit positions in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> frozenset:
    return frozenset(bits(mask))


def set_key(mask: int) -> tuple:
    """Sorted-tuple key for canonical orderings of vertex sets.

    Note this is lexicographic on the sorted vertex lists, not numeric on
    the masks: {0,3} sorts before {1,2} even though 9 > 6.
    """
    return tuple(bits(mask))


class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "adj", "vmask")

    def __init__(self, n: int, edges):
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValidationError("loop edge %d-%d" % (u, v))
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError("edge endpoint out of range: %d-%d with n=%d" % (u, v, n))
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges = tuple(sorted(norm))
        adj = [0] * n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj = tuple(adj)
        self.vmask = (1 << n) - 1

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbours(self, mask: int) -> int:
        """Union of adjacencies of the vertices in mask, minus mask itself."""
        out = 0
        for v in bits(mask):
            out |= self.adj[v]
        return out & ~mask

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return "Graph(n=%d, m=%d)" % (self.n, self.m)


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def load_graph(text: str) -> Graph:
    """Parse an edge-list document.

    Lines are "u v" pairs of nonnegative integers.  An optional first line
    "n <count>" declares the vertex count (otherwise max index + 1 is
    used).  Blank lines and "#" comments are ignored.  Duplicate edges
    collapse; loops are rejected.
    """
    declared = None
    pairs = []
    seen_edge_line = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if seen_edge_line or declared is not None:
                raise ParseError("line %d: vertex count must come first" % lineno)
            if len(parts) != 2:
                raise ParseError("line %d: expected 'n <count>'" % lineno)
            try:
                declared = int(parts[1])
            except ValueError:
                raise ParseError("line %d: bad vertex count %r" % (lineno, parts[1]))
            if declared < 0:
                raise ParseError("line %d: negative vertex count" % lineno)
            continue
        if len(parts) != 2:
            raise ParseError("line %d: expected 'u v', got %r" % (lineno, raw))
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("line %d: non-integer endpoint in %r" % (lineno, raw))
        if u < 0 or v < 0:
            raise ParseError("line %d: negative vertex in %r" % (lineno, raw))
        seen_edge_line = True
        pairs.append((u, v))
    n = declared
    if n is None:
        n = 1 + max((max(u, v) for u, v in pairs), default=-1)
    return Graph(n, pairs)


def dump_graph(g: Graph) -> str:
    lines = ["n %d" % g.n]
    lines.extend("%d %d" % e for e in g.edges)
    return "\n".join(lines) + "\n"


def components(g: Graph, removed: int):
    """Connected components of G - removed as masks, sorted by lowest bit."""
    left = g.vmask & ~removed
    out = []
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            grow = g.neighbours(comp) & left & ~comp
            frontier = grow
            comp |= grow
        out.append(comp)
        left &= ~comp
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g, 0)) == 1


def automorphisms(g: Graph, bound: int = AUTOMORPHISM_BOUND):
    """Full automorphism group by filtered brute force.

    Returns vertex permutations as tuples (perm[v] is the image of v).
    Guarded by `bound` because canonicity checks only ever run at desk
    scale; refusing loudly beats silently checking a subgroup.
    """
    if g.n > bound:
        raise SizeError("automorphism search limited to %d vertices, got %d" % (bound, g.n))
    degs = [g.degree(v) for v in range(g.n)]
    by_degree = {}
    for v in range(g.n):
        by_degree.setdefault(degs[v], []).append(v)
    # only permute within degree classes
    classes = sorted(by_degree.values())
    found = []
    for images in itertools.product(*[itertools.permutations(c) for c in classes]):
        perm = [None] * g.n
        for cls, img in zip(classes, images):
            for src, dst in zip(cls, img):
                perm[src] = dst
        if all(g.has_edge(perm[u], perm[v]) for u, v in g.edges):
            found.append(tuple(perm))
    found.sort()
    _assert_group(found, g.n)
    return found


def _assert_group(perms, n):
    idx = set(perms)
    assert tuple(range(n)) in idx
    for p in perms:
        inv = [0] * n
        for i, pi in enumerate(p):
            inv[pi] = i
        assert tuple(inv) in idx, "automorphism set not closed under inverse"
    # closure under composition; group axioms make this the full check
    for p in perms:
        for q in perms:
            assert tuple(p[q[i]] for i in range(n)) in idx, "not closed under composition"


def apply_perm_mask(perm, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


def torso(g: Graph, part: int, adhesions):
    """Induced subgraph on part plus a clique on every adhesion set.

    Vertices are re-indexed in ascending order; returns (graph, index_map)
    where index_map[new] = old so callers can translate back.
    """
    for a in adhesions:
        if a & ~part:
            raise ValidationError("adhesion %s not inside part %s" % (sorted(set_of(a)), sorted(set_of(part))))
    index_map = list(bits(part))
    rank = {old: new for new, old in enumerate(index_map)}
    edges = set()
    for u, v in g.edges:
        if part >> u & 1 and part >> v & 1:
            edges.add((rank[u], rank[v]))
    for a in adhesions:
        edges.update(itertools.combinations([rank[v] for v in bits(a)], 2))
    return Graph(len(index_map), edges), index_map


def random_connected(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    """Connected G(n, p) sample; resamples until connected."""
    while True:
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        g = Graph(n, edges)
        if is_connected(g):
            return g
