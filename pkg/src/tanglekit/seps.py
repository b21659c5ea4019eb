"""Separation universe of a graph: oriented separations, the partial
order, corners, classification predicates, and the shifting map.

A separation is a pair of vertex masks (A, B) with A
covering V together with B and no edge running between A-only and B-only
vertices.  (A, B) is read as pointing toward B.  The involution swaps the
two sides and reverses the order relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import ContractError, SizeError, ValidationError
from .graph import Graph, bits, components, set_key, set_of

COMPONENT_CAP = 20


@dataclass(frozen=True, slots=True)
class Sep:
    """One oriented separation.  Deliberately not a tuple subclass so the
    built-in comparison can never shadow the separation order."""

    A: int
    B: int

    @property
    def inv(self) -> "Sep":
        return Sep(self.B, self.A)

    @property
    def separator(self) -> int:
        return self.A & self.B

    @property
    def order(self) -> int:
        return (self.A & self.B).bit_count()

    @property
    def is_small(self) -> bool:
        # A union B = V, so A subset of B means B is everything
        return self.A & ~self.B == 0

    @property
    def is_cosmall(self) -> bool:
        return self.B & ~self.A == 0

    @property
    def is_degenerate(self) -> bool:
        return self.A == self.B

    def key(self) -> tuple:
        return (set_key(self.A), set_key(self.B))

    def __repr__(self):
        return "Sep(%s,%s)" % (sorted(set_of(self.A)), sorted(set_of(self.B)))


def leq(x: Sep, y: Sep) -> bool:
    return x.A & ~y.A == 0 and y.B & ~x.B == 0


def lt(x: Sep, y: Sep) -> bool:
    return leq(x, y) and x != y


def join(x: Sep, y: Sep) -> Sep:
    return Sep(x.A | y.A, x.B & y.B)


def meet(x: Sep, y: Sep) -> Sep:
    return Sep(x.A & y.A, x.B | y.B)


def corner(x: Sep, y: Sep):
    return join(x, y), meet(x, y)


def is_nested(x: Sep, y: Sep) -> bool:
    return leq(x, y) or leq(y, x) or leq(x, y.inv) or leq(y.inv, x)


def is_star(members) -> bool:
    """Star: non-degenerate oriented separations pointing pairwise away.

    For two orientations of the same separation the pairwise condition is
    read as requiring them to be comparable, so {s, s*} only forms a star
    when s is small or cosmall.
    """
    ms = list(members)
    for s in ms:
        if s.is_degenerate:
            return False
    for i, u in enumerate(ms):
        for w in ms[i + 1:]:
            if u == w:
                continue
            if u == w.inv:
                if not (leq(u, w) or leq(w, u)):
                    return False
            elif not leq(u, w.inv):
                return False
    return True


def is_valid_sep(g: Graph, s: Sep) -> bool:
    if (s.A | s.B) != g.vmask:
        return False
    a_only = s.A & ~s.B
    b_only = s.B & ~s.A
    return all(g.adj[v] & b_only == 0 for v in bits(a_only))


def canonical_orientation(s: Sep) -> Sep:
    return s if set_key(s.A) <= set_key(s.B) else s.inv


def sep_to_json(s: Sep) -> dict:
    return {"A": sorted(set_of(s.A)), "B": sorted(set_of(s.B))}


def sep_from_json(obj) -> Sep:
    try:
        a = obj["A"]
        b = obj["B"]
    except (TypeError, KeyError):
        raise ValidationError("separation object needs A and B lists")
    from .graph import mask_of

    return Sep(mask_of(a), mask_of(b))


class SepSystem:
    """All separations of g of order < k, canonically ordered.

    Oriented separations are addressed by integer ids: separation i
    contributes ids 2i (canonical orientation) and 2i+1 (its inverse).
    Most of the combinatorics downstream runs on big-integer masks over
    these ids.
    """

    def __init__(self, g: Graph, k: int, seps):
        self.g = g
        self.k = k
        self.seps = tuple(seps)
        self.index = {}
        for i, s in enumerate(self.seps):
            self.index[(s.A, s.B)] = 2 * i
            self.index.setdefault((s.B, s.A), 2 * i + 1)

    @property
    def size(self) -> int:
        return len(self.seps)

    @property
    def n_oriented(self) -> int:
        return 2 * len(self.seps)

    def osep(self, oid: int) -> Sep:
        s = self.seps[oid >> 1]
        return s.inv if oid & 1 else s

    def oid_of(self, s: Sep) -> int:
        try:
            return self.index[(s.A, s.B)]
        except KeyError:
            raise ValidationError("separation %r not in S_%d" % (s, self.k))

    def __contains__(self, s: Sep) -> bool:
        return (s.A, s.B) in self.index

    @cached_property
    def _side_masks(self):
        n = self.g.n
        amask = [0] * n
        not_bmask = [0] * n
        for oid in range(self.n_oriented):
            s = self.osep(oid)
            bit = 1 << oid
            for v in bits(s.A):
                amask[v] |= bit
            nb = self.g.vmask & ~s.B
            for v in bits(nb):
                not_bmask[v] |= bit
        return amask, not_bmask

    @cached_property
    def upsets(self):
        """upsets[j] = bitmask of oriented ids x with osep(j) <= osep(x)."""
        amask, not_bmask = self._side_masks
        all_ids = (1 << self.n_oriented) - 1
        out = []
        for oid in range(self.n_oriented):
            s = self.osep(oid)
            acc = all_ids
            for v in bits(s.A):
                acc &= amask[v]
            for v in bits(self.g.vmask & ~s.B):
                acc &= not_bmask[v]
            out.append(acc)
        return out

    def up_oids(self, s: Sep):
        return bits(self.upsets[self.oid_of(s)])

    def classify(self, s: Sep) -> dict:
        oid = self.oid_of(s)
        small = s.is_small
        cosmall = s.is_cosmall
        degenerate = s.is_degenerate
        return {
            "small": small,
            "cosmall": cosmall,
            "degenerate": degenerate,
            "trivial": self._is_trivial_oid(oid),
            "cotrivial": self._is_trivial_oid(oid ^ 1),
        }

    @cached_property
    def _trivial_bits(self) -> int:
        """Bitmask over oriented ids of the trivial orientations.

        x is trivial when both orientations of some other separation lie
        strictly above it; with the strict upset in hand that is one mask
        intersection per id.
        """
        evens = 0
        for i in range(self.size):
            evens |= 1 << (2 * i)
        out = 0
        for oid in range(self.n_oriented):
            u = self.upsets[oid] & ~(1 << oid) & ~(1 << (oid ^ 1))
            partner = ((u & evens) << 1) | ((u & ~evens) >> 1)
            if u & partner:
                out |= 1 << oid
        return out

    def _is_trivial_oid(self, oid: int) -> bool:
        return bool(self._trivial_bits >> oid & 1)

    def is_trivial(self, s: Sep) -> bool:
        return self._is_trivial_oid(self.oid_of(s))

    def json(self):
        return [sep_to_json(s) for s in self.seps]


def make_system(g: Graph, k: int) -> SepSystem:
    """Enumerate every separation of order < k.

    Separator candidates are the vertex sets X with |X| < k; the two sides
    are X plus a union of components of G - X.  Every separation arises
    this way from its own separator, so the sweep is exhaustive.
    """
    if k < 1:
        raise ValidationError("k must be at least 1, got %d" % k)
    found = set()
    for size in range(min(k, g.n + 1)):
        for xs in itertools.combinations(range(g.n), size):
            x = 0
            for v in xs:
                x |= 1 << v
            comps = components(g, x)
            if len(comps) > COMPONENT_CAP:
                raise SizeError(
                    "separator %s leaves %d components (cap %d)"
                    % (sorted(xs), len(comps), COMPONENT_CAP))
            for pick in range(1 << len(comps)):
                a = x
                b = x
                for i, c in enumerate(comps):
                    if pick >> i & 1:
                        a |= c
                    else:
                        b |= c
                s = Sep(a, b)
                if s.separator == x:
                    found.add(canonical_orientation(s))
    seps = sorted(found, key=lambda s: (s.order,) + s.key())
    return SepSystem(g, k, seps)


def universe(g: Graph) -> SepSystem:
    """The full separation universe (no order bound; separator can be V)."""
    return make_system(g, g.n + 1)


def shift_sep(x: Sep, r: Sep, s: Sep) -> Sep:
    """The shift of x under the map sending y >= r to y v s.

    Prefers the direct rule when both orientations of x sit above r; the
    reverse orientation is shifted by flipping, applying, flipping back.
    """
    if x == r.inv:
        raise ContractError("shift undefined on the inverse of r")
    if leq(r, x):
        return join(x, s)
    if leq(r, x.inv):
        return join(x.inv, s).inv
    raise ContractError("%r has no orientation above %r" % (x, r))


def emulates(s: Sep, r: Sep, sys: SepSystem) -> bool:
    """s emulates r in S_k: r <= s and joining s onto anything above r
    (other than r inverse) stays inside S_k."""
    if not leq(r, s):
        return False
    rinv_oid = sys.oid_of(r) ^ 1
    for oid in bits(sys.upsets[sys.oid_of(r)]):
        if oid == rinv_oid:
            continue
        t = sys.osep(oid)
        if join(t, s).order >= sys.k:
            return False
    return True


def linked_to(s: Sep, r: Sep, sys: SepSystem) -> bool:
    """Joining s onto anything above r never raises the order (checked
    over sys; the tiny-graph property tests re-check over the full
    universe)."""
    if not leq(r, s):
        return False
    for oid in bits(sys.upsets[sys.oid_of(r)]):
        x = sys.osep(oid)
        if join(x, s).order > x.order:
            return False
    return True
