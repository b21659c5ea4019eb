"""Orientations of a separation system, avoidance families, F-tangles.

Everything here runs on big-integer masks over oriented-separation ids.
The conflict tables below turn "is this partial orientation still
consistent" into a single AND per added member, which is what makes the
backtracking enumeration bearable on the larger test graphs.
"""

from __future__ import annotations

import sys as _sys
from dataclasses import dataclass
from functools import cached_property

from .errors import SizeError, ValidationError
from .graph import Graph, bits
from .seps import Sep, SepSystem, is_star, join, leq, meet

NODE_GUARD = 10 ** 7

TANGLE_TRIPLES = "TANGLE_TRIPLES"
TANGLE_STARS = "TANGLE_STARS"
PROFILE_TRIPLES = "PROFILE_TRIPLES"
BLOCK_ORACLE = "BLOCK_ORACLE"
CUSTOM = "CUSTOM"


class Orientation:
    """One orientation of every separation in a system.

    word packs one flag per separation (bit i set means separation i is
    taken against its stored orientation); obits is the same choice as a
    mask over oriented ids, the form all the mask machinery wants.
    """

    __slots__ = ("sys", "word", "obits")

    def __init__(self, sys: SepSystem, word: int):
        if word >> sys.size:
            raise ValidationError("orientation word wider than the system")
        self.sys = sys
        self.word = word
        ob = 0
        for i in range(sys.size):
            ob |= 1 << (2 * i + (word >> i & 1))
        self.obits = ob

    def members(self) -> list:
        return [self.sys.osep(j) for j in bits(self.obits)]

    def contains(self, s: Sep) -> bool:
        return bool(self.obits >> self.sys.oid_of(s) & 1)

    def json(self) -> dict:
        return {"bits": [self.word >> i & 1 for i in range(self.sys.size)]}

    def __eq__(self, other):
        return (isinstance(other, Orientation)
                and self.sys is other.sys and self.word == other.word)

    def __hash__(self):
        return hash((id(self.sys), self.word))

    def __repr__(self):
        chosen = [repr(s) for s in self.members()]
        return "Orientation{%s}" % ", ".join(chosen)


def orientation_from_json(sys: SepSystem, data: dict) -> Orientation:
    bits_ = data["bits"]
    if len(bits_) != sys.size:
        raise ValidationError("orientation length %d, system has %d"
                              % (len(bits_), sys.size))
    word = 0
    for i, b in enumerate(bits_):
        if b not in (0, 1):
            raise ValidationError("orientation bits must be 0/1")
        word |= b << i
    return Orientation(sys, word)


def orientation_of_members(sys: SepSystem, members) -> Orientation:
    """Build the full orientation containing the given oriented seps.
    Fails unless every separation of the system is covered exactly once."""
    flags = {}
    for s in members:
        oid = sys.oid_of(s)
        i = oid >> 1
        f = oid & 1
        if flags.setdefault(i, f) != f:
            raise ValidationError("both orientations of %r supplied" % (s,))
        flags[i] = f
    if len(flags) != sys.size:
        raise ValidationError("%d of %d separations oriented"
                              % (len(flags), sys.size))
    word = 0
    for i, f in flags.items():
        word |= f << i
    return Orientation(sys, word)


# ---------------------------------------------------------------------------
# consistency / regularity

def _build_conflicts(sys: SepSystem):
    # bad[j]: oriented ids w such that {osep(w), osep(j)} breaks
    # consistency (some r < s with the r-side flipped); by the antitone
    # involution both violation roles collapse to the same upset.
    # reg_bad[j] keeps bit j itself: a cosmall member already breaks
    # regularity on its own.
    bad = []
    reg_bad = []
    for j in range(sys.n_oriented):
        up_inv = sys.upsets[j ^ 1]
        b = up_inv & ~(1 << j) & ~(1 << (j ^ 1))
        rb = up_inv & ~(1 << (j ^ 1))
        if sys.seps[j >> 1].is_degenerate:
            rb &= ~(1 << j)
        bad.append(b)
        reg_bad.append(rb)
    return bad, reg_bad


def conflict_masks(sys: SepSystem):
    try:
        return sys._conflicts
    except AttributeError:
        sys._conflicts = _build_conflicts(sys)
        return sys._conflicts


def is_consistent(o: Orientation) -> dict:
    bad, reg_bad = conflict_masks(o.sys)
    consistent = True
    regular = True
    for j in bits(o.obits):
        if o.obits & bad[j]:
            consistent = False
        if o.obits & reg_bad[j]:
            regular = False
    if regular:
        assert consistent, "regularity must imply consistency"
    return {"consistent": consistent, "regular": regular}


# ---------------------------------------------------------------------------
# coverage tables

def edge_cover_mask(g: Graph, a: int) -> int:
    """Mask of edges with both endpoints inside the vertex mask a."""
    cov = 0
    for idx, (u, v) in enumerate(g.edges):
        if a >> u & 1 and a >> v & 1:
            cov |= 1 << idx
    return cov


class _Cover:
    """Per-system tables for the coverage test (does low-side union hit
    every vertex and every edge) plus reverse masks used to complete a
    partial triple in O(missing) big-int ANDs."""

    def __init__(self, sys: SepSystem):
        g = sys.g
        self.vmask = g.vmask
        self.emask = (1 << g.m) - 1
        self.va = []
        self.ea = []
        for j in range(sys.n_oriented):
            a = sys.osep(j).A
            self.va.append(a)
            self.ea.append(edge_cover_mask(g, a))
        self.amask_v = [0] * g.n
        self.amask_e = [0] * max(g.m, 1)
        for j in range(sys.n_oriented):
            for v in bits(self.va[j]):
                self.amask_v[v] |= 1 << j
            for e in bits(self.ea[j]):
                self.amask_e[e] |= 1 << j
        # star_pair[j]: w forming a star with j (w points at j), degenerate out
        deg = 0
        for i, s in enumerate(sys.seps):
            if s.is_degenerate:
                deg |= 1 << (2 * i) | 1 << (2 * i + 1)
        even = ((1 << sys.n_oriented) - 1) // 3 if sys.size else 0
        self.star_pair = []
        for j in range(sys.n_oriented):
            s = sys.osep(j)
            if s.is_degenerate:
                self.star_pair.append(0)
                continue
            up = sys.upsets[j]
            down_inv = ((up & even) << 1) | ((up >> 1) & even)
            if not (s.is_small or s.is_cosmall):
                # literal leq would admit the partner orientation, but
                # {s, s*} is only a star when the two are comparable
                down_inv &= ~(1 << (j ^ 1))
            self.star_pair.append(down_inv & ~deg)


def cover_tables(sys: SepSystem) -> _Cover:
    try:
        return sys._cover
    except AttributeError:
        sys._cover = _Cover(sys)
        return sys._cover


# ---------------------------------------------------------------------------
# avoidance families

@dataclass(frozen=True)
class Family:
    """An avoidance family over a fixed system.

    extras are oriented separations whose singleton stars belong to the
    family on top of the base kind; closure=True additionally admits
    every singleton {x} with some extra below x.
    """

    kind: str
    sys: SepSystem
    extras: tuple = ()
    closure: bool = False
    predicate: object = None

    def with_extras(self, extras, closure: bool = False) -> "Family":
        return Family(self.kind, self.sys, tuple(extras), closure,
                      self.predicate)

    def _extra_singleton(self, x: Sep) -> bool:
        for e in self.extras:
            if x == e or (self.closure and leq(e, x)):
                return True
        return False

    @cached_property
    def _extra_oid_mask(self) -> int:
        m = 0
        for e in self.extras:
            oid = self.sys.oid_of(e)
            m |= self.sys.upsets[oid] if self.closure else 1 << oid
        return m

    def contains(self, subset) -> bool:
        ms = list(subset)
        if not ms:
            return False
        if any(s not in self.sys for s in ms):
            # stars reaching outside the system are never members
            return False
        if len(ms) == 1 and self._extra_singleton(ms[0]):
            return True
        if self.kind in (TANGLE_TRIPLES, TANGLE_STARS):
            if len(ms) > 3:
                return False
            if self.kind == TANGLE_STARS and not is_star(ms):
                return False
            g = self.sys.g
            av = 0
            ae = 0
            for s in ms:
                av |= s.A
                ae |= edge_cover_mask(g, s.A)
            return av == g.vmask and ae == (1 << g.m) - 1
        if self.kind == PROFILE_TRIPLES:
            mset = frozenset(ms)
            seen = set()
            for u in ms:
                for w in ms:
                    key = frozenset((u, w))
                    if key in seen:
                        continue
                    seen.add(key)
                    if mset == frozenset((u, w, meet(u.inv, w.inv))):
                        return True
            return False
        if self.kind == BLOCK_ORACLE:
            for _, o in block_orientations(self.sys):
                if all(o.contains(s) for s in ms):
                    return False
            return True
        if self.kind == CUSTOM:
            return bool(self.predicate(ms))
        raise ValidationError("unknown family kind %r" % self.kind)


def family_contains(f: Family, subset) -> bool:
    return f.contains(subset)


def tangle_triples(sys: SepSystem) -> Family:
    return Family(TANGLE_TRIPLES, sys)


def tangle_stars(sys: SepSystem) -> Family:
    return Family(TANGLE_STARS, sys)


def profile_triples(sys: SepSystem) -> Family:
    return Family(PROFILE_TRIPLES, sys)


def block_oracle(sys: SepSystem) -> Family:
    return Family(BLOCK_ORACLE, sys)


def custom_family(sys: SepSystem, predicate) -> Family:
    return Family(CUSTOM, sys, predicate=predicate)


# ---------------------------------------------------------------------------
# incremental checker

class _Checker:
    """Grows an orientation one oriented id at a time, rejecting any add
    that breaks consistency or completes a family member.  Drives both
    enumerate_tangles and Tangle re-verification, so the enumeration can
    never quietly disagree with the verifier."""

    def __init__(self, fam: Family):
        self.fam = fam
        self.sys = fam.sys
        self.bad, _ = conflict_masks(self.sys)
        self.cov = cover_tables(self.sys)
        self.kind = fam.kind
        self.extra_mask = fam._extra_oid_mask
        self.chosen = 0
        self.stack = []
        self.ua = 0
        self.ue = 0
        self.js = {}
        self.undo = []
        if self.kind == BLOCK_ORACLE:
            self.compat = (1 << len(block_orientations(self.sys))) - 1

    def add(self, j: int) -> bool:
        if self.chosen & self.bad[j]:
            return False
        if self.extra_mask >> j & 1:
            return False
        sys = self.sys
        cov = self.cov
        kind = self.kind
        js_keys = None
        new_compat = None
        if kind in (TANGLE_TRIPLES, TANGLE_STARS):
            star = kind == TANGLE_STARS
            vm, em = cov.vmask, cov.emask
            va, ea = cov.va, cov.ea
            degenerate = sys.seps[j >> 1].is_degenerate
            if va[j] == vm and ea[j] == em and not (star and degenerate):
                return False
            withj = self.chosen | 1 << j
            for y in self.stack:
                if star and not (cov.star_pair[j] >> y & 1):
                    continue
                pv = va[j] | va[y]
                pe = ea[j] | ea[y]
                if pv == vm and pe == em:
                    return False
                if pv | self.ua != vm or pe | self.ue != em:
                    continue
                zc = withj
                for v in bits(vm & ~pv):
                    zc &= cov.amask_v[v]
                    if not zc:
                        break
                if zc:
                    for e in bits(em & ~pe):
                        zc &= cov.amask_e[e]
                        if not zc:
                            break
                if star and zc:
                    zc &= cov.star_pair[j] & cov.star_pair[y]
                if zc:
                    return False
        elif kind == PROFILE_TRIPLES:
            xj = sys.osep(j)
            if (xj.B, xj.A) in self.js:
                return False
            withj = self.chosen | 1 << j
            for y in self.stack:
                third = join(xj, sys.osep(y)).inv
                oid = sys.index.get((third.A, third.B))
                if oid is not None and withj >> oid & 1:
                    return False
            js_keys = []
            for y in self.stack:
                v = join(xj, sys.osep(y))
                key = (v.A, v.B)
                self.js[key] = self.js.get(key, 0) + 1
                js_keys.append(key)
        elif kind == BLOCK_ORACLE:
            new_compat = self.compat
            obs = [o.obits for _, o in block_orientations(sys)]
            keep = 0
            for b in bits(self.compat):
                if obs[b] >> j & 1:
                    keep |= 1 << b
            new_compat = keep
            if not new_compat:
                return False
        elif kind == CUSTOM:
            xj = sys.osep(j)
            pred = self.fam.predicate
            if pred([xj]):
                return False
            stack_seps = [sys.osep(y) for y in self.stack]
            for a in range(len(stack_seps)):
                if pred([xj, stack_seps[a]]):
                    return False
                for b in range(a, len(stack_seps)):
                    if pred([xj, stack_seps[a], stack_seps[b]]):
                        return False
        else:
            raise ValidationError("unknown family kind %r" % kind)

        self.undo.append((self.ua, self.ue, js_keys,
                          self.compat if kind == BLOCK_ORACLE else None))
        self.chosen |= 1 << j
        self.stack.append(j)
        self.ua |= cov.va[j]
        self.ue |= cov.ea[j]
        if new_compat is not None:
            self.compat = new_compat
        return True

    def pop(self):
        j = self.stack.pop()
        ua, ue, js_keys, compat = self.undo.pop()
        self.chosen &= ~(1 << j)
        self.ua = ua
        self.ue = ue
        if js_keys:
            for key in js_keys:
                c = self.js[key] - 1
                if c:
                    self.js[key] = c
                else:
                    del self.js[key]
        if compat is not None:
            self.compat = compat


# ---------------------------------------------------------------------------
# tangles

class Tangle:
    """A consistent orientation avoiding its family, re-verified on
    construction so anything holding a Tangle can trust it."""

    __slots__ = ("orientation", "family")

    def __init__(self, orientation: Orientation, family: Family):
        verify_tangle(orientation, family)
        self.orientation = orientation
        self.family = family

    @property
    def sys(self):
        return self.orientation.sys

    @property
    def word(self):
        return self.orientation.word

    @property
    def obits(self):
        return self.orientation.obits

    def members(self):
        return self.orientation.members()

    def contains(self, s: Sep) -> bool:
        return self.orientation.contains(s)

    def json(self):
        d = self.orientation.json()
        d["family"] = self.family.kind
        return d

    def __eq__(self, other):
        return (isinstance(other, Tangle)
                and self.orientation == other.orientation)

    def __hash__(self):
        return hash(self.orientation)

    def __repr__(self):
        return "Tangle(%s, %s)" % (bin(self.word), self.family.kind)


def verify_tangle(orientation: Orientation, family: Family):
    ck = _Checker(family)
    for j in bits(orientation.obits):
        if not ck.add(j):
            raise ValidationError(
                "orientation is not an F-tangle: rejected at %r"
                % (orientation.sys.osep(j),))


def enumerate_tangles(sys: SepSystem, f: Family, preset=None,
                      first_only: bool = False,
                      node_guard: int = NODE_GUARD) -> list:
    """All F-tangles of the system, in canonical orientation-word order.

    preset pins orientation flags {sep_index: 0 or 1} before the search
    (extension queries); first_only returns at the first tangle found.
    Raises SizeError once the search tree exceeds node_guard nodes.
    """
    preset = dict(preset or {})
    if f.kind == BLOCK_ORACLE:
        out = []
        for _, o in block_orientations(sys):
            if any(o.word >> i & 1 != fl for i, fl in preset.items()):
                continue
            out.append(Tangle(o, f))
            if first_only and out:
                return out
        return out

    m = sys.size
    ck = _Checker(f)
    counter = [0]
    out = []
    degen = [s.is_degenerate for s in sys.seps]
    _sys.setrecursionlimit(max(_sys.getrecursionlimit(), 2 * m + 200))

    def rec(i: int) -> bool:
        if i == m:
            word = 0
            for j in ck.stack:
                word |= (j & 1) << (j >> 1)
            out.append(Tangle(Orientation(sys, word), f))
            return first_only
        if degen[i]:
            flags = (0,)
        elif i in preset:
            flags = (preset[i] & 1,)
        else:
            flags = (0, 1)
        for fl in flags:
            counter[0] += 1
            if counter[0] > node_guard:
                raise SizeError("tangle search exceeded %d nodes" % node_guard)
            if ck.add(2 * i + fl):
                done = rec(i + 1)
                ck.pop()
                if done:
                    return True
        return False

    rec(0)
    return out


# ---------------------------------------------------------------------------
# blocks

def inseparability_adjacency(sys: SepSystem) -> list:
    """adj[v]: vertices no system separation strictly separates from v,
    self excluded (Bron-Kerbosch wants a loopless graph)."""
    g = sys.g
    adj = [g.vmask & ~(1 << v) for v in range(g.n)]
    for s in sys.seps:
        sa = s.A & ~s.B
        sb = s.B & ~s.A
        if not sa or not sb:
            continue
        for u in bits(sa):
            adj[u] &= ~sb
        for v in bits(sb):
            adj[v] &= ~sa
    return adj


def _bron_kerbosch(adj, r, p, x, out):
    if not p and not x:
        out.append(r)
        return
    pool = p | x
    pivot = max(bits(pool), key=lambda u: bin(p & adj[u]).count("1"))
    for v in bits(p & ~adj[pivot]):
        bv = 1 << v
        _bron_kerbosch(adj, r | bv, p & adj[v], x & adj[v], out)
        p &= ~bv
        x |= bv


def block_orientations(sys: SepSystem) -> list:
    """(block mask, induced orientation) for every k-block, sorted by
    the block's vertex key.  A block never fits inside a separator of
    the system, so each separation has exactly one side containing it."""
    try:
        return sys._block_or
    except AttributeError:
        pass
    from .graph import set_key

    adj = inseparability_adjacency(sys)
    cliques = []
    _bron_kerbosch(adj, 0, sys.g.vmask, 0, cliques)
    blocks = sorted((c for c in cliques if bin(c).count("1") >= sys.k),
                    key=set_key)
    out = []
    for b in blocks:
        word = 0
        for i, s in enumerate(sys.seps):
            in_a = not (b & ~s.A)
            in_b = not (b & ~s.B)
            if in_a and in_b:
                raise ValidationError(
                    "block fits inside a separator; not a %d-block" % sys.k)
            if not in_a and not in_b:
                raise ValidationError("separation splits a block")
            if in_a and not s.is_degenerate:
                word |= 1 << i
        out.append((b, Orientation(sys, word)))
    sys._block_or = out
    return out


def enumerate_blocks(g: Graph, k: int, sys: SepSystem = None) -> list:
    """All k-blocks with their induced orientations, as verified tangles
    of the block-extension family."""
    from .seps import make_system

    if sys is None:
        sys = make_system(g, k)
    fam = block_oracle(sys)
    return [(b, Tangle(o, fam)) for b, o in block_orientations(sys)]


# ---------------------------------------------------------------------------
# distinguishing orders

def _ori(p) -> Orientation:
    return p.orientation if isinstance(p, Tangle) else p


def kappa(p1, p2):
    """(least order distinguishing the two orientations, all separations
    attaining it).  Orientations must differ and share a system."""
    o1, o2 = _ori(p1), _ori(p2)
    if o1.sys is not o2.sys:
        raise ValidationError("orientations from different systems")
    diff = o1.word ^ o2.word
    if not diff:
        raise ValidationError("orientations are identical")
    sys = o1.sys
    idxs = list(bits(diff))
    k = min(sys.seps[i].order for i in idxs)
    achievers = tuple(sys.seps[i] for i in idxs if sys.seps[i].order == k)
    return k, achievers


def essential_seps(phi) -> tuple:
    """Union over all pairs of the efficient distinguishers, in system
    order."""
    phi = list(phi)
    found = set()
    for a in range(len(phi)):
        for b in range(a + 1, len(phi)):
            _, achievers = kappa(phi[a], phi[b])
            found.update(achievers)
    if not phi:
        return ()
    sys = _ori(phi[0]).sys
    return tuple(sorted(found, key=lambda s: sys.oid_of(s) >> 1))


def maximal_of(o) -> tuple:
    """Maximal members of the orientation, degenerate excluded."""
    o = _ori(o)
    sys = o.sys
    cand = 0
    for j in bits(o.obits):
        if not sys.seps[j >> 1].is_degenerate:
            cand |= 1 << j
    return tuple(sys.osep(j) for j in bits(cand)
                 if not (sys.upsets[j] & cand & ~(1 << j)))


def maximal_inessential(o, phi) -> tuple:
    """Maximal members of o lying in every tangle of phi (no tangle
    orients them the other way).  Degenerate separations never qualify."""
    o = _ori(o)
    sys = o.sys
    common = o.obits
    for p in phi:
        common &= _ori(p).obits
    cand = 0
    for j in bits(common):
        if not sys.seps[j >> 1].is_degenerate:
            cand |= 1 << j
    return tuple(sys.osep(j) for j in bits(cand)
                 if not (sys.upsets[j] & cand & ~(1 << j)))
