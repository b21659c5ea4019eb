"""Efficient distinguishers: a nested skeleton for a set of tangles.

Every pair of tangles has a minimum order kappa at which some separation
tells them apart.  This module greedily assembles a pairwise nested set
that realises that minimum for every pair at once: crossing candidates
are replaced by corner separations, and submodularity keeps the corner's
order down at kappa, so efficiency survives the uncrossing.
"""

from .errors import ContractError, InvariantViolation
from .graph import Graph, apply_perm_mask, automorphisms
from .seps import Sep, SepSystem, canonical_orientation, is_nested, join
from .tangles import kappa

__all__ = ["build_distinguishing_set", "is_canonical"]


def _distinguishes(c: Sep, p, q) -> bool:
    return p.contains(c) != q.contains(c)


def _sep_sort_key(s: Sep):
    return (s.order,) + s.key()


def build_distinguishing_set(sys: SepSystem, phi) -> tuple:
    """A nested set of separations distinguishing every pair of phi
    at the pair's minimum order.

    Pairs are processed by ascending kappa (ties broken by tangle
    words, so the result does not depend on the input listing).  An
    unresolved pair contributes its canonically first minimum-order
    distinguisher; while that candidate crosses a chosen separation m,
    it is swapped for the best corner with m that still distinguishes
    the pair at order kappa and crosses strictly fewer chosen members.
    """
    phi = sorted(phi, key=lambda t: t.word)
    if len({t.word for t in phi}) != len(phi):
        raise ContractError("tangles must be pairwise distinct")

    pairs = []
    for i in range(len(phi)):
        for j in range(i + 1, len(phi)):
            k0, achievers = kappa(phi[i], phi[j])
            pairs.append((k0, phi[i].word, phi[j].word, phi[i], phi[j], achievers))
    pairs.sort(key=lambda t: t[:3])

    chosen = []
    for k0, _, _, p, q, achievers in pairs:
        if any(m.order == k0 and _distinguishes(m, p, q) for m in chosen):
            continue
        cand = achievers[0]
        while True:
            crossing = [m for m in sorted(chosen, key=_sep_sort_key)
                        if not is_nested(cand, m)]
            if not crossing:
                break
            m = crossing[0]
            base = sum(1 for z in chosen if not is_nested(cand, z))
            best = None
            for od in (cand, cand.inv):
                for om in (m, m.inv):
                    c = canonical_orientation(join(od, om))
                    if c not in sys:
                        continue
                    if c.order != k0 or not _distinguishes(c, p, q):
                        continue
                    if not is_nested(c, m):
                        continue
                    nc = sum(1 for z in chosen if not is_nested(c, z))
                    if nc >= base:
                        continue
                    rank = (nc,) + c.key()
                    if best is None or rank < best[0]:
                        best = (rank, c)
            if best is None:
                raise InvariantViolation(
                    "corner uncrossing failed to preserve efficiency for "
                    "a pair at order %d" % k0)
            cand = best[1]
        cand = canonical_orientation(cand)
        if cand not in chosen:
            chosen.append(cand)

    out = tuple(sorted(chosen, key=_sep_sort_key))
    _assert_skeleton(out, phi)
    return out


def _assert_skeleton(out, phi):
    # the three advertised clauses, each checked on its own
    for a in out:
        for b in out:
            if not is_nested(a, b):
                raise InvariantViolation(
                    "distinguishing set contains a crossing pair %r / %r"
                    % (a, b))
    allpairs = [(phi[i], phi[j])
                for i in range(len(phi)) for j in range(i + 1, len(phi))]
    for c in out:
        if not any(_distinguishes(c, p, q) for p, q in allpairs):
            raise InvariantViolation(
                "distinguishing set member %r separates no pair" % (c,))
    for p, q in allpairs:
        k0, _ = kappa(p, q)
        if not any(m.order == k0 and _distinguishes(m, p, q) for m in out):
            raise InvariantViolation(
                "a tangle pair is not distinguished at its order %d" % k0)


def is_canonical(nested, g: Graph) -> bool:
    """True iff every automorphism of g maps the set onto itself.

    Size guard propagates from the automorphism search; the empty set
    is canonical by convention.
    """
    base = {canonical_orientation(s) for s in nested}
    for perm in automorphisms(g):
        mapped = {canonical_orientation(Sep(apply_perm_mask(perm, s.A),
                                            apply_perm_mask(perm, s.B)))
                  for s in base}
        if mapped != base:
            return False
    return True
