import itertools
import random

import pytest

from tanglekit.errors import SizeError, ValidationError
from tanglekit.graph import (Graph, complete, cycle, mask_of, path,
                             random_connected)
from tanglekit.seps import Sep, make_system, meet
from tanglekit.tangles import (BLOCK_ORACLE, PROFILE_TRIPLES, TANGLE_STARS,
                               TANGLE_TRIPLES, Orientation, Tangle,
                               block_oracle, block_orientations, custom_family,
                               enumerate_blocks, enumerate_tangles,
                               essential_seps, family_contains, is_consistent,
                               is_star, kappa, maximal_inessential, maximal_of,
                               orientation_from_json, orientation_of_members,
                               profile_triples, tangle_stars, tangle_triples,
                               verify_tangle)

from conftest import blob_masks
from oracles import naive_blocks, naive_tangle_words


def S(a, b):
    return Sep(mask_of(a), mask_of(b))


def shared_k4():
    """Two K4s glued along a triangle."""
    edges = list(itertools.combinations(range(4), 2))
    edges += [(i, 4) for i in (1, 2, 3)]
    return Graph(5, edges)


@pytest.fixture(scope="module")
def fig_tangles(fig_blobs):
    sys = make_system(fig_blobs, 3)
    return sys, enumerate_tangles(sys, tangle_stars(sys))


# ---------------------------------------------------------------------------
# orientations

def test_orientation_words():
    sys = make_system(path(3), 2)
    o = Orientation(sys, 0)
    assert o.members() == list(sys.seps)
    assert o.contains(sys.seps[0])
    assert not o.contains(sys.seps[0].inv)
    o2 = Orientation(sys, 0b00010)
    assert o2.contains(sys.seps[1].inv)
    with pytest.raises(ValidationError):
        Orientation(sys, 1 << sys.size)


def test_orientation_json_round_trip():
    sys = make_system(cycle(4), 3)
    o = Orientation(sys, 0b1011 & ((1 << sys.size) - 1))
    assert orientation_from_json(sys, o.json()) == o
    with pytest.raises(ValidationError):
        orientation_from_json(sys, {"bits": [0]})
    with pytest.raises(ValidationError):
        orientation_from_json(sys, {"bits": [2] * sys.size})


def test_orientation_of_members():
    sys = make_system(path(3), 2)
    o = Orientation(sys, 0b10110 & ((1 << sys.size) - 1))
    assert orientation_of_members(sys, o.members()) == o
    with pytest.raises(ValidationError):
        orientation_of_members(sys, [sys.seps[0], sys.seps[0].inv])
    with pytest.raises(ValidationError):
        orientation_of_members(sys, [sys.seps[0]])


def test_consistency_flags():
    sys = make_system(complete(2), 2)
    # pointing at {1} and away from {0} stays consistent but the cosmall
    # member breaks regularity
    o = Orientation(sys, 0b110)
    flags = is_consistent(o)
    assert flags["consistent"] and not flags["regular"]
    # orienting toward the empty side contradicts everything above it
    bad = is_consistent(Orientation(sys, 0b001))
    assert not bad["consistent"] and not bad["regular"]
    # on an edge every orientation ends at a single vertex, so none is
    # regular; a path has room
    k2 = is_consistent(Orientation(sys, 0))
    assert k2["consistent"] and not k2["regular"]
    p3 = make_system(path(3), 2)
    good = Orientation(p3, 0b11000)
    assert {s.A for s in good.members()} == \
        {0, 0b001, 0b010, 0b100, 0b011}
    assert is_consistent(good) == {"consistent": True, "regular": True}


# ---------------------------------------------------------------------------
# families

def test_triple_family_on_c4():
    sys = make_system(cycle(4), 3)
    f = tangle_triples(sys)
    x = S([0, 1, 2], [2, 3, 0])
    y = S([1, 2, 3], [3, 0, 1])
    z = S([0, 3], [0, 1, 2, 3])
    assert family_contains(f, [x, y, z])
    # without z the edge 3-0 is left uncovered
    assert not family_contains(f, [x, y])
    assert not family_contains(f, [x, y, S([1], [0, 1, 2, 3])])
    assert not family_contains(f, [])
    assert not family_contains(f, [x, y, z, z.inv])  # more than a triple
    # crossing members are fine for triples but not for stars
    fs = tangle_stars(sys)
    assert not is_star([x, y, z])
    assert not family_contains(fs, [x, y, z])


def test_star_family_singletons():
    sys = make_system(path(3), 2)
    f = tangle_stars(sys)
    assert family_contains(f, [S([0, 1, 2], [2])])
    assert not family_contains(f, [S([2], [0, 1, 2])])
    # a separation outside the system is never a member
    assert not family_contains(f, [S([0, 2], [0, 1, 2])])


def test_star_family_forces_smalls():
    for g in (cycle(4), complete(4), path(4)):
        sys = make_system(g, 3)
        f = tangle_stars(sys)
        for s in sys.seps:
            for o in (s, s.inv):
                if o.is_small and not o.is_degenerate:
                    assert family_contains(f, [o.inv])


def test_profile_family_pattern():
    sys = make_system(cycle(4), 3)
    f = profile_triples(sys)
    u = S([0, 1, 2], [2, 3, 0])
    w = S([1, 2, 3], [3, 0, 1])
    third = meet(u.inv, w.inv)
    assert third == S([0, 3], [0, 1, 2, 3])
    assert family_contains(f, [u, w, third])
    assert not family_contains(f, [u, w, third.inv])
    assert not family_contains(f, [u, w])


def test_family_extras():
    sys = make_system(path(4), 3)
    e = S([0, 1], [1, 2, 3])
    above = S([0, 1, 2], [2, 3])
    f = tangle_stars(sys).with_extras([e])
    assert family_contains(f, [e])
    assert not family_contains(f, [e.inv])
    assert not family_contains(f, [above])
    # extras stay singleton rules: pairs fall back to the base kind
    assert not family_contains(f, [e, above])
    g = tangle_stars(sys).with_extras([e], closure=True)
    assert family_contains(g, [above])
    assert not family_contains(g, [e.inv])


def test_degenerate_never_in_star_family():
    u = make_system(complete(2), 3)
    f = tangle_stars(u)
    d = S([0, 1], [0, 1])
    assert d in u
    assert not family_contains(f, [d])
    # triples do not care about the star condition
    assert family_contains(tangle_triples(u), [d])


# ---------------------------------------------------------------------------
# enumeration against the brute-force filter

NAIVE_CASES = [
    (path(3), 2), (path(4), 3), (cycle(4), 3), (complete(4), 3),
    (complete(4), 2), (Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                                 (0, 2)]), 3),
]


@pytest.mark.parametrize("g,k", NAIVE_CASES)
@pytest.mark.parametrize("stars", [False, True])
def test_enumerate_matches_naive(g, k, stars):
    want, sys = naive_tangle_words(g, k, stars=stars)
    fam = tangle_stars(sys) if stars else tangle_triples(sys)
    got = [t.word for t in enumerate_tangles(sys, fam)]
    assert sorted(got) == got  # canonical word order
    assert set(got) == want


def test_frozen_counts(fig_tangles):
    sys_c4 = make_system(cycle(4), 3)
    assert enumerate_tangles(sys_c4, tangle_stars(sys_c4)) == []
    sys_k4 = make_system(complete(4), 3)
    assert len(enumerate_tangles(sys_k4, tangle_triples(sys_k4))) == 1
    assert len(enumerate_tangles(sys_k4, tangle_stars(sys_k4))) == 1
    _, phi = fig_tangles
    assert len(phi) == 3


def test_k4_tangle_points_at_the_bulk():
    sys = make_system(complete(4), 3)
    (t,) = enumerate_tangles(sys, tangle_stars(sys))
    for s in t.members():
        assert s.A.bit_count() <= 2


def test_enumerate_preset_and_first_only():
    sys = make_system(complete(4), 3)
    assert enumerate_tangles(sys, tangle_stars(sys), preset={0: 1}) == []
    full = enumerate_tangles(sys, tangle_stars(sys))
    assert enumerate_tangles(sys, tangle_stars(sys), preset={0: 0}) == full
    first = enumerate_tangles(sys, tangle_stars(sys), first_only=True)
    assert first == full[:1]


def test_enumerate_node_guard():
    sys = make_system(complete(4), 3)
    with pytest.raises(SizeError):
        enumerate_tangles(sys, tangle_stars(sys), node_guard=3)


def test_verify_tangle_rejects_non_tangles():
    sys = make_system(cycle(4), 3)
    with pytest.raises(ValidationError):
        verify_tangle(Orientation(sys, 0), tangle_stars(sys))
    sys4 = make_system(complete(4), 3)
    (t,) = enumerate_tangles(sys4, tangle_stars(sys4))
    Tangle(t.orientation, tangle_stars(sys4))  # re-verifies fine
    with pytest.raises(ValidationError):
        Tangle(Orientation(sys4, t.word ^ (1 << (sys4.size - 1))),
               tangle_stars(sys4))


def test_tangle_json():
    sys = make_system(complete(4), 3)
    (t,) = enumerate_tangles(sys, tangle_stars(sys))
    d = t.json()
    assert d["family"] == TANGLE_STARS
    assert d["bits"] == [t.word >> i & 1 for i in range(sys.size)]


def test_custom_family_matches_stars():
    for g in (cycle(4), complete(4)):
        sys = make_system(g, 3)
        ref = tangle_stars(sys)
        fam = custom_family(sys, lambda ms: ref.contains(ms))
        a = [t.word for t in enumerate_tangles(sys, fam)]
        b = [t.word for t in enumerate_tangles(sys, ref)]
        assert a == b


# ---------------------------------------------------------------------------
# distinguishing

def test_kappa_on_the_blob_graph(fig_tangles):
    sys, phi = fig_tangles
    assert len(phi) == 3
    for a, b in itertools.combinations(phi, 2):
        k, achievers = kappa(a, b)
        assert k == 1
        assert achievers
        for s in achievers:
            assert s.order == 1
            assert a.contains(s) != b.contains(s)
        # achievers are exactly the lowest-order disagreements
        diff = [sys.seps[i] for i in range(sys.size)
                if (a.word ^ b.word) >> i & 1]
        assert min(s.order for s in diff) == 1
        assert set(achievers) == {s for s in diff if s.order == 1}


def test_kappa_errors():
    sys = make_system(complete(4), 3)
    (t,) = enumerate_tangles(sys, tangle_stars(sys))
    with pytest.raises(ValidationError):
        kappa(t, t)
    other = make_system(complete(4), 3)
    (t2,) = enumerate_tangles(other, tangle_stars(other))
    with pytest.raises(ValidationError):
        kappa(t, t2)


def test_essential_seps_blob_graph(fig_tangles):
    sys, phi = fig_tangles
    ess = essential_seps(phi)
    assert ess == tuple(sorted(ess, key=lambda s: sys.oid_of(s) >> 1))
    assert all(s.order == 1 for s in ess)
    want = set()
    for a, b in itertools.combinations(phi, 2):
        want.update(kappa(a, b)[1])
    assert set(ess) == want
    assert essential_seps([]) == ()
    assert essential_seps(phi[:1]) == ()


def test_maximal_of_k4():
    sys = make_system(complete(4), 3)
    (t,) = enumerate_tangles(sys, tangle_stars(sys))
    tops = maximal_of(t)
    assert len(tops) == 6
    assert all(s.A.bit_count() == 2 and s.order == 2 for s in tops)


def test_maximal_inessential(fig_tangles):
    sys, phi = fig_tangles
    t = phi[0]
    assert maximal_inessential(t, [t]) == maximal_of(t)
    mi = maximal_inessential(t, phi)
    common = [s for s in t.members()
              if all(p.contains(s) for p in phi)
              and not s.is_degenerate]
    for s in mi:
        assert s in common
        # nothing in the common set strictly above
        assert not any(s != u and s.A & ~u.A == 0 and u.B & ~s.B == 0
                       for u in common)
    # no essential separation can be inessential
    assert not set(mi) & set(essential_seps(phi))


# ---------------------------------------------------------------------------
# blocks

def test_blocks_frozen():
    assert [b for b, _ in enumerate_blocks(complete(5), 4)] == [31]
    assert enumerate_blocks(cycle(4), 3) == []
    got = [b for b, _ in enumerate_blocks(shared_k4(), 4)]
    assert got == [mask_of([0, 1, 2, 3]), mask_of([1, 2, 3, 4])]


@pytest.mark.parametrize("g,k", [
    (complete(5), 4), (cycle(4), 3), (shared_k4(), 4), (shared_k4(), 3),
    (path(5), 2), (cycle(6), 3),
])
def test_blocks_match_naive(g, k):
    assert [b for b, _ in enumerate_blocks(g, k)] == naive_blocks(g, k)


def test_blocks_match_naive_random(rng):
    for _ in range(10):
        g = random_connected(rng, 6)
        k = rng.choice([3, 4])
        assert [b for b, _ in enumerate_blocks(g, k)] == naive_blocks(g, k)


def test_block_orientations_point_at_the_block():
    sys = make_system(shared_k4(), 4)
    for b, o in block_orientations(sys):
        flags = is_consistent(o)
        assert flags["consistent"]
        for s in o.members():
            if not s.is_degenerate:
                assert b & ~s.B == 0
        # block orientations satisfy the profile property
        verify_tangle(o, profile_triples(sys))


def test_block_family_enumeration_agrees():
    for g, k in ((complete(5), 4), (shared_k4(), 4)):
        sys = make_system(g, k)
        fam = block_oracle(sys)
        via_family = [t.word for t in enumerate_tangles(sys, fam)]
        direct = [o.word for _, o in block_orientations(sys)]
        assert sorted(via_family) == sorted(direct)
        assert all(t.family.kind == BLOCK_ORACLE
                   for t in enumerate_tangles(sys, fam))


def test_tangles_are_profiles(overlap_pipeline):
    sys, phi = overlap_pipeline["sys"], overlap_pipeline["phi"]
    assert len(phi) == 2
    for t in phi:
        verify_tangle(t.orientation, profile_triples(sys))
    k4 = make_system(complete(4), 3)
    for t in enumerate_tangles(k4, tangle_stars(k4)):
        verify_tangle(t.orientation, profile_triples(k4))


def test_blob_tangles_sit_on_their_blobs(fig_tangles):
    sys, phi = fig_tangles
    homes = []
    for t in phi:
        # the tangle's maximal members all point into one blob
        inter = sys.g.vmask
        for s in maximal_of(t):
            inter &= s.B
        homes.append([b for b in blob_masks() if b & ~inter == 0])
    assert sorted(len(h) for h in homes) == [1, 1, 1]
    assert {h[0] for h in homes} == set(blob_masks())
