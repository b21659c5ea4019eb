import random

import pytest

from tanglekit.graph import Graph, mask_of
from tanglekit.seps import make_system
from tanglekit.tangles import enumerate_tangles, tangle_stars
from tanglekit.refine import refine_all, refine_essential


def three_blobs(blobsize=5, k=3):
    """Three K_blobsize cliques, each wired to a shared apex through its
    first (k-1)//2 vertices.  The apex is the last vertex."""
    nx = (k - 1) // 2
    n = 3 * blobsize + 1
    apex = n - 1
    edges = []
    for b in range(3):
        vs = list(range(b * blobsize, (b + 1) * blobsize))
        for i in vs:
            for j in vs:
                if i < j:
                    edges.append((i, j))
        for x in vs[:nx]:
            edges.append((x, apex))
    return Graph(n, edges)


def two_blobs(blobsize=5, overlap=2, pathlen=0):
    """Two K_blobsize cliques sharing `overlap` vertices, optionally
    with a pendant path of `pathlen` vertices hanging off each blob."""
    n0 = blobsize
    n1 = 2 * blobsize - overlap
    n = n1 + 2 * pathlen
    edges = []
    for i in range(n0):
        for j in range(i + 1, n0):
            edges.append((i, j))
    vs2 = list(range(n0 - overlap, n1))
    for a in range(len(vs2)):
        for b in range(a + 1, len(vs2)):
            if not (vs2[a] < n0 and vs2[b] < n0):
                edges.append((vs2[a], vs2[b]))
    prev = 0
    for i in range(pathlen):
        v = n1 + i
        edges.append((prev, v))
        prev = v
    prev = n0 - 1
    for i in range(pathlen):
        v = n1 + pathlen + i
        edges.append((prev, v))
        prev = v
    return Graph(n, edges)


def blob_masks(blobsize=5):
    return [mask_of(range(b * blobsize, (b + 1) * blobsize))
            for b in range(3)]


@pytest.fixture(scope="session")
def fig_blobs():
    return three_blobs()


@pytest.fixture(scope="session")
def fig_blobs_small():
    # small enough for the automorphism scan
    return three_blobs(blobsize=3)


@pytest.fixture(scope="session")
def overlap_pair():
    return two_blobs(blobsize=5, overlap=2, pathlen=0)


@pytest.fixture(scope="session")
def path_pair():
    return two_blobs(blobsize=5, overlap=2, pathlen=6)


def run_pipeline(g, k=3):
    td, report = refine_all(g, k)
    sys = make_system(g, k)
    phi = enumerate_tangles(sys, tangle_stars(sys))
    out = refine_essential(g, k, td, phi) if phi else td
    return {"sys": sys, "phi": phi, "td": td, "report": report, "out": out}


@pytest.fixture(scope="session")
def overlap_pipeline(overlap_pair):
    return run_pipeline(overlap_pair)


@pytest.fixture(scope="session")
def path_pipeline(path_pair):
    return run_pipeline(path_pair)


@pytest.fixture
def rng():
    return random.Random(0)
