import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from fatgraph.maps import Embedding, Graph, random_embedding
from fatgraph.perm import Permutation
from fatgraph.planeperm import PlanePermutation

DATA = Path(__file__).parent / "data"

FIG1_IMAGES = [1, 6, 7, 8, 3, 4, 5, 2]
DEG5_IMAGES = [1, 7, 18, 10, 13, 3, 17, 14, 5, 20, 16, 6, 9, 19, 12, 8, 4, 15, 11, 2]

# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[num]
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def fig1_pp():
    return PlanePermutation.from_two_line(range(1, 9), FIG1_IMAGES)


def deg5_pp():
    return PlanePermutation.from_two_line(range(1, 21), DEG5_IMAGES)


@pytest.fixture
def fig1():
    return Embedding.from_plane_permutation(fig1_pp())


@pytest.fixture
def deg5():
    """One-face map on 10 edges with a degree-5 vertex at half edge 8."""
    return Embedding.from_plane_permutation(deg5_pp())


def random_connected_graph(rng: random.Random, max_vertices=6, max_edges=9, max_degree=7) -> Graph:
    """Spanning tree plus random extra edges; loops and multi-edges allowed."""
    nv = rng.randint(1, max_vertices)
    names = [f"u{i}" for i in range(nv)]
    deg = {x: 0 for x in names}
    edges = []
    for i in range(1, nv):
        j = rng.randrange(i)
        edges.append((names[j], names[i]))
        deg[names[i]] += 1
        deg[names[j]] += 1
    target = rng.randint(max(nv - 1, 1), max_edges)
    tries = 0
    while len(edges) < target and tries < 100:
        tries += 1
        u, w = rng.choice(names), rng.choice(names)
        need = 2 if u == w else 1
        if deg[u] + need > max_degree or deg[w] + (0 if u == w else 1) > max_degree:
            continue
        edges.append((u, w))
        deg[u] += 1
        deg[w] += 1
    if not edges:
        edges.append((names[0], names[0]))
    return Graph(tuple(names), tuple(edges))


def random_map(seed, **kw) -> Embedding:
    rng = random.Random(seed)
    return random_embedding(random_connected_graph(rng, **kw), rng.getrandbits(32))


@st.composite
def permutations(draw, min_size=1, max_size=8):
    n = draw(st.integers(min_size, max_size))
    images = draw(st.permutations(list(range(1, n + 1))))
    return Permutation.from_images(range(1, n + 1), images)


@st.composite
def embeddings(draw, **kw):
    return random_map(draw(st.integers(0, 2**32 - 1)), **kw)


def random_rotation(rng: random.Random, support):
    rest = sorted(support)
    first, rest = rest[0], rest[1:]
    rng.shuffle(rest)
    return (first,) + tuple(rest)
