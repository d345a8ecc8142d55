import itertools
import math
import random

import pytest

from galcov.complexes import DegenerationComplex, Edge, Vertex
from galcov.datasets import load_builtin
from galcov.enumeration import coset_enumeration
from galcov.permutations import Permutation
from galcov.presentation import build_tilde_presentation


@pytest.fixture(scope="session")
def t4():
    return load_builtin("t4")


@pytest.fixture(scope="session")
def dt4():
    return load_builtin("dt4")


@pytest.fixture(scope="session")
def t4_presentation(t4):
    return build_tilde_presentation(t4)


@pytest.fixture(scope="session")
def dt4_presentation(dt4):
    return build_tilde_presentation(dt4)


@pytest.fixture(scope="session")
def dt4_table(dt4_presentation):
    """Closed coset table of the dt4 group; shared, it is the slow step."""
    return coset_enumeration(dt4_presentation, (), 1_000_000)


# ---------------------------------------------------------------------------
# independent oracles


def mulclose(gens):
    """Brute-force closure of permutation generators; the Cayley oracle."""
    gens = [g.images for g in gens]
    n = len(gens[0])
    identity = tuple(range(1, n + 1))
    elements = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for el in frontier:
            for g in gens:
                prod = tuple(g[x - 1] for x in el)
                if prod not in elements:
                    elements.add(prod)
                    new.append(prod)
        frontier = new
    return elements


def _det(matrix):
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        if matrix[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
            total += (-1) ** j * matrix[0][j] * _det(minor)
    return total


def snf_oracle(matrix):
    """Invariant factors via determinantal divisors: d_k = D_k / D_{k-1}
    where D_k is the gcd of all k x k minors.  Entirely independent of any
    row/column reduction strategy."""
    m, n = len(matrix), len(matrix[0]) if matrix else 0
    size = min(m, n)
    out = []
    prev = 1
    for k in range(1, size + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                sub = [[matrix[i][j] for j in cols] for i in rows]
                g = math.gcd(g, abs(_det(sub)))
        if g == 0:
            out.extend([0] * (size - len(out)))
            return tuple(out)
        out.append(g // prev)
        prev = g
    return tuple(out)


# ---------------------------------------------------------------------------
# generators of valid complexes for property tests


def prism_complex(n, name=None):
    """Prism over an n-gon: two caps and n side faces, all corners 3-points."""
    top, bottom = 1, 2
    side = [3 + i for i in range(n)]
    edges = []
    # ids: t_i = i+1, b_i = n+i+1, v_i = 2n+i+1  (i = 0..n-1)
    for i in range(n):
        edges.append(Edge(id=i + 1, planes=(top, side[i])))
    for i in range(n):
        edges.append(Edge(id=n + i + 1, planes=(bottom, side[i])))
    for i in range(n):
        edges.append(Edge(id=2 * n + i + 1, planes=(side[i], side[(i + 1) % n])))
    vertices = []
    for i in range(n):
        j = (i + 1) % n
        vertices.append(Vertex(id=i + 1, edges=frozenset({i + 1, j + 1, 2 * n + i + 1})))
    for i in range(n):
        j = (i + 1) % n
        vertices.append(
            Vertex(id=n + i + 1, edges=frozenset({n + i + 1, n + j + 1, 2 * n + i + 1}))
        )
    return DegenerationComplex(
        name=name or f"prism{n}",
        plane_count=n + 2,
        edges=tuple(edges),
        vertices=tuple(vertices),
    )


def octahedron_complex():
    """Octahedron: eight faces, all six corners are inner 4-points."""
    # faces: top T_i = 1..4, bottom B_i = 5..8 (i = 0..3 cyclic)
    def T(i):
        return 1 + i % 4

    def B(i):
        return 5 + i % 4

    edges = []
    # slant top s_i = 1..4 between T_{i-1}, T_i; slant bottom u_i = 5..8;
    # equator q_i = 9..12 between T_i, B_i
    for i in range(4):
        edges.append(Edge(id=1 + i, planes=(T(i - 1), T(i))))
    for i in range(4):
        edges.append(Edge(id=5 + i, planes=(B(i - 1), B(i))))
    for i in range(4):
        edges.append(Edge(id=9 + i, planes=(T(i), B(i))))
    vertices = [
        Vertex(id=1, edges=frozenset({1, 2, 3, 4})),
        Vertex(id=2, edges=frozenset({5, 6, 7, 8})),
    ]
    for i in range(4):
        s_i = 1 + i
        u_i = 5 + i
        q_i = 9 + i
        q_prev = 9 + (i - 1) % 4
        vertices.append(Vertex(id=3 + i, edges=frozenset({s_i, u_i, q_i, q_prev})))
    return DegenerationComplex(
        name="octahedron", plane_count=8, edges=tuple(edges), vertices=tuple(vertices)
    )


def relabel_complex(c, rng):
    """Random relabeling of planes, edge ids, and vertex ids."""
    planes = list(range(1, c.plane_count + 1))
    rng.shuffle(planes)
    plane_map = {i + 1: planes[i] for i in range(c.plane_count)}
    eids = list(range(1, c.edge_count + 1))
    rng.shuffle(eids)
    edge_map = {e.id: eids[i] for i, e in enumerate(c.edges)}
    vids = list(range(1, len(c.vertices) + 1))
    rng.shuffle(vids)
    edges = tuple(
        sorted(
            (
                Edge(id=edge_map[e.id], planes=(plane_map[e.planes[0]], plane_map[e.planes[1]]))
                for e in c.edges
            ),
            key=lambda e: e.id,
        )
    )
    vertices = tuple(
        sorted(
            (
                Vertex(id=vids[i], edges=frozenset(edge_map[x] for x in v.edges))
                for i, v in enumerate(c.vertices)
            ),
            key=lambda v: v.id,
        )
    )
    return DegenerationComplex(
        name=c.name + "-relabeled",
        plane_count=c.plane_count,
        edges=edges,
        vertices=vertices,
    )


def random_valid_complex(rng):
    base = rng.choice(
        [prism_complex(n) for n in range(3, 11)]
        + [octahedron_complex(), load_builtin("t4"), load_builtin("dt4")]
    )
    return relabel_complex(base, rng)


def random_permutation(rng, n):
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))
