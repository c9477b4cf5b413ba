"""Named small complexes used by the tests, the CLI and the benchmarks."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import perm as P
from .complex import CubeComplex, from_undirected
from .cover import CoverMap, VoltageAssignment, davis_quotient, free_quotient, voltage_cover
from .kneser import KneserComplex, build_kneser


def theta() -> CubeComplex:
    """Two 0-cubes joined by three parallel 1-cubes."""
    return from_undirected(2, [(0, 1), (0, 1), (0, 1)])


def cycle(k: int) -> CubeComplex:
    return from_undirected(k, [(i, (i + 1) % k) for i in range(k)])


def graph(n_vertices: int, pairs) -> CubeComplex:
    return from_undirected(n_vertices, list(pairs))


def petersen_graph() -> CubeComplex:
    L = build_kneser(5, 2)
    return from_undirected(L.num_vertices, L.edges)


def complete_graph(k: int) -> CubeComplex:
    return from_undirected(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def loop() -> CubeComplex:
    """One 0-cube with one loop."""
    return from_undirected(1, [(0, 0)])


def dumbbell() -> CubeComplex:
    """Two loops joined by a 1-cube: cubic, with self-osculating hyperplanes."""
    return from_undirected(2, [(0, 0), (0, 1), (1, 1)])


def torus() -> CubeComplex:
    """One square with all four corners and both edge pairs identified."""
    return from_undirected(1, [(0, 0), (0, 0)], [(0, 2, 0, 2)])


def klein() -> CubeComplex:
    """Like :func:`torus` but one pair glued with a flip; that hyperplane is one-sided."""
    return from_undirected(1, [(0, 0), (0, 0)], [(0, 2, 0, 3)])


def mobius() -> CubeComplex:
    """A square with two opposite sides glued with a half twist."""
    # edges: e1 = 0->1, e1' = 1->0, f = 0->1; square (e1, r f, e1', f)
    return from_undirected(2, [(0, 1), (1, 0), (0, 1)], [(0, 5, 2, 4)])


def strip() -> CubeComplex:
    """Two squares side by side: 0-cubes (i, j) = 3j + i on a 3 x 2 grid."""
    pairs = [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]
    # horizontal h(i,j) = index, vertical v(i) = 4 + i; directed id 2k is the listed direction
    h = lambda i, j: 2 * (2 * j + i)
    v = lambda i: 2 * (4 + i)
    squares = [(h(i, 0), v(i + 1), h(i, 1), v(i)) for i in range(2)]
    return from_undirected(6, pairs, squares)


def glued_squares() -> CubeComplex:
    """Two squares sharing two consecutive sides: the link at the shared
    corner has a doubled edge."""
    pairs = [(0, 1), (1, 2), (3, 2), (0, 3), (4, 2), (0, 4)]
    return from_undirected(5, pairs, [(0, 2, 4, 6), (0, 2, 8, 10)])


def corrupted_square_arrays():
    """Raw ``(n, edges, squares)`` for a square whose boundary does not close up."""
    pairs = [(0, 1), (1, 2), (2, 3), (3, 0)]
    edges = []
    for u, v in pairs:
        i = len(edges)
        edges += [(u, v, i + 1), (v, u, i)]
    # third side should run 3 -> 2 (id 5) for (x,y),(y,z),(y',z),(x,y')
    return 4, edges, [(0, 2, 4, 7)]


def single_cube() -> CubeComplex:
    """The standard 3-cube: the Davis quotient for three pairwise-disjoint singletons."""
    L = build_kneser(3, 1)
    return davis_quotient(L, P.elementary_abelian_generators(3))


def k2(size: int) -> KneserComplex:
    return build_kneser(size, 2)


@lru_cache(maxsize=None)
def cube_skeleton() -> CubeComplex:
    """Davis quotient of ``K_2({1,2,3})`` (three points) by ``(Z/2)^3``: the 3-cube's 1-skeleton."""
    return davis_quotient(k2(3), P.elementary_abelian_generators(3))


@lru_cache(maxsize=None)
def petersen_davis() -> CubeComplex:
    """Davis quotient of the Petersen-link Coxeter group by ``(Z/2)^10``."""
    return davis_quotient(k2(5), P.elementary_abelian_generators(10))


def _bits(p) -> int:
    return sum(1 << v for v in range(len(p) // 2) if p[2 * v] == 2 * v + 1)


@lru_cache(maxsize=None)
def twisted_davis_cover() -> CoverMap:
    """Double cover of a 512-vertex Petersen-link complex with nontrivial
    ``Z/2`` parallel holonomy, killed by this very cover.

    The quotient is by ``g ↦ σg + t`` on ``(Z/2)^10``, where ``σ`` swaps the
    labels 1 and 2 on 2-subsets and ``t = e_34 + e_35``.
    """
    L = k2(5)
    V = L.num_vertices
    gens = P.elementary_abelian_generators(V)
    X0 = petersen_davis()
    elements = P.generate(gens, 2 * V)
    bits = [_bits(p) for p in elements]
    index = {b: i for i, b in enumerate(bits)}
    sigma = L.induced_vertex_map((1, 0, 2, 3, 4))
    t = (1 << L.vertex_of((3, 4))) | (1 << L.vertex_of((3, 5)))

    def act(b):
        out = 0
        for v in range(V):
            if b >> v & 1:
                out |= 1 << sigma[v]
        return out ^ t

    alpha_v = np.array([index[act(b)] for b in bits], dtype=np.int64)
    e = np.arange(X0.n_edges)
    alpha_e = alpha_v[e // V] * V + np.array(sigma, dtype=np.int64)[e % V]
    return free_quotient(X0, alpha_v, alpha_e)


def random_graph_cover(X: CubeComplex, k: int, rng: np.random.Generator) -> CoverMap:
    """A voltage cover of a graph with uniformly random permutation gains."""
    if X.n_squares:
        raise ValueError("random gains only lift every square on graphs")
    gains = {}
    for e in X.undirected.tolist():
        gains[e] = tuple(int(a) for a in rng.permutation(k))
    return voltage_cover(X, VoltageAssignment.from_dict(X, k, gains))


FIXTURES = {
    "theta": theta,
    "petersen": petersen_graph,
    "k4": lambda: complete_graph(4),
    "k5": lambda: complete_graph(5),
    "triangle": lambda: cycle(3),
    "loop": loop,
    "dumbbell": dumbbell,
    "torus": torus,
    "klein": klein,
    "mobius": mobius,
    "strip": strip,
    "cube": single_cube,
    "glued": glued_squares,
    "cube-skeleton": cube_skeleton,
    "petersen-davis": petersen_davis,
    "twisted-davis": lambda: twisted_davis_cover().base,
}
