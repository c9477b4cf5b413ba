import dataclasses

import numpy as np
import pytest

import cubecover.fixtures as F
from cubecover import perm as P
from cubecover.complex import from_undirected
from cubecover.cover import (
    CoverMap,
    VoltageAssignment,
    compose,
    compose_chain,
    davis_quotient,
    fundamental_presentation,
    gains_from_generators,
    homomorphisms,
    identity_cover,
    is_connected,
    spanning_tree,
    verify_cover,
    voltage_cover,
)
from cubecover.errors import BadInvolutions, NonCommutingAdjacents, NonLiftableSquare
from cubecover.kneser import build_kneser

# frozen from oracles.davis_counts
PETERSEN_DAVIS = (1024, 5120, 3840, 0)
CUBE_SKELETON = (8, 12, 0, 0)


def test_davis_counts():
    assert F.petersen_davis().cell_counts() == PETERSEN_DAVIS
    assert F.cube_skeleton().cell_counts() == CUBE_SKELETON


def test_davis_generator_edge_ids():
    X = F.petersen_davis()
    e = np.arange(X.n_edges)
    # 1-cube ids are index(h q_v) * |V(L)| + v
    assert np.array_equal(X.dst, e // 10)
    assert np.array_equal(X.rev % 10, e % 10)


def test_davis_rejects_bad_images():
    L = build_kneser(5, 2)
    gens = P.elementary_abelian_generators(10)
    with pytest.raises(BadInvolutions):
        davis_quotient(L, gens[:9])
    with pytest.raises(BadInvolutions):
        davis_quotient(L, [P.identity(20)] + list(gens[1:]))
    # two transpositions sharing a point do not commute
    bad = list(gens)
    u, v = L.edges[0]
    bad[u] = (1, 0, 2) + tuple(range(3, 20))
    bad[v] = (0, 2, 1) + tuple(range(3, 20))
    with pytest.raises(NonCommutingAdjacents):
        davis_quotient(L, bad)


def test_voltage_cover_of_theta(rng):
    f = F.random_graph_cover(F.theta(), 5, rng)
    assert f.degree == 5 and f.verified
    assert f.total.cell_counts() == (10, 15, 0, 0)
    assert verify_cover(f) == []


def test_voltage_cover_lifts_cubes():
    X = F.single_cube()
    f = voltage_cover(X, VoltageAssignment.trivial(X, 2))
    assert f.total.cell_counts() == (16, 24, 12, 2)
    assert verify_cover(f) == []


def test_nonliftable_square():
    X = F.torus()
    # gains of a and b must commute
    a = (1, 2, 0)
    b = (1, 0, 2)
    with pytest.raises(NonLiftableSquare):
        voltage_cover(X, VoltageAssignment.from_dict(X, 3, {0: a, 2: b}))


def test_verify_cover_catches_mutations(rng):
    f = F.random_graph_cover(F.petersen_graph(), 3, rng)
    assert verify_cover(f) == []
    vm = f.vertex_map.copy()
    vm[0] = (vm[0] + 1) % 10
    bad = dataclasses.replace(f, vertex_map=vm, verified=False)
    assert verify_cover(bad)
    em = f.edge_map.copy()
    j = int(np.flatnonzero(em != em[0])[0])
    em[0], em[j] = em[j], em[0]
    assert verify_cover(dataclasses.replace(f, edge_map=em, verified=False))
    assert verify_cover(dataclasses.replace(f, degree=4, verified=False))


def test_compose_chain(rng):
    X = F.theta()
    f = F.random_graph_cover(X, 2, rng)
    g = F.random_graph_cover(f.total, 3, rng)
    h = compose(f, g)
    assert h.degree == 6 and verify_cover(h) == []
    assert compose_chain([g, f, identity_cover(X)]).degree == 6


def test_identity_cover():
    X = F.strip()
    assert verify_cover(identity_cover(X)) == []


def test_fundamental_presentation_rank():
    for X in (F.theta(), F.petersen_graph(), F.cube_skeleton()):
        gens, rels, _ = fundamental_presentation(X)
        assert len(gens) == X.n_edges // 2 - X.n_vertices + 1
        assert rels == [] or len(rels) == X.n_squares
    gens, rels, _ = fundamental_presentation(F.torus())
    assert len(gens) == 2 and len(rels) == 1


def test_spanning_tree_reaches_everything():
    X = F.petersen_davis()
    order, into, level = spanning_tree(X)
    assert len(order) == X.n_vertices and into[0] == -1
    assert np.all(level[X.dst[into[order[1:]]]] == level[X.src[into[order[1:]]]] + 1)


def test_homomorphisms_from_torus():
    X = F.torus()
    Z2sq = P.generate(P.elementary_abelian_generators(2), 4)
    homs = list(homomorphisms(X, Z2sq, surjective=True))
    # surjections Z^2 -> (Z/2)^2 are the 6 bases
    assert len(homs) == 6
    for labels in homs:
        f = voltage_cover(X, gains_from_generators(X, labels, Z2sq))
        assert verify_cover(f) == []
        assert is_connected(f.total)


def test_homomorphism_limit():
    X = F.petersen_graph()
    S3 = P.symmetric_group(3)
    assert len(list(homomorphisms(X, S3, limit=7))) == 7


def test_cover_of_disconnected_base_is_rejected_for_composition():
    X = from_undirected(2, [(0, 0), (1, 1)])
    assert not is_connected(X)
