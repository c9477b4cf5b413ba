import numpy as np
from hypothesis import given, settings, strategies as st

import cubecover.fixtures as F
from cubecover import perm as P
from cubecover.complex import assign_links, check_assignment, pullback_assignment
from cubecover.cover import VoltageAssignment, davis_quotient, verify_cover, voltage_cover
from cubecover.deltacat import build_pre_delta, extend_to_delta, lift_pre_delta, verify_delta
from cubecover.holonomy import global_holonomy, kernel_cover
from cubecover.kneser import build_kneser, recover_bijection
from cubecover.leighton import build_orbicover, verify_lcoloring

L3 = build_kneser(3, 2)
SETTINGS = settings(max_examples=40, deadline=None)

perms = lambda k: st.permutations(list(range(k))).map(tuple)


@SETTINGS
@given(perms(7))
def test_bijection_recovery_k3_on_seven(p):
    K = build_kneser(7, 3)
    assert recover_bijection(K, K, K.induced_vertex_map(p)).forward == p


@SETTINGS
@given(perms(6), perms(6), perms(6))
def test_group_laws(a, b, c):
    assert P.compose(P.compose(a, b), c) == P.compose(a, P.compose(b, c))
    assert P.compose(a, P.inverse(a)) == P.identity(6)


@SETTINGS
@given(st.sampled_from(["theta", "petersen", "cube-skeleton", "k4"]), st.integers(1, 5), st.integers(0, 2**31))
def test_random_graph_covers_verify(name, k, seed):
    X = F.FIXTURES[name]()
    f = F.random_graph_cover(X, k, np.random.default_rng(seed))
    assert verify_cover(f) == []
    assert f.total.cell_counts()[:2] == (k * X.n_vertices, k * X.n_edges // 2)


@SETTINGS
@given(st.sampled_from(["theta", "cube-skeleton"]), st.integers(2, 4), st.integers(0, 2**31))
def test_lift_commutes_with_build(name, k, seed):
    X = F.FIXTURES[name]()
    A = assign_links(X, L3)
    pre = build_pre_delta(X, A)
    f = F.random_graph_cover(X, k, np.random.default_rng(seed))
    B = pullback_assignment(A, f.edge_map)
    assert check_assignment(f.total, B) == []
    assert np.array_equal(lift_pre_delta(f, pre).phi, build_pre_delta(f.total, B).phi)


@SETTINGS
@given(st.integers(0, 2**12 - 1), st.integers(0, 5))
def test_every_base_choice_flattens(index, qi):
    X = F.cube_skeleton()
    pre = build_pre_delta(X, assign_links(X, L3))
    from cubecover.holonomy import choices_from_index

    dc = extend_to_delta(X, pre, choices_from_index(index, 12, 2))
    assert verify_delta(X, dc) == []
    f, up = kernel_cover(X, dc)
    assert verify_cover(f) == []
    assert global_holonomy(f.total, up).trivial
    q = P.symmetric_group(3)[qi]
    col = build_orbicover(f.total, up, 0, q)
    assert verify_lcoloring(f.total, col, L3) == []


@SETTINGS
@given(st.integers(0, 2**31))
def test_commuting_voltage_on_torus_lifts(seed):
    rng = np.random.default_rng(seed)
    X = F.torus()
    k = int(rng.integers(2, 6))
    a = tuple(int(v) for v in rng.permutation(k))
    # a power of a commutes with a
    b = P.identity(k)
    for _ in range(int(rng.integers(0, k))):
        b = P.compose(a, b)
    f = voltage_cover(X, VoltageAssignment.from_dict(X, k, {0: a, 2: b}))
    assert verify_cover(f) == []
    assert f.total.n_squares == k


def _involution(k, rng):
    pts = [int(v) for v in rng.permutation(k)]
    p = list(range(k))
    for j in range(int(rng.integers(1, k // 2 + 1))):
        a, b = pts[2 * j], pts[2 * j + 1]
        p[a], p[b] = b, a
    return tuple(p)


@SETTINGS
@given(st.integers(0, 2**31), st.integers(2, 6))
def test_davis_quotients_from_random_involutions(seed, k):
    # K_2 on three points has no edges, so any involutions give an L-complex
    rng = np.random.default_rng(seed)
    L = build_kneser(3, 2)
    X = davis_quotient(L, [_involution(k, rng) for _ in range(3)])
    assert check_assignment(X, assign_links(X, L)) == []
    assert np.all(np.bincount(X.src, minlength=X.n_vertices) == 3)
