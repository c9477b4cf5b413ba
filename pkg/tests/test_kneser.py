from itertools import permutations

import numpy as np
import pytest

from cubecover.kneser import (
    LabelSet,
    build_kneser,
    expected_counts,
    is_square_free,
    kneser_parameters,
    recover_bijection,
    sub_kneser,
    vertex_star,
)

# frozen from oracles.kneser_counts
COUNTS = {(2, 1): (3, 0, 0), (2, 2): (10, 3, 15), (2, 3): (21, 10, 105), (3, 2): (35, 4, 70)}


@pytest.mark.parametrize("nd", sorted(COUNTS))
def test_counts_match_enumeration(nd):
    n, d = nd
    K = build_kneser(n * d + 1, n)
    V, deg, E = COUNTS[nd]
    assert K.num_vertices == V
    assert len(K.edges) == E
    assert {bin(a).count("1") for a in K.adjacency} == {deg}
    assert expected_counts(n, d) == (V, deg)
    assert kneser_parameters(K) == (n, d)


def test_dimension_is_d_minus_one():
    assert build_kneser(5, 2).dimension == 1
    assert build_kneser(7, 2).dimension == 2
    assert build_kneser(7, 3).dimension == 1


def test_singletons_give_a_simplex():
    K = build_kneser(4, 1)
    assert K.dimension == 3


def test_petersen_square_free_but_k2_7_not():
    assert is_square_free(build_kneser(5, 2))[0]
    ok, witness = is_square_free(build_kneser(7, 2))
    assert not ok
    K = build_kneser(7, 2)
    a, b, c, d = witness
    adj = lambda u, v: bool(K.adjacency[u] >> v & 1)
    assert adj(a, b) and adj(b, c) and adj(c, d) and adj(d, a)
    assert not adj(a, c) and not adj(b, d)


def test_string_labels():
    K = build_kneser(("a", "b", "c", "d", "e"), 2)
    assert K.subset(0) == ("a", "b")
    assert K.vertex_of(("a", "b")) == 0


def test_labels_must_be_distinct():
    with pytest.raises(ValueError):
        LabelSet((1, 1, 2))


def test_sub_kneser_inclusion():
    K = build_kneser(5, 2)
    S, inc = sub_kneser(K, (1, 2, 3))
    assert S.num_vertices == 3 and len(S.edges) == 0
    assert [K.subset(v) for v in inc] == [S.subset(v) for v in range(3)]
    assert sub_kneser(K, (1,)) == (None, [])


def test_vertex_star_on_petersen_is_neighbours():
    K = build_kneser(5, 2)
    star = vertex_star(K, 0)
    assert {s[0] for s in star} == {v for v in range(10) if K.adjacency[0] >> v & 1}


def test_recover_bijection_exhaustive_on_petersen():
    K = build_kneser(5, 2)
    for p in permutations(range(5)):
        b = recover_bijection(K, K, K.induced_vertex_map(p))
        assert b.forward == p


def test_recover_bijection_rejects_non_induced(rng):
    from cubecover.errors import NotInduced

    K = build_kneser(5, 2)
    iso = list(range(10))
    iso[0], iso[1] = iso[1], iso[0]
    with pytest.raises(NotInduced):
        recover_bijection(K, K, iso)
