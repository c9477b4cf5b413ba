import numpy as np
import pytest

import cubecover.fixtures as F
from cubecover.complex import (
    adjacency_map,
    assign_links,
    check_assignment,
    check_npc,
    from_arrays,
    from_undirected,
    link,
    pullback_assignment,
    square_forms,
    validate_complex,
)
from cubecover.errors import (
    DanglingReference,
    DimensionLimit,
    LinkMismatch,
    NonInvolutiveReversal,
    OpenSquareBoundary,
)
from cubecover.kneser import build_kneser


def test_theta_cells():
    X = F.theta()
    assert X.cell_counts() == (2, 3, 0, 0)
    assert X.dimension == 1
    assert np.array_equal(X.rev[X.rev], np.arange(X.n_edges))


def test_corrupted_square_names_the_square():
    with pytest.raises(OpenSquareBoundary, match="square/0"):
        from_arrays(*F.corrupted_square_arrays())


def test_dangling_and_reversal_errors():
    with pytest.raises(DanglingReference):
        validate_complex(2, [0, 1], [1, 5], [1, 0])
    with pytest.raises(NonInvolutiveReversal):
        validate_complex(2, [0, 1, 0], [1, 0, 1], [1, 2, 0])
    with pytest.raises(DanglingReference):
        from_undirected(2, [(0, 1)], [(0, 9, 0, 0)])


def test_dimension_limit():
    X = F.single_cube()
    with pytest.raises(DimensionLimit):
        validate_complex(
            X.n_vertices, X.src, X.dst, X.rev, X.squares,
            np.zeros((1, 4, 4), dtype=np.int64), np.zeros((1, 8), dtype=np.int64),
        )


def test_single_cube_links_are_triangles():
    X = F.single_cube()
    assert X.cell_counts() == (8, 12, 6, 1)
    for x in range(8):
        lk = link(X, x)
        assert len(lk.vertices) == 3 and len(lk.edges) == 3 and len(lk.triangles) == 1
    assert check_npc(X) == []
    A = assign_links(X, build_kneser(3, 1))
    assert check_assignment(X, A) == []


def test_square_forms_are_the_dihedral_orbit():
    X = F.strip()
    forms = square_forms(X.squares[0], X.rev)
    assert len(set(forms)) == 8
    for f in forms:
        e1, e2, e1p, e2p = f
        assert X.dst[e1] == X.src[e2] and X.dst[e1p] == X.dst[e2] and X.src[e1] == X.src[e2p]


def test_non_simplicial_link_detected():
    report = check_npc(F.glued_squares())
    assert report == ["CELL vertex/1: link edge {0,3} is repeated (non-simplicial link)"]


def test_petersen_davis_links_match():
    L = build_kneser(5, 2)
    X = F.petersen_davis()
    assert check_npc(X) == []
    A = assign_links(X, L)
    assert check_assignment(X, A) == []
    # every 0-cube sees every label once
    labels = np.sort(A.end_label[X.ends_at], axis=1)
    assert np.all(labels == np.arange(10))


def test_link_mismatch_on_wrong_valence():
    with pytest.raises(LinkMismatch, match="4 link vertices"):
        assign_links(F.complete_graph(5), build_kneser(3, 2))


def test_link_mismatch_on_structure():
    # the torus link is a 4-cycle; K_2 on 5 points is the Petersen graph
    with pytest.raises(LinkMismatch):
        assign_links(F.torus(), build_kneser(5, 2))


def test_pullback_assignment_along_a_cover(rng):
    L = build_kneser(3, 2)
    X = F.theta()
    A = assign_links(X, L)
    f = F.random_graph_cover(X, 3, rng)
    B = pullback_assignment(A, f.edge_map)
    assert check_assignment(f.total, B) == []


def test_adjacency_map_across_an_edge():
    X = F.strip()
    e = 2 * 5  # middle vertical 1-cube, 1 -> 4
    ad = adjacency_map(X, ("edge", e), int(X.src[e]), int(X.dst[e]))
    # the end of e at its source is r(e); at its terminus it is e
    assert ad.source == frozenset({int(X.rev[e])}) and ad.target == frozenset({e})
    vm = ad.vertex_map
    # horizontal ends at 1 go to the parallel horizontal ends at 4
    assert vm == {0: 4, 3: 7}


def test_adjacency_map_is_involutive_on_a_square():
    X = F.strip()
    sq = 0
    corners = X.square_corners[sq]
    x, y = int(corners[0, 0]), int(corners[3, 0])
    there = adjacency_map(X, ("square", sq), x, y)
    back = adjacency_map(X, ("square", sq), y, x)
    for s, t in there.simplex_map.items():
        assert back(t) == s
