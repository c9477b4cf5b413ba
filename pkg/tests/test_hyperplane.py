import numpy as np
import pytest

import cubecover.fixtures as F
from cubecover.cover import NotFound, verify_cover
from cubecover.errors import AlreadyTwoSided, NotClean
from cubecover.hyperplane import (
    all_clean,
    certify_all,
    certify_clean,
    check_certificate,
    compute_hyperplanes,
    search_clean_cover,
    sides_and_parallel_edges,
    two_sided_cover,
)


def test_strip_has_three_clean_hyperplanes():
    X = F.strip()
    hs = compute_hyperplanes(X)
    assert len(hs) == 3
    sizes = sorted(len(h.dual_edges) for h in hs)
    assert sizes == [4, 4, 6]  # directed 1-cubes
    ok, certs = all_clean(X)
    assert ok
    for c in certs:
        assert check_certificate(X, hs, c)


def test_strip_long_hyperplane_sides_are_paths():
    X = F.strip()
    hs = compute_hyperplanes(X)
    long = next(h for h in hs if len(h.dual_edges) == 6)
    minus, plus = sides_and_parallel_edges(X, hs, long.id)
    assert sorted(minus.vertices.tolist()) in ([0, 1, 2], [3, 4, 5])
    assert sorted(plus.vertices.tolist()) in ([0, 1, 2], [3, 4, 5])
    assert set(minus.vertices.tolist()).isdisjoint(plus.vertices.tolist())
    # two undirected 1-cubes on each side
    assert len(minus.edges) == 4 and len(plus.edges) == 4


def test_product_structure_rows():
    X = F.strip()
    hs = compute_hyperplanes(X)
    for c in certify_all(X, hs):
        for d, a, b in c.product_structure.tolist():
            assert X.src[d] == a and X.dst[d] == b


def test_torus_self_osculation_witness():
    X = F.torus()
    certs = certify_all(X)
    assert all(c.self_osculating and c.osculation_witness == 0 for c in certs)
    assert certs[0].lines()[0] == "CELL vertex/0: hyperplane 0 self-osculates"


def test_loop_is_not_clean():
    ok, certs = all_clean(F.loop())
    assert not ok
    assert not certs[0].clean


def test_sides_refused_when_not_clean():
    X = F.loop()
    with pytest.raises(NotClean):
        sides_and_parallel_edges(X, compute_hyperplanes(X), 0)


@pytest.mark.parametrize("name", ["mobius", "klein"])
def test_two_sided_cover_repairs_one_sided(name):
    X = F.FIXTURES[name]()
    hs = compute_hyperplanes(X)
    one = [h.id for h in hs if not h.two_sided]
    assert len(one) == 1
    f = two_sided_cover(X, hs, one[0])
    assert f.degree == 2 and verify_cover(f) == []
    hs2 = compute_hyperplanes(f.total)
    over = {int(hs2.label[e]) for e in np.flatnonzero(hs.label[f.edge_map] == one[0])}
    assert over and all(hs2[h].two_sided for h in over)


def test_two_sided_cover_refuses_clean_hyperplane():
    X = F.strip()
    with pytest.raises(AlreadyTwoSided):
        two_sided_cover(X, compute_hyperplanes(X), 0)


def test_clean_search_on_torus_finds_degree_four():
    f = search_clean_cover(F.torus())
    assert not isinstance(f, NotFound)
    assert f.degree == 4
    assert verify_cover(f) == []
    assert all_clean(f.total)[0]
    assert f.total.cell_counts() == (4, 8, 4, 0)


def test_clean_search_on_loop():
    f = search_clean_cover(F.loop())
    assert not isinstance(f, NotFound)
    assert all_clean(f.total)[0]


def test_clean_search_budget_exhausted():
    res = search_clean_cover(F.torus(), budget=2)
    assert isinstance(res, NotFound) and not res
    assert res.budget == 2


def test_davis_quotient_is_clean():
    X = F.petersen_davis()
    ok, certs = all_clean(X)
    assert ok and len(certs) == len(compute_hyperplanes(X))


def test_certificate_for_single_hyperplane():
    X = F.klein()
    hs = compute_hyperplanes(X)
    c = certify_clean(X, hs, 1)
    assert not c.two_sided and c.two_sided_witness is not None
    assert check_certificate(X, hs, c)
