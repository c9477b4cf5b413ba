import os
import subprocess
import sys

import numpy as np
import pytest

import cubecover._kernels as K
import cubecover.fixtures as F
from cubecover.complex import assign_links
from cubecover.deltacat import all_parallel_holonomies, build_pre_delta, extend_to_delta, verify_pre_delta
from cubecover.holonomy import flat_base_choices, global_holonomy, kernel_cover
from cubecover.hyperplane import compute_hyperplanes
from cubecover.kneser import build_kneser
from cubecover.leighton import build_orbicover, fiber_product

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba disabled or missing")
L3 = build_kneser(3, 2)
L5 = build_kneser(5, 2)


def _both(monkeypatch, names, fn):
    out = {}
    for backend in ("numba", "numpy"):
        for name in names:
            monkeypatch.setattr(K, name, K.flavour(name, backend))
        out[backend] = fn()
    return out["numba"], out["numpy"]


@needs_numba
def test_components(monkeypatch):
    X = F.twisted_davis_cover().base
    a, b = _both(monkeypatch, ["components"], lambda: compute_hyperplanes(X))
    assert np.array_equal(a.label, b.label) and np.array_equal(a.orient, b.orient)


@needs_numba
def test_recover_star_and_square_defects(monkeypatch):
    X = F.twisted_davis_cover().base
    A = assign_links(X, L5)

    def run():
        pre = build_pre_delta(X, A)
        return pre.phi, verify_pre_delta(X, pre)

    (pa, ra), (pb, rb) = _both(monkeypatch, ["recover_star", "square_defects"], run)
    assert np.array_equal(pa, pb) and ra == rb == []


@needs_numba
def test_square_defects_on_corrupted_category(monkeypatch):
    from cubecover.deltacat import PreDeltaCategory

    X = F.petersen_davis()
    pre = build_pre_delta(X, assign_links(X, L5))
    phi = pre.phi.copy()
    rows = np.flatnonzero((phi >= 0).sum(axis=1) > 1)[:20]
    for r in rows:
        dom = np.flatnonzero(phi[r] >= 0)
        phi[r, dom[:2]] = phi[r, dom[:2]][::-1]
    bad = PreDeltaCategory(X, pre.assignment, phi)
    a, b = _both(monkeypatch, ["square_defects"], lambda: verify_pre_delta(X, bad))
    assert a == b and a


@needs_numba
def test_forest_kernels(monkeypatch):
    X = F.twisted_davis_cover().base
    pre = build_pre_delta(X, assign_links(X, L5))

    def run():
        hol = all_parallel_holonomies(X, pre)
        return [(h.image, h.transport.tolist()) for h in hol]

    a, b = _both(monkeypatch, ["forest_transport", "forest_gains"], run)
    assert a == b
    Y = F.petersen_graph()
    dc = extend_to_delta(Y, build_pre_delta(Y, assign_links(Y, L3)))
    a, b = _both(monkeypatch, ["forest_transport", "forest_gains"], lambda: global_holonomy(Y, dc).gains)
    assert np.array_equal(a, b)


@needs_numba
def test_fiber_bfs(monkeypatch):
    X = F.petersen_graph()
    dc = extend_to_delta(X, build_pre_delta(X, assign_links(X, L3)))
    f, up = kernel_cover(X, dc)
    col = build_orbicover(f.total, up)
    T = F.theta()
    tdc = extend_to_delta(T, build_pre_delta(T, assign_links(T, L3)))
    tcol = build_orbicover(T, tdc)

    def run():
        fp = fiber_product(f.total, col, T, tcol, (3, 1))
        return fp.pairs, fp.complex.dst

    (pa, da), (pb, db) = _both(monkeypatch, ["fiber_bfs"], run)
    assert np.array_equal(pa, pb) and np.array_equal(da, db)


@needs_numba
def test_flat_search_backends_agree():
    X = F.cube_skeleton()
    pre = build_pre_delta(X, assign_links(X, L3))
    a = flat_base_choices(X, pre, "numba")
    b = flat_base_choices(X, pre, "numpy")
    assert np.array_equal(a, b) and a.any() and not a.all()


def test_disable_flag_selects_numpy():
    env = dict(os.environ, CUBECOVER_DISABLE_NUMBA="1")
    code = (
        "import cubecover._kernels as K, cubecover.fixtures as F;"
        "from cubecover.leighton import common_cover; from cubecover.kneser import build_kneser;"
        "cc = common_cover(F.petersen_graph(), F.theta(), build_kneser(3, 2));"
        "print(K.BACKEND, K.HAVE_NUMBA, cc.complex.n_vertices)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False", "60"]
