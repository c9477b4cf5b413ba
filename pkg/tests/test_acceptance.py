"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest.
Expected values marked "oracle" were computed by ``tests/oracles.py`` and
frozen here.
"""

import math
import sys
import time
from itertools import permutations
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402

import cubecover.fixtures as F  # noqa: E402
from cubecover.complex import assign_links, pullback_assignment  # noqa: E402
from cubecover.cover import verify_cover  # noqa: E402
from cubecover.deltacat import build_pre_delta, extend_to_delta, lift_pre_delta, verify_pre_delta  # noqa: E402
from cubecover.holonomy import (  # noqa: E402
    check_deck_regular,
    choices_from_index,
    flat_base_choices,
    global_holonomy,
    is_flat,
    kernel_cover,
)
from cubecover.hyperplane import all_clean, certify_all, compute_hyperplanes, two_sided_cover  # noqa: E402
from cubecover.kneser import build_kneser, expected_counts, is_square_free, recover_bijection  # noqa: E402
from cubecover.leighton import (  # noqa: E402
    build_orbicover,
    common_cover,
    orbicover_pipeline,
    verify_lcoloring,
)

L3 = build_kneser(3, 2)
L5 = build_kneser(5, 2)

# oracle: davis_counts(10, Petersen edges) -> 1024 0-cubes, 5120 1-cubes, 3840 squares
PETERSEN_DAVIS_CELLS = (1024, 5120, 3840, 0)
# oracle: proper_three_edge_colourings(Petersen) is empty
PETERSEN_COLOURINGS = 0

RESULTS: dict[int, str] = {}


def report(number: int, title: str, ok: bool, detail: str, capsys=None) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}: {title}: {detail}"
    RESULTS[number] = line
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


def _petersen_edges():
    return [tuple(e) for e in L5.edges]


# ---------------------------------------------------------------- 1


def check_kneser():
    t0 = time.perf_counter()
    rows = []
    for n, d in [(2, 1), (2, 2), (2, 3), (3, 2)]:
        K = build_kneser(n * d + 1, n)
        V, degs, _ = oracles.kneser_counts(n, d)
        want_v, want_deg = math.comb(n * d + 1, n), math.comb(n * (d - 1) + 1, n)
        got_deg = {bin(a).count("1") for a in K.adjacency}
        rows.append(K.num_vertices == want_v == V and got_deg == {want_deg} == degs)
        rows.append(expected_counts(n, d) == (want_v, want_deg))
    P = build_kneser(5, 2)
    rows.append(P.num_vertices == 10 and len(P.edges) == 15 and {bin(a).count("1") for a in P.adjacency} == {3})
    rows.append(is_square_free(P)[0] and not oracles.has_induced_four_cycle(5, 2))
    rows.append(not is_square_free(build_kneser(7, 2))[0] and oracles.has_induced_four_cycle(7, 2))
    dt = time.perf_counter() - t0
    return all(rows) and dt < 1.0, f"{sum(rows)}/{len(rows)} checks in {dt:.2f}s (limit 1s)"


def test_criterion_1_kneser(capsys):
    ok, detail = check_kneser()
    report(1, "Kneser suite", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 2


def check_bijections():
    t0 = time.perf_counter()
    bad = 0
    for p in permutations(range(5)):
        bad += recover_bijection(L5, L5, L5.induced_vertex_map(p)).forward != p
    K = build_kneser(7, 3)
    rng = np.random.default_rng(2)
    for _ in range(500):
        p = tuple(int(a) for a in rng.permutation(7))
        bad += recover_bijection(K, K, K.induced_vertex_map(p)).forward != p
    dt = time.perf_counter() - t0
    return bad == 0 and dt < 5.0, f"120 + 500 round trips, {bad} failures, {dt:.2f}s (limit 5s)"


def test_criterion_2_bijection_recovery(capsys):
    ok, detail = check_bijections()
    report(2, "bijection recovery", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 3


def check_pre_delta():
    t0 = time.perf_counter()
    X = F.petersen_davis()
    counts = X.cell_counts()
    A = assign_links(X, L5)
    pre = build_pre_delta(X, A)
    rep = verify_pre_delta(X, pre)
    dt = time.perf_counter() - t0
    ok = counts == PETERSEN_DAVIS_CELLS and rep == [] and dt < 120
    return ok, (
        f"{counts[0]} 0-cubes, {counts[1]} 1-cubes, {counts[2]} squares (oracle count), "
        f"{len(rep)} violations, {dt:.1f}s (limit 120s)"
    )


def test_criterion_3_pre_delta_on_davis(capsys):
    ok, detail = check_pre_delta()
    report(3, "pre-category on the Davis quotient", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 4


def check_uniqueness():
    rng = np.random.default_rng(4)
    instances = []
    for X in (F.theta(), F.cube_skeleton()):
        A = assign_links(X, L3)
        instances.append(("base", X, A, None))
        f = F.random_graph_cover(X, 3, rng)
        instances.append(("cover", X, A, f))
    agree = 0
    for _, X, A, f in instances:
        pre = build_pre_delta(X, A)
        if f is None:
            # on cubic graphs each domain is one label, so the map is forced
            forced = oracles.forced_partial_maps(X.rev.tolist(), A.end_mask.tolist(), 3)
            agree += np.array_equal(pre.phi, np.array(forced))
        else:
            lifted = lift_pre_delta(f, pre)
            fresh = build_pre_delta(f.total, pullback_assignment(A, f.edge_map))
            agree += np.array_equal(lifted.phi, fresh.phi) and verify_pre_delta(f.total, fresh) == []
    return agree == len(instances), f"{agree}/{len(instances)} instances agree edge by edge"


def test_criterion_4_uniqueness(capsys):
    ok, detail = check_uniqueness()
    report(4, "uniqueness oracle", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 5


def check_flattening(configs=50):
    rng = np.random.default_rng(5)
    passed = total = nontrivial = 0
    for X in (F.theta(), F.cube_skeleton()):
        pre = build_pre_delta(X, assign_links(X, L3))
        H = len(compute_hyperplanes(X))
        for _ in range(configs):
            idx = int(rng.integers(0, 2**H))
            dc = extend_to_delta(X, pre, choices_from_index(idx, H, 2))
            hol = global_holonomy(X, dc)
            f, up = kernel_cover(X, dc)
            ok = verify_cover(f) == [] and is_flat(f.total, up) and check_deck_regular(f, hol.image) == []
            ok = ok and f.degree == len(hol.image)
            passed += ok
            total += 1
            nontrivial += f.degree > 1
    return passed == total, f"{passed}/{total} kernel covers verified, flat and deck-regular ({nontrivial} of degree > 1)"


def test_criterion_5_flattening(capsys):
    ok, detail = check_flattening()
    report(5, "holonomy flattening", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 6


def check_leighton_graphs():
    t0 = time.perf_counter()
    P = F.petersen_graph()
    pre = build_pre_delta(P, assign_links(P, L3))
    flat = flat_base_choices(P, pre)
    oracle = len(oracles.proper_three_edge_colourings(10, _petersen_edges()))
    cc = common_cover(P, F.theta(), L3)
    chains_ok = verify_cover(cc.cover1()) == [] and verify_cover(cc.cover2()) == []
    steps_ok = all(verify_cover(f) == [] for f in cc.chain1 + cc.chain2)
    cubic = bool(np.all(np.bincount(cc.complex.src) == 3))
    kernel_deg = next(int(s.split()[-1]) for s in cc.inputs[0].stages if s.startswith("kernel cover"))
    dt = time.perf_counter() - t0
    ok = (
        chains_ok and steps_ok and cubic and not flat.any() and oracle == PETERSEN_COLOURINGS
        and kernel_deg <= 6 and dt < 30
    )
    return ok, (
        f"common cover {cc.complex.cell_counts()[:2]}, degrees {cc.cover1().degree}/{cc.cover2().degree}; "
        f"{int(flat.sum())}/{len(flat)} flat base choices, oracle colourings {oracle}; "
        f"flattening degree {kernel_deg} (limit 6); {dt:.1f}s (limit 30s)"
    )


def test_criterion_6_leighton_graphs(capsys):
    ok, detail = check_leighton_graphs()
    report(6, "Leighton for graphs", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 7


def _colourings():
    out = []
    for X, L in ((F.theta(), L3), (F.cube_skeleton(), L3), (F.petersen_graph(), L3), (F.petersen_davis(), L5)):
        oc = orbicover_pipeline(X, L)
        out.append((oc.complex, oc.coloring, L))
    X = F.cube_skeleton()
    pre = build_pre_delta(X, assign_links(X, L3))
    dc = extend_to_delta(X, pre, choices_from_index(1234, 12, 2))
    f, up = kernel_cover(X, dc)
    out.append((f.total, build_orbicover(f.total, up, 0, (2, 0, 1)), L3))
    oc = orbicover_pipeline(F.twisted_davis_cover().base, L5)
    out.append((oc.complex, oc.coloring, L5))
    return out


def check_mutations(per_instance=100):
    import dataclasses

    rng = np.random.default_rng(7)
    clean = missed = tried = 0
    cols = _colourings()
    for X, col, L in cols:
        clean += verify_lcoloring(X, col, L) == []
        und = X.undirected
        for _ in range(per_instance):
            e = int(rng.choice(und))
            c = int(rng.integers(0, L.num_vertices - 1))
            c += c >= col.colors[e]
            colors = col.colors.copy()
            colors[e] = colors[X.rev[e]] = c
            tried += 1
            missed += verify_lcoloring(X, dataclasses.replace(col, colors=colors), L) == []
    ok = clean == len(cols) and missed == 0
    return ok, f"{clean}/{len(cols)} colourings verify; {tried - missed}/{tried} recolourings detected"


def test_criterion_7_orbicover_certificate(capsys):
    ok, detail = check_mutations()
    report(7, "orbi-cover certificate", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 8


def check_self_cover():
    t0 = time.perf_counter()
    X = F.petersen_davis()
    cc = common_cover(X, X, L5)
    rows = []
    for chain in (cc.chain1, cc.chain2):
        for f in chain + [cc.cover1() if chain is cc.chain1 else cc.cover2()]:
            rows.append(verify_cover(f) == [])
            tc, bc = f.total.cell_counts(), f.base.cell_counts()
            rows.append(all(tc[d] == f.degree * bc[d] for d in range(4)))
    dt = time.perf_counter() - t0
    ok = all(rows) and dt < 300
    return ok, (
        f"self-cover {cc.complex.cell_counts()}, degrees {cc.cover1().degree}/{cc.cover2().degree}; "
        f"{sum(rows)}/{len(rows)} verification and bookkeeping checks; {dt:.1f}s (limit 300s)"
    )


def test_criterion_8_fiber_product(capsys):
    ok, detail = check_self_cover()
    report(8, "fibre product self-cover", ok, detail, capsys)
    assert ok, detail


# ---------------------------------------------------------------- 9


def check_pathologies():
    rows = []
    torus = certify_all(F.torus())
    rows.append(any(c.self_osculating and c.osculation_witness == 0 for c in torus))
    rows.append(not all_clean(F.loop())[0])
    for name in ("mobius", "klein"):
        X = F.FIXTURES[name]()
        hs = compute_hyperplanes(X)
        before = sum(not h.two_sided for h in hs)
        (h,) = [h.id for h in hs if not h.two_sided]
        f = two_sided_cover(X, hs, h)
        hs2 = compute_hyperplanes(f.total)
        over = {int(hs2.label[e]) for e in np.flatnonzero(hs.label[f.edge_map] == h)}
        after = sum(not hs2[g].two_sided for g in over)
        rows.append(verify_cover(f) == [] and before == 1 and after == 0)
    return all(rows), f"{sum(rows)}/{len(rows)} checks (torus witness, loop unclean, Mobius and Klein repaired)"


def test_criterion_9_pathologies(capsys):
    ok, detail = check_pathologies()
    report(9, "pathology detection", ok, detail, capsys)
    assert ok, detail


CHECKS = [
    (1, "Kneser suite", check_kneser),
    (2, "bijection recovery", check_bijections),
    (3, "pre-category on the Davis quotient", check_pre_delta),
    (4, "uniqueness oracle", check_uniqueness),
    (5, "holonomy flattening", check_flattening),
    (6, "Leighton for graphs", check_leighton_graphs),
    (7, "orbi-cover certificate", check_mutations),
    (8, "fibre product self-cover", check_self_cover),
    (9, "pathology detection", check_pathologies),
]


if __name__ == "__main__":
    failures = 0
    for number, title, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as err:  # report and keep going
            ok, detail = False, f"{type(err).__name__}: {err}"
        report(number, title, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)
