"""L-colourings (orbi-covers of ``X_L``), colour-matched fibre products, and the
end-to-end common-cover pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .complex import (
    FACE_LAYOUT,
    CubeComplex,
    DeltaAssignment,
    assign_links,
    axes_square,
    axis_edge,
    check_npc,
    cube_face_axes,
    pullback_assignment,
    slot,
    validate_complex,
)
from .cover import (
    CoverMap,
    NotFound,
    _key_table,
    _verified,
    compose_chain,
    cube_key,
    identity_cover,
    spanning_tree,
    square_keys,
)
from .deltacat import DeltaCategory, build_pre_delta, extend_to_delta, lift_pre_delta
from .errors import (
    ColorSchemeMismatch,
    CubeCoverError,
    EmptyProduct,
    LinkMismatch,
    NotFlat,
    Obstruction,
)
from .holonomy import global_holonomy, kernel_cover
from .hyperplane import all_clean, search_clean_cover
from .kneser import KneserComplex


@dataclass(frozen=True, eq=False)
class LColoring:
    """``colors[e]``: vertex of ``L`` on the directed 1-cube ``e`` (equal on ``r(e)``).
    ``q[x]``: the identification ``Δ_x → Δ`` used at each 0-cube, when known."""

    complex: CubeComplex
    L: KneserComplex
    colors: np.ndarray
    q: np.ndarray | None = None

    def color_subset(self, e: int) -> tuple:
        return self.L.subset(int(self.colors[e]))


def same_scheme(L1: KneserComplex, L2: KneserComplex) -> bool:
    return L1.ground == L2.ground and L1.n == L2.n


def build_orbicover(
    X: CubeComplex, dc: DeltaCategory, basepoint: int = 0, q_base=None
) -> LColoring:
    """Colour ``e = (x, y)`` dual to ``Λ`` by ``q_x(Λ_x)``, with ``q_v = q_base ∘ T_v⁻¹``."""
    L = dc.assignment.L
    N = L.size
    hol = global_holonomy(X, dc, basepoint)
    if not hol.trivial:
        e = int(next(e for e in hol.loop_edges if tuple(hol.gains[e]) != tuple(range(N))))
        raise NotFlat(_loop_through(X, hol.tree_into, basepoint, e))
    qb = np.arange(N) if q_base is None else np.asarray(q_base, dtype=np.int64)
    if sorted(qb.tolist()) != list(range(N)):
        raise ValueError("q_base must be a permutation of the ground set")
    T = hol.transport
    Tinv = np.argsort(T, axis=1)
    q = qb[Tinv]
    masks = dc.assignment.end_mask
    y = X.dst
    bits = (masks[:, None] >> np.arange(N)) & 1
    img = np.where(bits.astype(bool), np.left_shift(1, q[y]), 0)
    cmask = np.bitwise_or.reduce(img, axis=1)
    colors = np.array([L.index_of_mask[int(c)] for c in cmask.tolist()], dtype=np.int64)
    col = LColoring(X, L, colors, q)
    report = verify_lcoloring(X, col, L)
    if report:
        raise CubeCoverError("orbi-cover colouring failed verification: " + report[0])
    return col


def _loop_through(X: CubeComplex, into: np.ndarray, root: int, e: int) -> list[int]:
    def path_to(v):
        out = []
        while v != root:
            t = int(into[v])
            out.append(t)
            v = int(X.src[t])
        return out[::-1]

    back = [int(X.rev[t]) for t in path_to(int(X.dst[e]))[::-1]]
    return path_to(int(X.src[e])) + [e] + back


def _adjacency_matrix(L: KneserComplex) -> np.ndarray:
    adj = np.zeros((L.num_vertices, L.num_vertices), dtype=bool)
    for i, j in L.edges:
        adj[i, j] = adj[j, i] = True
    return adj


def verify_lcoloring(X: CubeComplex, col: LColoring, L: KneserComplex) -> list[str]:
    """Half-edge consistency, square opposites, disjoint corners, and local
    bijectivity of the edge-end colouring onto ``L``."""
    out = []
    c = np.asarray(col.colors, dtype=np.int64)
    if len(c) != X.n_edges:
        return [f"CELL coloring/0: {len(c)} colours for {X.n_edges} directed 1-cubes"]
    if not same_scheme(col.L, L):
        return ["CELL coloring/0: colouring is against a different L"]
    if len(c) and (c.min() < 0 or c.max() >= L.num_vertices):
        return ["CELL coloring/0: colour out of range"]
    for e in np.flatnonzero(c != c[X.rev]):
        if e < X.rev[e]:
            out.append(f"CELL edge/{e}: the two halves of the 1-cube have different colours")
    sq = X.squares
    bad_v: set[int] = set()
    if len(sq):
        for s in np.flatnonzero((c[sq[:, 0]] != c[sq[:, 2]]) | (c[sq[:, 1]] != c[sq[:, 3]])):
            out.append(f"CELL square/{s}: opposite edges have different colours")
        corners = X.square_corners.reshape(-1, 3)
        adj = _adjacency_matrix(L)
        for i in np.flatnonzero(~adj[c[corners[:, 1]], c[corners[:, 2]]]):
            x = int(corners[i, 0])
            out.append(f"CELL square/{i // 4}: corner at 0-cube {x} has intersecting colours")
            bad_v.add(x)
    nv = L.num_vertices
    keys = X.dst * nv + c
    counts = np.bincount(keys, minlength=X.n_vertices * nv).reshape(X.n_vertices, nv)
    for x in np.flatnonzero((counts != 1).any(axis=1)):
        out.append(f"CELL vertex/{x}: edge-end colours are not a bijection onto V(L)")
    n_edges_L = len(L.edges)
    if n_edges_L or len(sq):
        corners = X.square_corners.reshape(-1, 3)
        pair = np.stack([corners[:, 0], np.minimum(c[corners[:, 1]], c[corners[:, 2]]), np.maximum(c[corners[:, 1]], c[corners[:, 2]])], axis=1)
        per = np.bincount(corners[:, 0], minlength=X.n_vertices) if len(corners) else np.zeros(X.n_vertices, int)
        uniq = np.unique(pair, axis=0) if len(pair) else pair
        distinct = np.bincount(uniq[:, 0], minlength=X.n_vertices) if len(uniq) else np.zeros(X.n_vertices, int)
        for x in np.flatnonzero((per != n_edges_L) | (distinct != n_edges_L)):
            if int(x) not in bad_v:
                out.append(f"CELL vertex/{x}: link edges do not map bijectively onto E(L)")
    return out


# ---------------------------------------------------------------- fibre products


def _out_table(X: CubeComplex, colors: np.ndarray, C: int) -> np.ndarray:
    out = np.full((X.n_vertices, C), -1, dtype=np.int64)
    out[X.src, colors] = np.arange(X.n_edges)
    if np.any(out < 0):
        raise EmptyProduct("colouring leaves some colour missing at a 0-cube")
    return out


@dataclass(frozen=True, eq=False)
class FiberProduct:
    complex: CubeComplex
    p1: CoverMap
    p2: CoverMap
    coloring: LColoring
    pairs: np.ndarray


def fiber_product(
    X1: CubeComplex, col1: LColoring, X2: CubeComplex, col2: LColoring, base_pair: tuple[int, int] = (0, 0)
) -> FiberProduct:
    """The component of ``base_pair`` in the colour-matched product over ``X_L``."""
    if not same_scheme(col1.L, col2.L):
        raise ColorSchemeMismatch("colourings use different Kneser complexes")
    L = col1.L
    C = L.num_vertices
    out1 = _out_table(X1, col1.colors, C)
    out2 = _out_table(X2, col2.colors, C)
    pairs, head = K.fiber_bfs(out1, out2, X1.dst, X2.dst, int(base_pair[0]), int(base_pair[1]))
    V = len(pairs)
    if V == 0:
        raise EmptyProduct("no product 0-cubes")
    u = np.repeat(np.arange(V), C)
    cc = np.tile(np.arange(C), V)
    src = u
    dst = head.reshape(-1)
    rev = dst * C + cc
    em1 = out1[pairs[u, 0], cc]
    em2 = out2[pairs[u, 1], cc]

    by_first: dict[int, list[int]] = {}
    for i, a in enumerate(pairs[:, 0].tolist()):
        by_first.setdefault(a, []).append(i)
    sq_rows, sm1, sm2 = [], [], []
    table2 = _key_table(square_keys(X2.squares, X2.rev)) if X2.n_squares else {}
    for s, (e1, e2, e1p, e2p) in enumerate(X1.squares.tolist()):
        c1, c2 = int(col1.colors[e1]), int(col1.colors[e2p])
        for w in by_first.get(int(X1.src[e1]), []):
            wy, wyp = int(head[w, c1]), int(head[w, c2])
            sq_rows.append((w * C + c1, wy * C + c2, wyp * C + c1, w * C + c2))
            sm1.append(s)
    sq = np.array(sq_rows, dtype=np.int64).reshape(-1, 4)
    if len(sq):
        img2 = em2[sq]
        for key in square_keys(img2, X2.rev).tolist():
            t = table2.get(tuple(key))
            if t is None:
                raise EmptyProduct("a product square has no partner square in the second factor")
            sm2.append(t)

    cubes, faces, cm1, cm2 = [], [], [], []
    if X1.n_cubes:
        tableY = _key_table(square_keys(sq, rev))
        table2c = {cube_key(A, X2.rev): i for i, A in enumerate(X2.cubes)}
        for c, A in enumerate(X1.cubes):
            cols = [int(col1.colors[axis_edge(A, i, 0)]) for i in range(3)]
            x = int(X1.src[axis_edge(A, 0, 0)])
            for w in by_first.get(x, []):
                corner = [0] * 8
                corner[0] = w
                for b in range(1, 8):
                    t = (b & -b).bit_length() - 1
                    corner[b] = int(head[corner[b ^ (1 << t)], cols[t]])
                LA = [[0] * 4 for _ in range(3)]
                for a in range(3):
                    for b in range(8):
                        if not b >> a & 1:
                            LA[a][slot(b, a)] = corner[b] * C + cols[a]
                row = []
                for fi, fj, fk, val in FACE_LAYOUT:
                    s4 = axes_square(cube_face_axes(LA, fi, fj, fk, val))
                    row.append(tableY[tuple(square_keys(np.array([s4]), rev)[0])])
                cubes.append(LA)
                faces.append(row)
                cm1.append(c)
                img = [[int(em2[e]) for e in r] for r in LA]
                cm2.append(table2c[cube_key(img, X2.rev)])
    Y = validate_complex(
        V, src, dst, rev, sq,
        np.array(cubes, dtype=np.int64).reshape(-1, 3, 4), np.array(faces, dtype=np.int64).reshape(-1, 6),
    )
    arr = lambda v: np.asarray(v, dtype=np.int64)
    if V % X1.n_vertices or V % X2.n_vertices:
        raise EmptyProduct("product component does not cover both factors evenly")
    p1 = _verified(CoverMap(Y, X1, pairs[:, 0].copy(), em1, arr(sm1), arr(cm1), V // X1.n_vertices))
    p2 = _verified(CoverMap(Y, X2, pairs[:, 1].copy(), em2, arr(sm2), arr(cm2), V // X2.n_vertices))
    colY = LColoring(Y, L, cc.copy())
    return FiberProduct(Y, p1, p2, colY, pairs)


# ---------------------------------------------------------------- pipeline


@dataclass
class OrbiCover:
    """One input carried to an L-coloured finite cover."""

    complex: CubeComplex
    chain: list[CoverMap]  # top cover first; composes to complex → input
    coloring: LColoring
    delta: DeltaCategory
    stages: list[str] = field(default_factory=list)

    def composite(self) -> CoverMap:
        return compose_chain(self.chain)


def orbicover_pipeline(
    X: CubeComplex,
    L: KneserComplex,
    which: int = 1,
    clean_budget: int = 8,
    trivial_budget: int = 8,
    base_choices=None,
    q_base=None,
) -> OrbiCover:
    """NPC check → link labels → clean cover → pre-Δ → trivializing cover →
    Δ-category → kernel cover → colouring.  Failures become :class:`Obstruction`."""
    from .cover import search_trivializing_cover

    stages = []
    report = check_npc(X)
    if report:
        raise Obstruction("npc", which, report[0])
    stages.append("npc: ok")
    try:
        A = assign_links(X, L)
    except LinkMismatch as err:
        raise Obstruction("LinkMismatch", which, str(err)) from err
    stages.append("assign_links: ok")
    chain: list[CoverMap] = [identity_cover(X)]
    ok, _ = all_clean(X)
    if not ok:
        f = search_clean_cover(X, clean_budget)
        if isinstance(f, NotFound):
            raise Obstruction("clean_cover", which, f.reason)
        chain.insert(0, f)
        A = pullback_assignment(A, f.edge_map)
        X = f.total
    stages.append(f"clean cover: degree {chain[0].degree}")
    pre = build_pre_delta(X, A)
    stages.append("pre-delta: ok")
    f = search_trivializing_cover(X, pre, trivial_budget)
    if isinstance(f, NotFound):
        raise Obstruction("trivializing_cover", which, f.reason + "; " + "; ".join(f.details[:3]))
    if f.degree > 1:
        chain.insert(0, f)
        pre = lift_pre_delta(f, pre)
        X = f.total
    stages.append(f"trivializing cover: degree {f.degree}")
    dc = extend_to_delta(X, pre, base_choices)
    stages.append("delta-category: ok")
    k, dc_hat = kernel_cover(X, dc)
    if k.degree > 1:
        chain.insert(0, k)
        X = k.total
    stages.append(f"kernel cover: degree {k.degree}")
    col = build_orbicover(X, dc_hat, 0, q_base)
    stages.append("orbi-cover colouring: ok")
    return OrbiCover(X, chain, col, dc_hat, stages)


@dataclass
class CommonCover:
    complex: CubeComplex
    chain1: list[CoverMap]
    chain2: list[CoverMap]
    product: FiberProduct
    inputs: tuple[OrbiCover, OrbiCover]

    def cover1(self) -> CoverMap:
        return compose_chain(self.chain1)

    def cover2(self) -> CoverMap:
        return compose_chain(self.chain2)

    def report(self) -> list[str]:
        lines = []
        for name, chain in (("X1", self.chain1), ("X2", self.chain2)):
            for i, f in enumerate(chain):
                r = f.report()
                lines.append(f"{name} step {i}: degree {f.degree}: {'verified' if not r else r[0]}")
            total = compose_chain(chain)
            r = total.report()
            lines.append(f"{name} composite: degree {total.degree}: {'verified' if not r else r[0]}")
        return lines


def common_cover(
    X1: CubeComplex,
    X2: CubeComplex,
    L: KneserComplex,
    clean_budget: int = 8,
    trivial_budget: int = 8,
    base_pair: tuple[int, int] = (0, 0),
) -> CommonCover:
    """A finite complex covering both inputs, with verified cover chains."""
    a = orbicover_pipeline(X1, L, 1, clean_budget, trivial_budget)
    b = orbicover_pipeline(X2, L, 2, clean_budget, trivial_budget)
    fp = fiber_product(a.complex, a.coloring, b.complex, b.coloring, base_pair)
    return CommonCover(fp.complex, [fp.p1] + a.chain, [fp.p2] + b.chain, fp, (a, b))


def proper_coloring_classes(col: LColoring) -> dict[int, list[int]]:
    """Undirected 1-cubes grouped by colour."""
    out: dict[int, list[int]] = {}
    X = col.complex
    for e in X.undirected.tolist():
        out.setdefault(int(col.colors[e]), []).append(e)
    return out

