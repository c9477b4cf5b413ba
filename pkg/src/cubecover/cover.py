"""Finite covers of cube complexes.

A :class:`CoverMap` is a cellwise map ``X̂ → X``.  Covers are produced by
voltage assignments (permutation gains on directed 1-cubes), by taking a free
quotient, or by composing other covers; every constructor verifies its output
before returning it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np

from . import perm as P
from .complex import (
    CubeComplex,
    assign_links,
    axes_square,
    axis_edge,
    check_npc,
    corner_vertex,
    cube_face_axes,
    cube_forms,
    FACE_LAYOUT,
    slot,
    validate_complex,
)
from .errors import (
    BadInvolutions,
    LinkMismatch,
    NonCommutingAdjacents,
    NonLiftableSquare,
    UnverifiedCover,
)
from .kneser import KneserComplex


# ---------------------------------------------------------------- square keys


def square_forms_array(squares: np.ndarray, rev: np.ndarray) -> np.ndarray:
    """``(k, 8, 4)``: the eight re-rootings of each square."""
    sq = np.asarray(squares, dtype=np.int64).reshape(-1, 4)
    e1, e2, e1p, e2p = sq.T
    r = rev
    base = [
        (e1, e2, e1p, e2p),
        (r[e1], e2p, r[e1p], e2),
        (e1p, r[e2], e1, r[e2p]),
        (r[e1p], r[e2p], r[e1], r[e2]),
    ]
    forms = []
    for a, b, c, d in base:
        forms.append(np.stack([a, b, c, d], axis=1))
        forms.append(np.stack([d, c, b, a], axis=1))
    return np.stack(forms, axis=1)


def _lexmin(F: np.ndarray) -> np.ndarray:
    """Row-wise lexicographic minimum over the middle axis of ``(k, f, w)``."""
    alive = np.ones(F.shape[:2], dtype=bool)
    big = np.iinfo(np.int64).max
    for c in range(F.shape[2]):
        col = np.where(alive, F[:, :, c], big)
        alive &= col == col.min(axis=1, keepdims=True)
    pick = alive.argmax(axis=1)
    return F[np.arange(len(F)), pick]


def square_keys(squares: np.ndarray, rev: np.ndarray) -> np.ndarray:
    """Canonical form of each square: lexicographically least re-rooting."""
    if len(squares) == 0:
        return np.zeros((0, 4), dtype=np.int64)
    return _lexmin(square_forms_array(squares, rev))


def cube_key(A, rev: np.ndarray) -> tuple[int, ...]:
    return min(tuple(x for row in F for x in row) for F in cube_forms(A, rev))


def _key_table(keys: np.ndarray) -> dict[tuple[int, ...], int]:
    return {tuple(k): i for i, k in enumerate(keys.tolist())}


# ---------------------------------------------------------------- cover maps


@dataclass(frozen=True, eq=False)
class CoverMap:
    total: CubeComplex
    base: CubeComplex
    vertex_map: np.ndarray
    edge_map: np.ndarray
    square_map: np.ndarray
    cube_map: np.ndarray
    degree: int
    verified: bool = False

    def report(self) -> list[str]:
        return verify_cover(self)


@dataclass(frozen=True)
class NotFound:
    """A bounded search gave up.  ``details`` holds the best partial evidence."""

    reason: str
    budget: int
    tried: int
    details: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return False


def _link_rows(X: CubeComplex) -> np.ndarray:
    sc = X.square_corners.reshape(-1, 3)
    lo = np.minimum(sc[:, 1], sc[:, 2])
    hi = np.maximum(sc[:, 1], sc[:, 2])
    return np.stack([sc[:, 0], lo, hi], axis=1)


def _tri_rows(X: CubeComplex) -> np.ndarray:
    cc = X.cube_corners.reshape(-1, 4)
    return np.concatenate([cc[:, :1], np.sort(cc[:, 1:], axis=1)], axis=1)


def _rows_in(rows: np.ndarray, table: np.ndarray) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros(0, dtype=bool)
    if len(table) == 0:
        return np.zeros(len(rows), dtype=bool)
    both = np.concatenate([table, rows])
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    return np.isin(inv[len(table):], inv[: len(table)])


def verify_cover(f: CoverMap) -> list[str]:
    """Report lines for every failed covering condition; empty means a cover."""
    Xh, X = f.total, f.base
    vm, em, sm, cm = f.vertex_map, f.edge_map, f.square_map, f.cube_map
    out: list[str] = []
    if len(vm) != Xh.n_vertices or len(em) != Xh.n_edges or len(sm) != Xh.n_squares or len(cm) != Xh.n_cubes:
        return ["CELL map/0: cell maps do not match the total complex's cell counts"]
    if (len(vm) and (vm.min() < 0 or vm.max() >= X.n_vertices)) or (
        len(em) and (em.min() < 0 or em.max() >= X.n_edges)
    ) or (len(sm) and (sm.min() < 0 or sm.max() >= X.n_squares)) or (
        len(cm) and (cm.min() < 0 or cm.max() >= X.n_cubes)
    ):
        return ["CELL map/0: cell map points outside the base complex"]

    for e in np.flatnonzero(X.src[em] != vm[Xh.src]):
        out.append(f"CELL edge/{e}: initial 0-cube not preserved")
    for e in np.flatnonzero(X.dst[em] != vm[Xh.dst]):
        out.append(f"CELL edge/{e}: terminal 0-cube not preserved")
    for e in np.flatnonzero(X.rev[em] != em[Xh.rev]):
        out.append(f"CELL edge/{e}: reversal not preserved")

    if Xh.n_squares:
        got = square_keys(em[Xh.squares], X.rev)
        want = square_keys(X.squares[sm], X.rev)
        for s in np.flatnonzero((got != want).any(axis=1)):
            out.append(f"CELL square/{s}: boundary does not map onto square {sm[s]}")
    for c in range(Xh.n_cubes):
        A = [[int(em[e]) for e in row] for row in Xh.cubes[c]]
        if cube_key(A, X.rev) != cube_key(X.cubes[cm[c]], X.rev):
            out.append(f"CELL cube/{c}: axis edges do not map onto cube {cm[c]}")

    # local bijectivity at each 0-cube: edge-ends, link edges, link triangles
    cnt_hat = np.bincount(Xh.dst, minlength=Xh.n_vertices)
    cnt = np.bincount(X.dst, minlength=X.n_vertices)
    bad_v = set(np.flatnonzero(cnt_hat != cnt[vm]).tolist())
    if Xh.n_edges:
        _, idx, counts = np.unique(
            np.stack([Xh.dst, em], axis=1), axis=0, return_index=True, return_counts=True
        )
        for i in idx[counts > 1]:
            bad_v.add(int(Xh.dst[i]))
    for label, rows_hat, rows_base in (
        ("link edges", _link_rows(Xh), _link_rows(X)),
        ("link triangles", _tri_rows(Xh), _tri_rows(X)),
    ):
        if len(rows_hat) == 0 and len(rows_base) == 0:
            continue
        n_hat = np.bincount(rows_hat[:, 0], minlength=Xh.n_vertices) if len(rows_hat) else np.zeros(Xh.n_vertices, int)
        n_base = np.bincount(rows_base[:, 0], minlength=X.n_vertices) if len(rows_base) else np.zeros(X.n_vertices, int)
        for v in np.flatnonzero(n_hat != n_base[vm]):
            out.append(f"CELL vertex/{v}: {label} count differs from the image link")
        if len(rows_hat):
            mapped = np.concatenate([vm[rows_hat[:, :1]], np.sort(em[rows_hat[:, 1:]], axis=1)], axis=1)
            keyed = np.concatenate([rows_hat[:, :1], mapped[:, 1:]], axis=1)
            _, idx, counts = np.unique(keyed, axis=0, return_index=True, return_counts=True)
            for i in idx[counts > 1]:
                out.append(f"CELL vertex/{rows_hat[i, 0]}: two {label} map to the same one")
            for i in np.flatnonzero(~_rows_in(mapped, rows_base)):
                out.append(f"CELL vertex/{rows_hat[i, 0]}: {label} leave the image link")
    for v in sorted(bad_v):
        out.append(f"CELL vertex/{v}: edge-ends do not map bijectively onto the image link")

    fib = np.bincount(vm, minlength=X.n_vertices)
    if X.n_vertices and is_connected(X):
        for x in np.flatnonzero(fib != f.degree):
            out.append(f"CELL vertex/{x}: fiber has {fib[x]} points, degree is {f.degree}")
    return out


def _verified(f: CoverMap) -> CoverMap:
    report = verify_cover(f)
    if report:
        raise UnverifiedCover("; ".join(report[:5]))
    return replace(f, verified=True)


def identity_cover(X: CubeComplex) -> CoverMap:
    return _verified(
        CoverMap(
            X, X,
            np.arange(X.n_vertices), np.arange(X.n_edges),
            np.arange(X.n_squares), np.arange(X.n_cubes), 1,
        )
    )


def compose(outer: CoverMap, inner: CoverMap) -> CoverMap:
    """``outer ∘ inner`` for ``inner: Z → Y`` and ``outer: Y → X``."""
    if inner.base is not outer.total and not inner.base.same_as(outer.total):
        raise UnverifiedCover("covers do not compose: intermediate complexes differ")
    return _verified(
        CoverMap(
            inner.total, outer.base,
            outer.vertex_map[inner.vertex_map],
            outer.edge_map[inner.edge_map],
            outer.square_map[inner.square_map],
            outer.cube_map[inner.cube_map],
            outer.degree * inner.degree,
        )
    )


def compose_chain(chain: Sequence[CoverMap]) -> CoverMap:
    """Compose ``[Y→X1, X1→X2, …]`` into ``Y → X_last``."""
    acc = chain[0]
    for nxt in chain[1:]:
        acc = compose(nxt, acc)
    return acc


def is_connected(X: CubeComplex) -> bool:
    if X.n_vertices == 0:
        return True
    seen = np.zeros(X.n_vertices, dtype=bool)
    seen[0] = True
    stack = [0]
    out = X.out_of
    while stack:
        x = stack.pop()
        for e in out[x]:
            y = int(X.dst[e])
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return bool(seen.all())


def component_of(X: CubeComplex, x: int) -> np.ndarray:
    seen = np.zeros(X.n_vertices, dtype=bool)
    seen[x] = True
    stack = [x]
    out = X.out_of
    while stack:
        u = stack.pop()
        for e in out[u]:
            y = int(X.dst[e])
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return np.flatnonzero(seen)


# ---------------------------------------------------------------- voltage covers


@dataclass(frozen=True, eq=False)
class VoltageAssignment:
    """Gains ``gains[e]`` as permutations of ``0..degree-1``."""

    degree: int
    gains: np.ndarray
    group: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def trivial(cls, X: CubeComplex, degree: int) -> "VoltageAssignment":
        return cls(degree, np.tile(np.arange(degree), (X.n_edges, 1)))

    @classmethod
    def from_dict(cls, X: CubeComplex, degree: int, gains: dict[int, Sequence[int]]) -> "VoltageAssignment":
        """Gains on some directed 1-cubes; reverses get inverses, the rest identity."""
        g = np.tile(np.arange(degree), (X.n_edges, 1))
        for e, p in gains.items():
            g[e] = p
            g[X.rev[e]] = P.inverse(p)
        return cls(degree, g)


def _check_voltage(X: CubeComplex, v: VoltageAssignment) -> None:
    g = np.asarray(v.gains, dtype=np.int64)
    k = v.degree
    if g.shape != (X.n_edges, k):
        raise ValueError(f"gains must have shape ({X.n_edges}, {k})")
    if X.n_edges and not np.array_equal(np.sort(g, axis=1), np.tile(np.arange(k), (X.n_edges, 1))):
        raise ValueError("every gain must be a permutation")
    if X.n_edges:
        ident = np.arange(k)
        back = np.take_along_axis(g[X.rev], g, axis=1)
        bad = np.flatnonzero((back != ident).any(axis=1))
        if len(bad):
            raise ValueError(f"gain of edge {bad[0]} is not inverse to its reversal")
    if X.n_squares:
        e1, e2, e1p, e2p = X.squares.T
        left = np.take_along_axis(g[e2], g[e1], axis=1)
        right = np.take_along_axis(g[e1p], g[e2p], axis=1)
        bad = np.flatnonzero((left != right).any(axis=1))
        if len(bad):
            raise NonLiftableSquare(int(bad[0]))


def voltage_cover(X: CubeComplex, v: VoltageAssignment) -> CoverMap:
    """Lift along the gains: sheet ``i`` of ``e`` runs ``(ιe, i) → (τe, g(e)[i])``."""
    _check_voltage(X, v)
    k = v.degree
    g = np.asarray(v.gains, dtype=np.int64)
    sheets = np.arange(k)
    m = X.n_edges
    src = (X.src[:, None] * k + sheets).reshape(-1)
    dst = (X.dst[:, None] * k + g).reshape(-1)
    rev = (X.rev[:, None] * k + g).reshape(-1)

    sq = X.squares
    if len(sq):
        e1, e2, e1p, e2p = sq.T
        g1 = g[e1]
        g2p = g[e2p]
        lifted = np.stack(
            [
                e1[:, None] * k + sheets,
                e2[:, None] * k + g1,
                e1p[:, None] * k + g2p,
                e2p[:, None] * k + sheets,
            ],
            axis=2,
        ).reshape(-1, 4)
    else:
        lifted = np.zeros((0, 4), dtype=np.int64)

    cubes, faces = [], []
    if X.n_cubes:
        keys = square_keys(lifted, rev)
        table = _key_table(keys)
        for c, A in enumerate(X.cubes):
            for i in range(k):
                sheet = [0] * 8
                sheet[0] = i
                for b in range(1, 8):
                    t = (b & -b).bit_length() - 1
                    sheet[b] = int(g[axis_edge(A, t, b ^ (1 << t)), sheet[b ^ (1 << t)]])
                LA = [[0] * 4 for _ in range(3)]
                for a in range(3):
                    for b in range(8):
                        if not b >> a & 1:
                            LA[a][slot(b, a)] = axis_edge(A, a, b) * k + sheet[b]
                row = []
                for fi, fj, fk, val in FACE_LAYOUT:
                    sq4 = axes_square(cube_face_axes(LA, fi, fj, fk, val))
                    key = tuple(square_keys(np.array([sq4]), rev)[0])
                    row.append(table[key])
                cubes.append(LA)
                faces.append(row)
    total = validate_complex(
        X.n_vertices * k, src, dst, rev, lifted,
        np.array(cubes, dtype=np.int64).reshape(-1, 3, 4), np.array(faces, dtype=np.int64).reshape(-1, 6),
    )
    f = CoverMap(
        total, X,
        np.repeat(np.arange(X.n_vertices), k),
        np.repeat(np.arange(m), k),
        np.repeat(np.arange(X.n_squares), k),
        np.repeat(np.arange(X.n_cubes), k),
        k,
    )
    return _verified(f)


def regular_gains(elements: Sequence[tuple[int, ...]], labels: np.ndarray) -> np.ndarray:
    """Left-regular permutations for a list of group element indices."""
    table = P.multiplication_table(list(elements))
    return table[np.asarray(labels, dtype=np.int64)]


def spanning_tree(X: CubeComplex, root: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """BFS tree in edge-id order: ``(order, tree_edge_into, level)``.

    ``tree_edge_into[v]`` is the tree edge ending at ``v`` (``-1`` at the root
    and off the component).
    """
    into = np.full(X.n_vertices, -1, dtype=np.int64)
    level = np.full(X.n_vertices, -1, dtype=np.int64)
    level[root] = 0
    order = [root]
    q = deque([root])
    out = X.out_of
    while q:
        x = q.popleft()
        for e in out[x]:
            y = int(X.dst[e])
            if level[y] < 0:
                level[y] = level[x] + 1
                into[y] = e
                order.append(y)
                q.append(y)
    return np.array(order, dtype=np.int64), into, level


def tree_edge_mask(X: CubeComplex, into: np.ndarray) -> np.ndarray:
    mask = np.zeros(X.n_edges, dtype=bool)
    t = into[into >= 0]
    mask[t] = True
    mask[X.rev[t]] = True
    return mask


# ---------------------------------------------------------------- homomorphisms


def fundamental_presentation(X: CubeComplex, root: int = 0):
    """Generators: non-tree undirected 1-cubes (smaller id).  Relations: squares,
    each as four ``(generator, inverted)`` letters with tree edges dropped."""
    _, into, _ = spanning_tree(X, root)
    tree = tree_edge_mask(X, into)
    gens = [int(e) for e in X.undirected if not tree[e]]
    index = {e: i for i, e in enumerate(gens)}

    def letter(e):
        e = int(e)
        if tree[e]:
            return None
        if e in index:
            return (index[e], False)
        return (index[int(X.rev[e])], True)

    rels = []
    for e1, e2, e1p, e2p in X.squares.tolist():
        # g(e2) g(e1) g(e2')^-1 g(e1')^-1 = 1, written right to left
        word = [letter(e1), letter(e2), letter(X.rev[e1p]), letter(X.rev[e2p])]
        rels.append([w for w in word if w is not None])
    return gens, rels, tree


def homomorphisms(
    X: CubeComplex,
    elements: Sequence[tuple[int, ...]],
    surjective: bool = True,
    limit: int | None = None,
    max_steps: int = 200_000,
) -> Iterator[np.ndarray]:
    """Enumerate gain labellings (element index per non-tree generator)
    satisfying every square relation, in lexicographic order."""
    gens, rels, _ = fundamental_presentation(X)
    G = len(elements)
    table = P.multiplication_table(list(elements))
    inv = np.array([elements.index(P.inverse(g)) for g in elements])
    ident = elements.index(P.identity(len(elements[0])))
    by_last: list[list[list[tuple[int, bool]]]] = [[] for _ in gens]
    for w in rels:
        if w:
            by_last[max(i for i, _ in w)].append(w)

    def holds(assign, w):
        acc = ident
        for i, flip in w:
            x = assign[i]
            acc = table[inv[x] if flip else x, acc]
        return acc == ident

    n = len(gens)
    assign = [0] * n
    found = 0
    steps = 0
    if n == 0:
        if not surjective or G == 1:
            yield np.zeros(0, dtype=np.int64)
        return
    i = 0
    assign[0] = -1
    while i >= 0:
        assign[i] += 1
        steps += 1
        if steps > max_steps:
            return
        if assign[i] >= G:
            i -= 1
            continue
        if all(holds(assign, w) for w in by_last[i]):
            if i == n - 1:
                if not surjective or len(P.generate([elements[a] for a in set(assign)], len(elements[0]))) == G:
                    yield np.array(assign, dtype=np.int64)
                    found += 1
                    if limit is not None and found >= limit:
                        return
            else:
                i += 1
                assign[i] = -1


def gains_from_generators(X: CubeComplex, labels: np.ndarray, elements, gens=None, tree=None) -> VoltageAssignment:
    """Regular-representation voltage from element labels on non-tree generators."""
    if gens is None:
        gens, _, tree = fundamental_presentation(X)
    elements = list(elements)
    ident = elements.index(P.identity(len(elements[0])))
    inv = [elements.index(P.inverse(g)) for g in elements]
    lab = np.full(X.n_edges, ident, dtype=np.int64)
    for e, a in zip(gens, np.asarray(labels).tolist()):
        lab[e] = a
        lab[X.rev[e]] = inv[a]
    return VoltageAssignment(len(elements), regular_gains(elements, lab), tuple(elements))


# ---------------------------------------------------------------- Davis quotients


def davis_quotient(L: KneserComplex, images: Sequence[Sequence[int]]) -> CubeComplex:
    """Finite quotient of the Davis complex of ``W_L`` by the kernel of ``v ↦ images[v]``.

    0-cubes are the elements of ``Q = ⟨images⟩`` (sorted); the 1-cube from
    ``h`` with generator ``v`` ends at ``h·q_v`` and has id
    ``index(h·q_v)·|V(L)| + v``, so edge-ends at every 0-cube are ordered by
    generator.
    """
    V = L.num_vertices
    images = [tuple(int(a) for a in q) for q in images]
    if len(images) != V:
        raise BadInvolutions(f"need {V} generator images, got {len(images)}")
    deg = len(images[0])
    for v, q in enumerate(images):
        if P.is_identity(q) or not P.is_identity(P.compose(q, q)):
            raise BadInvolutions(f"image of generator {L.label(v)} is not an involution")
    for u, v in L.edges:
        if P.compose(images[u], images[v]) != P.compose(images[v], images[u]):
            raise NonCommutingAdjacents(f"images of adjacent generators {L.label(u)}, {L.label(v)} do not commute")
    elements = P.generate(images, deg)
    index = {g: i for i, g in enumerate(elements)}
    Qn = len(elements)
    right = np.array([[index[P.compose(g, q)] for q in images] for g in elements], dtype=np.int64)

    def eid(h, v):
        return int(right[h, v]) * V + v

    src = np.empty(Qn * V, dtype=np.int64)
    dst = np.empty(Qn * V, dtype=np.int64)
    rev = np.empty(Qn * V, dtype=np.int64)
    for h in range(Qn):
        for v in range(V):
            e = eid(h, v)
            src[e] = h
            dst[e] = right[h, v]
            rev[e] = eid(int(right[h, v]), v)

    squares = []
    for h in range(Qn):
        for v, w in L.edges:
            hv, hw = int(right[h, v]), int(right[h, w])
            hvw = int(right[hv, w])
            if h > min(hv, hw, hvw):
                continue
            squares.append((eid(h, v), eid(hv, w), eid(hw, v), eid(h, w)))
    sq = np.array(squares, dtype=np.int64).reshape(-1, 4)

    cubes, faces = [], []
    tris = L.simplices[2] if len(L.simplices) > 2 else ()
    if tris:
        table = _key_table(square_keys(sq, rev))
        for h in range(Qn):
            for tri in tris:
                corner = [0] * 8
                corner[0] = h
                for b in range(1, 8):
                    t = (b & -b).bit_length() - 1
                    corner[b] = int(right[corner[b ^ (1 << t)], tri[t]])
                if h > min(corner):
                    continue
                A = [[0] * 4 for _ in range(3)]
                for a in range(3):
                    for b in range(8):
                        if not b >> a & 1:
                            A[a][slot(b, a)] = eid(corner[b], tri[a])
                row = []
                for fi, fj, fk, val in FACE_LAYOUT:
                    s4 = axes_square(cube_face_axes(A, fi, fj, fk, val))
                    row.append(table[tuple(square_keys(np.array([s4]), rev)[0])])
                cubes.append(A)
                faces.append(row)
    X = validate_complex(
        Qn, src, dst, rev, sq,
        np.array(cubes, dtype=np.int64).reshape(-1, 3, 4), np.array(faces, dtype=np.int64).reshape(-1, 6),
    )
    report = check_npc(X)
    if report:
        raise LinkMismatch(int(report[0].split("/")[1].split(":")[0]), report[0])
    assign_links(X, L)
    return X


def davis_generator(X: CubeComplex, L: KneserComplex) -> np.ndarray:
    """Generator label of each directed 1-cube of a :func:`davis_quotient` output."""
    return np.arange(X.n_edges) % L.num_vertices


def free_quotient(X: CubeComplex, alpha_v: Sequence[int], alpha_e: Sequence[int]) -> CoverMap:
    """Quotient by a free cellular involution, as the degree-2 cover ``X → X/α``."""
    av = np.asarray(alpha_v, dtype=np.int64)
    ae = np.asarray(alpha_e, dtype=np.int64)
    if np.any(av[av] != np.arange(X.n_vertices)) or np.any(av == np.arange(X.n_vertices)):
        raise ValueError("vertex action is not a free involution")
    if np.any(ae[ae] != np.arange(X.n_edges)) or np.any(ae == np.arange(X.n_edges)):
        raise ValueError("edge action is not a free involution")
    if np.any(av[X.src] != X.src[ae]) or np.any(X.rev[ae] != ae[X.rev]):
        raise ValueError("edge action does not commute with incidence")
    keys = square_keys(X.squares, X.rev)
    table = _key_table(keys)
    as_ = np.array(
        [table[tuple(k)] for k in square_keys(ae[X.squares], X.rev).tolist()], dtype=np.int64
    ).reshape(-1)
    if len(as_) and np.any(as_ == np.arange(X.n_squares)):
        raise ValueError("square action is not free")

    def orbit_ids(a):
        rep = np.minimum(np.arange(len(a)), a)
        uniq, inv = np.unique(rep, return_inverse=True)
        return uniq, inv.reshape(-1)

    vu, vmap = orbit_ids(av)
    eu, emap = orbit_ids(ae)
    su, smap = orbit_ids(as_) if len(as_) else (np.zeros(0, np.int64), np.zeros(0, np.int64))
    if X.n_cubes:
        raise NotImplementedError("free quotients of 3-dimensional complexes are not needed here")
    Xq = validate_complex(
        len(vu), vmap[X.src[eu]], vmap[X.dst[eu]], emap[X.rev[eu]], emap[X.squares[su]] if len(su) else None
    )
    return _verified(CoverMap(X, Xq, vmap, emap, smap, np.zeros(0, np.int64), 2))


# ---------------------------------------------------------------- trivializing search


def _gf2_solve(rows: list[int], nvars: int) -> list[int] | None:
    """Rows are ints: bit 0 the right-hand side, bit ``j+1`` variable ``j``."""
    basis: dict[int, int] = {}
    for r in rows:
        while r >> 1:
            p = r.bit_length() - 1
            if p in basis:
                r ^= basis[p]
            else:
                basis[p] = r
                break
        else:
            if r & 1:
                return None
    x = [0] * nvars
    for p in sorted(basis):
        r = basis[p]
        val = r & 1
        rest = (r >> 1) & ~(1 << (p - 1))
        j = 0
        while rest:
            if rest & 1:
                val ^= x[j]
            rest >>= 1
            j += 1
        x[p - 1] = val
    return x


def z2_trivializing_labels(X: CubeComplex, holonomies) -> np.ndarray | None:
    """Solve ``χ(γ) = [Ψ(γ) ≠ 1]`` on every side loop of the hyperplanes with
    nontrivial parallel holonomy, over cocycles ``χ`` with trivial tree part.

    Returns 0/1 labels per non-tree generator, or ``None`` when no double
    cover can trivialize them.
    """
    gens, rels, tree = fundamental_presentation(X)
    col = {e: i for i, e in enumerate(gens)}

    def edge_bits(e):
        e = int(e)
        if tree[e]:
            return 0
        return 1 << (col[e if e in col else int(X.rev[e])] + 1)

    rows = []
    for w in rels:
        r = 0
        for i, _ in w:
            r ^= 1 << (i + 1)
        rows.append(r)
    any_nontrivial = False
    for hol in holonomies:
        if hol.trivial:
            continue
        if len(hol.image) != 2:
            return None
        any_nontrivial = True
        path = {hol.basepoint: 0}
        for e in hol.tree_edges:
            path[int(X.dst[e])] = path[int(X.src[e])] ^ edge_bits(e)
        for e, g in zip(hol.loop_edges, hol.loop_gains):
            r = path[int(X.src[e])] ^ edge_bits(e) ^ path[int(X.dst[e])]
            if not P.is_identity(g):
                r ^= 1
            rows.append(r)
    if not any_nontrivial:
        return np.zeros(len(gens), dtype=np.int64)
    sol = _gf2_solve(rows, len(gens))
    return None if sol is None else np.array(sol, dtype=np.int64)


def search_trivializing_cover(X: CubeComplex, pre, budget: int = 8, max_candidates: int = 64):
    """Smallest cover on the group ladder whose lifted parallel holonomies are
    all trivial, or :class:`NotFound`.

    The ``Z/2`` rung is solved exactly by linear algebra over GF(2); larger
    rungs enumerate surjective homomorphisms up to ``max_candidates`` each.
    """
    from .deltacat import all_parallel_holonomies, lift_pre_delta

    hols = all_parallel_holonomies(X, pre)
    bad = [h for h in hols if not h.trivial]
    if not bad:
        return identity_cover(X)
    tried = 0
    survivors = [f"hyperplane {h.hyperplane} side {h.side:+d}: image order {len(h.image)}" for h in bad]

    def succeeds(f):
        lifted = lift_pre_delta(f, pre)
        return all(h.trivial for h in all_parallel_holonomies(f.total, lifted))

    gens, _, tree = fundamental_presentation(X)
    for name, elements in P.ladder(budget):
        if name == "Z2":
            labels = z2_trivializing_labels(X, hols)
            if labels is None:
                continue
            tried += 1
            f = voltage_cover(X, gains_from_generators(X, labels, elements, gens, tree))
            if succeeds(f):
                return f
            continue
        for labels in homomorphisms(X, elements, surjective=True, limit=max_candidates):
            tried += 1
            f = voltage_cover(X, gains_from_generators(X, labels, elements, gens, tree))
            if succeeds(f):
                return f
    return NotFound("no trivializing cover on the group ladder", budget, tried, tuple(survivors))
