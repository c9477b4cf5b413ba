"""Finite combinatorial cube complexes of dimension at most 3.

Cells
-----
* 0-cubes are ``0..n_vertices-1``.
* Directed 1-cubes ``e`` carry ``src[e]``, ``dst[e]`` and the reversal
  ``rev[e]``, a fixed-point-free involution with ``src[rev[e]] == dst[e]``.
* A square is the 4-tuple ``(e1, e2, e1', e2')`` with
  ``e1 = (x, y)``, ``e2 = (y, z)``, ``e1' = (y', z)``, ``e2' = (x, y')``.
* A 3-cube is a ``(3, 4)`` array of axis edges plus its six face squares.

Internally every k-cube is handled through its *axis array*: ``A[i][j]`` is
the edge parallel to axis ``i`` leaving the corner ``b`` (a k-bit mask with
bit ``i`` clear) whose remaining bits compress to ``j``.  A square is
``[[e1, e1'], [e2', e2]]``.

The link vertices at a 0-cube ``x`` are the edge-ends at ``x``: directed
edges ``e`` with ``dst[e] == x``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DanglingReference,
    DimensionLimit,
    InconsistentCubeFaces,
    LinkMismatch,
    NonInvolutiveReversal,
    NotCoCubical,
    NotMinimal,
    OpenSquareBoundary,
)
from .kneser import KneserComplex, popcount

MAX_DIM = 3


# ---------------------------------------------------------------- k-cube helpers


def slot(b: int, i: int) -> int:
    """Index of corner ``b`` among the corners with bit ``i`` cleared."""
    low = b & ((1 << i) - 1)
    return low | ((b >> (i + 1)) << i)


def axis_edge(A, i: int, b: int) -> int:
    return int(A[i][slot(b, i)])


def corner_vertex(A, b: int, src: np.ndarray, dst: np.ndarray) -> int:
    if b & 1:
        return int(dst[axis_edge(A, 0, b ^ 1)])
    return int(src[axis_edge(A, 0, b)])


def corner_end(A, b: int, i: int, rev: np.ndarray) -> int:
    """The edge-end at corner ``b`` along axis ``i``."""
    if b >> i & 1:
        return axis_edge(A, i, b ^ (1 << i))
    return int(rev[axis_edge(A, i, b)])


def corner_ends(A, b: int, rev: np.ndarray) -> tuple[int, ...]:
    return tuple(corner_end(A, b, i, rev) for i in range(len(A)))


def reflect(A, t: int, rev: np.ndarray) -> list[list[int]]:
    k = len(A)
    out = [[0] * (1 << (k - 1)) for _ in range(k)]
    for i in range(k):
        for b in range(1 << k):
            if b >> i & 1:
                continue
            if i == t:
                out[i][slot(b, i)] = int(rev[axis_edge(A, t, b)])
            else:
                out[i][slot(b, i)] = axis_edge(A, i, b ^ (1 << t))
    return out


def permute_axes(A, pi: Sequence[int]) -> list[list[int]]:
    """New axis ``i`` is old axis ``pi[i]``."""
    k = len(A)
    out = [[0] * (1 << (k - 1)) for _ in range(k)]
    for i in range(k):
        for b in range(1 << k):
            if b >> i & 1:
                continue
            old = 0
            for a in range(k):
                if b >> a & 1:
                    old |= 1 << pi[a]
            out[i][slot(b, i)] = axis_edge(A, pi[i], old)
    return out


def cube_forms(A, rev: np.ndarray) -> list[list[list[int]]]:
    """All ``2^k k!`` re-rootings of a k-cube (reflections then axis permutations)."""
    k = len(A)
    out = []
    for mask in range(1 << k):
        R = [list(map(int, row)) for row in A]
        for t in range(k):
            if mask >> t & 1:
                R = reflect(R, t, rev)
        for pi in permutations(range(k)):
            out.append(permute_axes(R, pi))
    return out


def square_axes(sq: Sequence[int]) -> list[list[int]]:
    e1, e2, e1p, e2p = (int(v) for v in sq)
    return [[e1, e1p], [e2p, e2]]


def axes_square(A) -> tuple[int, int, int, int]:
    return (int(A[0][0]), int(A[1][1]), int(A[0][1]), int(A[1][0]))


def square_forms(sq: Sequence[int], rev: np.ndarray) -> list[tuple[int, int, int, int]]:
    return [axes_square(F) for F in cube_forms(square_axes(sq), rev)]


def cube_face_axes(A, i: int, j: int, k: int, val: int) -> list[list[int]]:
    """The face of a 3-cube spanned by axes ``i < j`` at ``bit k == val``."""
    base = val << k
    F = [[0, 0], [0, 0]]
    for bi in (0, 1):
        for bj in (0, 1):
            b = base | (bi << i) | (bj << j)
            fb = bi | (bj << 1)
            if not bi:
                F[0][slot(fb, 0)] = axis_edge(A, i, b)
            if not bj:
                F[1][slot(fb, 1)] = axis_edge(A, j, b)
    return F


# face order: (axes 0,1 | bit2=0), (0,1 | bit2=1), (0,2 | bit1=0), (0,2 | bit1=1), (1,2 | bit0=0), (1,2 | bit0=1)
FACE_LAYOUT = [(0, 1, 2, 0), (0, 1, 2, 1), (0, 2, 1, 0), (0, 2, 1, 1), (1, 2, 0, 0), (1, 2, 0, 1)]


# ---------------------------------------------------------------- the complex


@dataclass(frozen=True, eq=False)
class CubeComplex:
    n_vertices: int
    src: np.ndarray
    dst: np.ndarray
    rev: np.ndarray
    squares: np.ndarray = field(default_factory=lambda: np.zeros((0, 4), dtype=np.int64))
    cubes: np.ndarray = field(default_factory=lambda: np.zeros((0, 3, 4), dtype=np.int64))
    cube_faces: np.ndarray = field(default_factory=lambda: np.zeros((0, 6), dtype=np.int64))

    @property
    def n_edges(self) -> int:
        """Number of directed 1-cubes (twice the undirected count)."""
        return len(self.src)

    @property
    def n_squares(self) -> int:
        return len(self.squares)

    @property
    def n_cubes(self) -> int:
        return len(self.cubes)

    @property
    def dimension(self) -> int:
        if self.n_cubes:
            return 3
        if self.n_squares:
            return 2
        return 1 if self.n_edges else 0

    def cell_counts(self) -> tuple[int, int, int, int]:
        return self.n_vertices, self.n_edges // 2, self.n_squares, self.n_cubes

    def same_as(self, other: "CubeComplex") -> bool:
        return (
            self.n_vertices == other.n_vertices
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.rev, other.rev)
            and np.array_equal(self.squares, other.squares)
            and np.array_equal(self.cubes, other.cubes)
            and np.array_equal(self.cube_faces, other.cube_faces)
        )

    @cached_property
    def undirected(self) -> np.ndarray:
        """One representative (the smaller id) per undirected 1-cube."""
        ids = np.arange(self.n_edges)
        return ids[ids < self.rev]

    @cached_property
    def ends_at(self) -> list[list[int]]:
        """``ends_at[x]``: edge-ends at ``x`` in increasing id order."""
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for e, y in enumerate(self.dst.tolist()):
            out[y].append(e)
        return out

    @cached_property
    def out_of(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for e, x in enumerate(self.src.tolist()):
            out[x].append(e)
        return out

    @cached_property
    def square_corners(self) -> np.ndarray:
        """``(k, 4, 3)``: per corner ``b``, the 0-cube and its two edge-ends."""
        sq = self.squares
        rev = self.rev
        e1, e2, e1p, e2p = sq[:, 0], sq[:, 1], sq[:, 2], sq[:, 3]
        out = np.empty((len(sq), 4, 3), dtype=np.int64)
        # b=0 is x, b=1 is y, b=2 is y', b=3 is z
        out[:, 0] = np.stack([self.src[e1], rev[e1], rev[e2p]], axis=1)
        out[:, 1] = np.stack([self.dst[e1], e1, rev[e2]], axis=1)
        out[:, 2] = np.stack([self.dst[e2p], rev[e1p], e2p], axis=1)
        out[:, 3] = np.stack([self.dst[e2], e1p, e2], axis=1)
        return out

    @cached_property
    def cube_corners(self) -> np.ndarray:
        """``(c, 8, 4)``: per corner, the 0-cube and its three edge-ends."""
        out = np.empty((self.n_cubes, 8, 4), dtype=np.int64)
        for c, A in enumerate(self.cubes):
            for b in range(8):
                out[c, b, 0] = corner_vertex(A, b, self.src, self.dst)
                out[c, b, 1:] = corner_ends(A, b, self.rev)
        return out

    @cached_property
    def star_pairs(self) -> np.ndarray:
        """Rows ``(e, w_x, w_y)``: for a directed edge ``e = (x, y)`` in a square,
        the other edge-end ``w_x`` of that square at ``x`` and its image ``w_y``
        at ``y`` under reflection across the dual midcube."""
        sq = self.squares
        rev = self.rev
        if len(sq) == 0:
            return np.zeros((0, 3), dtype=np.int64)
        # boundary cycle f0..f3 through corners x, y, z, y'
        f = np.stack([sq[:, 0], sq[:, 1], rev[sq[:, 2]], rev[sq[:, 3]]], axis=1)
        rows = []
        for i in range(4):
            fi, fprev, fnext = f[:, i], f[:, (i - 1) % 4], f[:, (i + 1) % 4]
            rows.append(np.stack([fi, fprev, rev[fnext]], axis=1))
            rows.append(np.stack([rev[fi], rev[fnext], fprev], axis=1))
        return np.concatenate(rows)

    def square_axes(self, s: int) -> list[list[int]]:
        return square_axes(self.squares[s])

    def link(self, x: int) -> "Link":
        return link(self, x)


def from_arrays(
    n_vertices: int,
    edges: Sequence[Sequence[int]] | np.ndarray,
    squares: Sequence[Sequence[int]] | np.ndarray = (),
    cubes: Iterable = (),
) -> CubeComplex:
    """Build and validate from ``(src, dst, rev)`` rows, square 4-tuples and
    3-cubes given as ``(axis_edges, faces)`` pairs."""
    E = np.asarray(edges, dtype=np.int64).reshape(-1, 3)
    S = np.asarray(squares, dtype=np.int64).reshape(-1, 4)
    cube_list = list(cubes)
    C = np.asarray([c[0] for c in cube_list], dtype=np.int64).reshape(-1, 3, 4)
    F = np.asarray([c[1] for c in cube_list], dtype=np.int64).reshape(-1, 6)
    return validate_complex(n_vertices, E[:, 0], E[:, 1], E[:, 2], S, C, F)


def from_undirected(
    n_vertices: int,
    pairs: Sequence[tuple[int, int]],
    squares: Sequence[Sequence[int]] = (),
    cubes: Iterable = (),
) -> CubeComplex:
    """Undirected edge ``i = (u, v)`` becomes directed ``2i: u→v`` and ``2i+1: v→u``."""
    rows = []
    for i, (u, v) in enumerate(pairs):
        rows.append((u, v, 2 * i + 1))
        rows.append((v, u, 2 * i))
    return from_arrays(n_vertices, rows, squares, cubes)


def validate_complex(
    n_vertices: int,
    src,
    dst,
    rev,
    squares=None,
    cubes=None,
    cube_faces=None,
) -> CubeComplex:
    """Check every structural invariant and return the frozen complex."""
    src = np.asarray(src, dtype=np.int64).copy()
    dst = np.asarray(dst, dtype=np.int64).copy()
    rev = np.asarray(rev, dtype=np.int64).copy()
    m = len(src)
    if len(dst) != m or len(rev) != m:
        raise DanglingReference("edge arrays have different lengths")
    squares = np.zeros((0, 4), np.int64) if squares is None else np.asarray(squares, dtype=np.int64).reshape(-1, 4).copy()
    cubes = np.zeros((0, 3, 4), np.int64) if cubes is None else np.asarray(cubes, dtype=np.int64).copy()
    if cubes.size == 0:
        cubes = np.zeros((0, 3, 4), np.int64)
    if cubes.ndim != 3 or cubes.shape[1:] != (3, 4):
        raise DimensionLimit(f"3-cubes must be (3, 4) axis arrays; cubes of dimension > {MAX_DIM} are unsupported")
    cube_faces = (
        np.zeros((len(cubes), 6), np.int64)
        if cube_faces is None
        else np.asarray(cube_faces, dtype=np.int64).reshape(-1, 6).copy()
    )
    if len(cube_faces) != len(cubes):
        raise InconsistentCubeFaces("every 3-cube needs six face squares")

    for e in range(m):
        if not (0 <= src[e] < n_vertices and 0 <= dst[e] < n_vertices):
            raise DanglingReference("endpoint out of range", f"edge/{e}")
        if not 0 <= rev[e] < m:
            raise DanglingReference("reversal out of range", f"edge/{e}")
    ids = np.arange(m)
    bad = np.nonzero((rev[rev] != ids) | (rev == ids))[0]
    if len(bad):
        raise NonInvolutiveReversal("reversal is not a fixed-point-free involution", f"edge/{bad[0]}")
    bad = np.nonzero(src[rev] != dst)[0]
    if len(bad):
        raise NonInvolutiveReversal("reversed edge does not start at the terminal 0-cube", f"edge/{bad[0]}")

    for s, sq in enumerate(squares):
        if np.any((sq < 0) | (sq >= m)):
            raise DanglingReference("boundary edge out of range", f"square/{s}")
        e1, e2, e1p, e2p = sq
        if dst[e1] != src[e2]:
            raise OpenSquareBoundary("terminal of e1 is not initial of e2", f"square/{s}")
        if dst[e2p] != src[e1p]:
            raise OpenSquareBoundary("terminal of e2' is not initial of e1'", f"square/{s}")
        if dst[e2] != dst[e1p]:
            raise OpenSquareBoundary("e2 and e1' do not share a terminal 0-cube", f"square/{s}")
        if src[e1] != src[e2p]:
            raise OpenSquareBoundary("e1 and e2' do not share an initial 0-cube", f"square/{s}")

    for c, A in enumerate(cubes):
        if np.any((A < 0) | (A >= m)):
            raise DanglingReference("axis edge out of range", f"cube/{c}")
        for b in range(8):
            seen = set()
            for i in range(3):
                if b >> i & 1:
                    seen.add(int(dst[axis_edge(A, i, b ^ (1 << i))]))
                else:
                    seen.add(int(src[axis_edge(A, i, b)]))
            if len(seen) != 1:
                raise InconsistentCubeFaces(f"corner {b} is not well defined", f"cube/{c}")
        for f, (i, j, k, val) in enumerate(FACE_LAYOUT):
            s = int(cube_faces[c, f])
            if not 0 <= s < len(squares):
                raise DanglingReference("face square out of range", f"cube/{c}")
            want = axes_square(cube_face_axes(A, i, j, k, val))
            if want not in square_forms(squares[s], rev):
                raise InconsistentCubeFaces(f"face {f} does not match square {s}", f"cube/{c}")

    return CubeComplex(n_vertices, src, dst, rev, squares, cubes, cube_faces)


# ---------------------------------------------------------------- links


@dataclass(frozen=True)
class Link:
    base: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]

    def neighbours(self, v: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out


def link(X: CubeComplex, x: int) -> Link:
    """``lk(x)``: edge-ends at ``x``, one edge per square corner, one triangle per 3-cube corner."""
    verts = tuple(X.ends_at[x])
    sc = X.square_corners
    edges = []
    if len(sc):
        hit = sc[:, :, 0] == x
        for s, b in zip(*np.nonzero(hit)):
            a, c = int(sc[s, b, 1]), int(sc[s, b, 2])
            edges.append((min(a, c), max(a, c)))
    tris = []
    cc = X.cube_corners
    if len(cc):
        hit = cc[:, :, 0] == x
        for c, b in zip(*np.nonzero(hit)):
            tris.append(tuple(sorted(int(v) for v in cc[c, b, 1:])))
    return Link(x, verts, tuple(sorted(edges)), tuple(sorted(tris)))


def check_npc(X: CubeComplex) -> list[str]:
    """Report lines ``CELL <id>: <rule>`` for links that are not simplicial flag complexes."""
    report: list[str] = []
    sc = X.square_corners
    if len(sc):
        flat = sc.reshape(-1, 3)
        a = np.minimum(flat[:, 1], flat[:, 2])
        b = np.maximum(flat[:, 1], flat[:, 2])
        for i in np.nonzero(a == b)[0]:
            report.append(f"CELL vertex/{flat[i, 0]}: square/{i // 4} corner has a repeated link vertex")
        keys = np.stack([flat[:, 0], a, b], axis=1)
        _, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)
        dup_rows = np.nonzero(counts[inverse] > 1)[0]
        reported = set()
        for i in dup_rows:
            key = (int(flat[i, 0]), int(a[i]), int(b[i]))
            if key in reported:
                continue
            reported.add(key)
            report.append(
                f"CELL vertex/{key[0]}: link edge {{{key[1]},{key[2]}}} is repeated (non-simplicial link)"
            )
    cc = X.cube_corners
    tri_at: dict[int, set[tuple[int, ...]]] = defaultdict(set)
    for c in range(len(cc)):
        for b in range(8):
            x = int(cc[c, b, 0])
            t = tuple(sorted(int(v) for v in cc[c, b, 1:]))
            if len(set(t)) < 3:
                report.append(f"CELL vertex/{x}: cube/{c} corner has a repeated link vertex")
            elif t in tri_at[x]:
                report.append(f"CELL vertex/{x}: link triangle {set(t)} is repeated (non-simplicial link)")
            tri_at[x].add(t)

    # flag condition: every 3-clique spans a triangle, no 4-cliques
    adj: dict[int, dict[int, set[int]]] = defaultdict(lambda: defaultdict(set))
    if len(sc):
        for x, u, v in sc.reshape(-1, 3).tolist():
            if u != v:
                adj[x][u].add(v)
                adj[x][v].add(u)
    for x in sorted(adj):
        nb = adj[x]
        for u in sorted(nb):
            for v in sorted(nb[u]):
                if v <= u:
                    continue
                for w in sorted(nb[u] & nb[v]):
                    if w <= v:
                        continue
                    if (u, v, w) not in tri_at[x]:
                        report.append(f"CELL vertex/{x}: link clique {{{u},{v},{w}}} spans no 3-cube (not flag)")
                    elif nb[u] & nb[v] & nb[w]:
                        report.append(f"CELL vertex/{x}: link contains a 4-clique at {{{u},{v},{w}}} (dimension > 3)")
    return report


# ---------------------------------------------------------------- link labelling


@dataclass(frozen=True, eq=False)
class DeltaAssignment:
    """Labels of edge-ends by vertices of ``L = K_n(Δ)``.

    ``end_label[e]`` is the vertex of ``L`` attached to the edge-end ``e`` at
    the 0-cube ``dst[e]``.  The ``n``-subset itself is ``end_mask[e]``.
    """

    L: KneserComplex
    end_label: np.ndarray

    @cached_property
    def end_mask(self) -> np.ndarray:
        return self.L.masks[self.end_label]

    def labels_at(self, X: CubeComplex, x: int) -> dict[int, int]:
        return {e: int(self.end_label[e]) for e in X.ends_at[x]}


def _local_graph(X: CubeComplex, x: int, lk: Link) -> tuple[list[int], list[int]]:
    ends = list(lk.vertices)
    pos = {e: i for i, e in enumerate(ends)}
    adj = [0] * len(ends)
    for a, b in lk.edges:
        adj[pos[a]] |= 1 << pos[b]
        adj[pos[b]] |= 1 << pos[a]
    return ends, adj


def _first_isomorphism(adj: list[int], L: KneserComplex) -> list[int] | None:
    """Lexicographically first graph isomorphism, vertices taken in order."""
    k = len(adj)
    Ladj = L.adjacency
    deg = [popcount(a) for a in adj]
    Ldeg = [popcount(a) for a in Ladj]
    img = [-1] * k
    cand = [0] * k
    used = 0
    i = 0
    while 0 <= i < k:
        c = cand[i]
        placed = False
        while c < k:
            if not used >> c & 1 and deg[i] == Ldeg[c]:
                ok = True
                ai, lc = adj[i], Ladj[c]
                for j in range(i):
                    if (ai >> j & 1) != (lc >> img[j] & 1):
                        ok = False
                        break
                if ok:
                    img[i] = c
                    used |= 1 << c
                    cand[i] = c + 1
                    placed = True
                    break
            c += 1
        if placed:
            i += 1
            if i < k:
                cand[i] = 0
        else:
            cand[i] = 0
            i -= 1
            if i >= 0:
                used &= ~(1 << img[i])
                img[i] = -1
    return img if i == k else None


def assign_links(X: CubeComplex, L: KneserComplex) -> DeltaAssignment:
    """Deterministically identify every link with ``L``.

    Edge-ends at each 0-cube are matched, in increasing id order, to the
    lexicographically first vertex sequence of ``L`` giving an isomorphism.
    """
    labels = np.full(X.n_edges, -1, dtype=np.int64)
    Ldeg = sorted(popcount(a) for a in L.adjacency)
    Ltri = len(L.simplices[2]) if len(L.simplices) > 2 else 0
    for x in range(X.n_vertices):
        lk = link(X, x)
        if len(lk.vertices) != L.num_vertices:
            raise LinkMismatch(x, f"{len(lk.vertices)} link vertices, L has {L.num_vertices}")
        ends, adj = _local_graph(X, x, lk)
        if len(lk.edges) != len(L.edges) or len(set(lk.edges)) != len(lk.edges):
            raise LinkMismatch(x, f"{len(lk.edges)} link edges, L has {len(L.edges)}")
        if sorted(popcount(a) for a in adj) != Ldeg:
            raise LinkMismatch(x, "degree sequences differ")
        if len(lk.triangles) != Ltri:
            raise LinkMismatch(x, f"{len(lk.triangles)} link triangles, L has {Ltri}")
        img = _first_isomorphism(adj, L)
        if img is None:
            raise LinkMismatch(x, "no isomorphism found by backtracking")
        for e, v in zip(ends, img):
            labels[e] = v
        pos = {e: i for i, e in enumerate(ends)}
        Lsimp = set(L.simplices[2]) if Ltri else set()
        for t in lk.triangles:
            if tuple(sorted(img[pos[e]] for e in t)) not in Lsimp:
                raise LinkMismatch(x, f"link triangle {t} does not map to a simplex of L")
    return DeltaAssignment(L, labels)


def check_assignment(X: CubeComplex, A: DeltaAssignment) -> list[str]:
    """Confirm that ``A`` restricts to an isomorphism ``lk(x) → L`` at every 0-cube."""
    L = A.L
    report = []
    Ledges = L.edge_set
    for x in range(X.n_vertices):
        lk = link(X, x)
        labs = [int(A.end_label[e]) for e in lk.vertices]
        if sorted(labs) != list(range(L.num_vertices)):
            report.append(f"CELL vertex/{x}: edge-end labels are not a bijection onto V(L)")
            continue
        imgs = {frozenset((int(A.end_label[a]), int(A.end_label[b]))) for a, b in lk.edges}
        if len(imgs) != len(lk.edges) or imgs != Ledges:
            report.append(f"CELL vertex/{x}: link edges do not map onto E(L)")
    return report


def pullback_assignment(A: DeltaAssignment, edge_map: np.ndarray) -> DeltaAssignment:
    return DeltaAssignment(A.L, A.end_label[np.asarray(edge_map)])


# ---------------------------------------------------------------- adjacency maps


@dataclass(frozen=True)
class StarIsomorphism:
    """``ad_C: cstar(σ_x) → cstar(σ_y)`` on the simplices containing ``σ_x``."""

    source: frozenset[int]
    target: frozenset[int]
    simplex_map: dict[frozenset[int], frozenset[int]]

    @property
    def vertex_map(self) -> dict[int, int]:
        """Action on link vertices ``w`` with ``σ_x ∪ {w}`` a simplex."""
        out = {}
        k = len(self.source)
        for s, t in self.simplex_map.items():
            if len(s) == k + 1:
                (w,) = s - self.source
                (u,) = t - self.target
                out[w] = u
        return out

    def __call__(self, simplex: Iterable[int]) -> frozenset[int]:
        return self.simplex_map[frozenset(simplex)]


def _cells_of_dim(X: CubeComplex, k: int) -> list[list[list[int]]]:
    if k == 1:
        return [[[e]] for e in range(X.n_edges)]
    if k == 2:
        return [square_axes(sq) for sq in X.squares]
    if k == 3:
        return [[list(map(int, row)) for row in A] for A in X.cubes]
    return []


def _cell_axes(X: CubeComplex, cell: tuple[str, int]) -> list:
    kind, idx = cell
    if kind == "vertex":
        return []
    if kind == "edge":
        return [[int(idx)]]
    if kind == "square":
        return square_axes(X.squares[idx])
    if kind == "cube":
        return [list(map(int, row)) for row in X.cubes[idx]]
    raise ValueError(f"unknown cell kind {kind!r}")


def adjacency_map(
    X: CubeComplex,
    cell: tuple[str, int],
    x: int,
    y: int,
    corners: tuple[int, int] | None = None,
) -> StarIsomorphism:
    """The adjacency map of the cube ``cell`` from its corner ``x`` to its corner ``y``.

    ``corners`` picks explicit corner positions when ``x`` or ``y`` occupies
    several corners of the cell.
    """
    A = _cell_axes(X, cell)
    k = len(A)
    if k == 0:
        if x != y or cell[1] != x:
            raise NotCoCubical(f"0-cube {cell[1]} does not contain both {x} and {y}")
        bx = by = 0
    else:
        verts = [corner_vertex(A, b, X.src, X.dst) for b in range(1 << k)]
        if corners is not None:
            bx, by = corners
            if verts[bx] != x or verts[by] != y:
                raise NotCoCubical("given corner positions do not hold x and y")
        else:
            cx = [b for b in range(1 << k) if verts[b] == x]
            cy = [b for b in range(1 << k) if verts[b] == y]
            if not cx or not cy:
                raise NotCoCubical(f"0-cubes {x}, {y} are not both corners of {cell[0]}/{cell[1]}")
            full = (1 << k) - 1
            pairs = [(a, b) for a in cx for b in cy if a ^ b == full]
            if not pairs:
                raise NotMinimal(f"{cell[0]}/{cell[1]} is not the minimal cube containing {x} and {y}")
            bx, by = pairs[0]
        if bx ^ by != (1 << k) - 1:
            raise NotMinimal(f"{cell[0]}/{cell[1]} is not the minimal cube containing {x} and {y}")
    sigma_x = frozenset(corner_end(A, bx, i, X.rev) for i in range(k))
    sigma_y = frozenset(corner_end(A, by, i, X.rev) for i in range(k))
    mapping: dict[frozenset[int], frozenset[int]] = {sigma_x: sigma_y}
    for dim in range(k + 1, MAX_DIM + 1):
        for D in _cells_of_dim(X, dim):
            for b in range(1 << dim):
                if corner_vertex(D, b, X.src, X.dst) != x:
                    continue
                ends = [corner_end(D, b, i, X.rev) for i in range(dim)]
                if not sigma_x <= set(ends):
                    continue
                flip = 0
                for i, e in enumerate(ends):
                    if e in sigma_x:
                        flip |= 1 << i
                bt = b ^ flip
                if corner_vertex(D, bt, X.src, X.dst) != y:
                    continue
                target = frozenset(corner_end(D, bt, i, X.rev) for i in range(dim))
                if not sigma_y <= target:
                    continue
                mapping[frozenset(ends)] = target
    return StarIsomorphism(sigma_x, sigma_y, mapping)
