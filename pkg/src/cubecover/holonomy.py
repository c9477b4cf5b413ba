"""Global holonomy ``Φ_x`` of a Δ-category and the cover that flattens it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from . import perm as P
from .complex import CubeComplex
from .cover import CoverMap, VoltageAssignment, regular_gains, spanning_tree, tree_edge_mask, voltage_cover
from .deltacat import DeltaCategory, PreDeltaCategory, all_base_choices, extension_table, lift_delta
from .errors import Disconnected, NonLiftableSquare


@dataclass(frozen=True, eq=False)
class GlobalHolonomy:
    basepoint: int
    tree_into: np.ndarray  # tree edge ending at each 0-cube, -1 at the root
    transport: np.ndarray  # transport[v]: Δ_x → Δ_v along the tree
    gains: np.ndarray  # gains[e] = T_dst⁻¹ ∘ φ_e ∘ T_src, identity on tree edges
    loop_edges: np.ndarray
    image: tuple[tuple[int, ...], ...]

    @property
    def trivial(self) -> bool:
        return len(self.image) == 1

    def loop_gain(self, loop: list[int]) -> tuple[int, ...]:
        """``Φ_x`` of an edge loop at the basepoint, composed right to left."""
        g = P.identity(self.gains.shape[1])
        for e in loop:
            g = P.compose(tuple(self.gains[e]), g)
        return g


def _tree_levels(X: CubeComplex, order: np.ndarray, into: np.ndarray, level: np.ndarray):
    kids = order[1:]
    edges = into[kids]
    return X.src[edges], X.dst[edges], edges, level[kids]


def global_holonomy(X: CubeComplex, dc: DeltaCategory, x: int = 0) -> GlobalHolonomy:
    N = dc.N
    order, into, level = spanning_tree(X, x)
    if len(order) != X.n_vertices:
        raise Disconnected(f"{X.n_vertices - len(order)} 0-cube(s) unreachable from {x}")
    parent, child, edge, lev = _tree_levels(X, order, into, level)
    T0 = np.tile(np.arange(N), (X.n_vertices, 1))
    T = K.forest_transport(T0, parent, child, edge, lev, dc.phi)
    ids = np.arange(X.n_edges)
    gains = K.forest_gains(T, X.src, X.dst, ids, dc.phi)
    tree = tree_edge_mask(X, into)
    if np.any(gains[tree] != np.arange(N)):
        raise AssertionError("tree gains are not trivial")
    sq = X.squares
    if len(sq):
        e1, e2, e1p, e2p = sq.T
        left = np.take_along_axis(gains[e2], gains[e1], axis=1)
        right = np.take_along_axis(gains[e1p], gains[e2p], axis=1)
        bad = np.flatnonzero((left != right).any(axis=1))
        if len(bad):
            raise NonLiftableSquare(int(bad[0]))
    loops = np.flatnonzero(~tree & (ids < X.rev))
    image = P.generate([tuple(gains[e]) for e in loops], N)
    return GlobalHolonomy(x, into, T, gains, loops, tuple(image))


def is_flat(X: CubeComplex, dc: DeltaCategory) -> bool:
    return global_holonomy(X, dc).trivial


def kernel_cover(X: CubeComplex, dc: DeltaCategory, x: int = 0) -> tuple[CoverMap, DeltaCategory]:
    """The regular cover with deck group ``G = image(Φ_x)`` and the flat lift.

    0-cubes are ``X⁰ × G`` (sheet index = position of the group element in
    sorted order, so sheet 0 is the identity); ``e = (u, v)`` lifts to
    ``(u, h) → (v, g(e)·h)``.
    """
    hol = global_holonomy(X, dc, x)
    elements = list(hol.image)
    index = {g: i for i, g in enumerate(elements)}
    labels = np.array([index[tuple(g)] for g in hol.gains.tolist()], dtype=np.int64)
    v = VoltageAssignment(len(elements), regular_gains(elements, labels), tuple(elements))
    f = voltage_cover(X, v)
    return f, lift_delta(f, dc)


def deck_action(f: CoverMap, elements) -> list[np.ndarray]:
    """Right multiplication by each group element, as permutations of the total
    0-cubes of a :func:`kernel_cover`."""
    k = len(elements)
    table = P.multiplication_table(list(elements))
    out = []
    nv = f.base.n_vertices
    for j in range(k):
        sheet = table[:, j]
        out.append((np.arange(nv)[:, None] * k + sheet[None, :]).reshape(-1))
    return out


def check_deck_regular(f: CoverMap, elements) -> list[str]:
    """Each right translation is a cellular automorphism over the base, and the
    translations act freely and transitively on every fibre."""
    out = []
    Xh = f.total
    k = len(elements)
    table = P.multiplication_table(list(elements))
    m = f.base.n_edges
    for j, act in enumerate(deck_action(f, elements)):
        if not np.array_equal(f.vertex_map[act], f.vertex_map):
            out.append(f"CELL deck/{j}: does not commute with the projection")
        eact = (np.arange(m)[:, None] * k + table[:, j][None, :]).reshape(-1)
        if not (np.array_equal(Xh.src[eact], act[Xh.src]) and np.array_equal(Xh.dst[eact], act[Xh.dst])):
            out.append(f"CELL deck/{j}: is not a graph automorphism")
        if j and np.any(act == np.arange(len(act))):
            out.append(f"CELL deck/{j}: has a fixed 0-cube")
    # transitivity: orbit of sheet 0 covers the fibre
    sheets = {int(table[0, j]) for j in range(k)}
    if len(sheets) != k:
        out.append("CELL deck/0: action on a fibre is not transitive")
    return out


# ---------------------------------------------------------------- exhaustive flatness


def flat_base_choices(X: CubeComplex, pre: PreDeltaCategory, backend: str | None = None) -> np.ndarray:
    """Flatness of the extension for every assignment of base choices.

    Base choices are indexed in mixed radix, hyperplane 0 least significant,
    each digit indexing the sorted permutations of ``n`` positions.
    """
    table = extension_table(X, pre)
    n = table.n
    perms = np.array(all_base_choices(n), dtype=np.int64)
    radix = np.full(table.n_hyperplanes, len(perms), dtype=np.int64)
    total = int(np.prod(radix, dtype=object))
    if total > 1 << 22:
        raise ValueError(f"{total} base-choice configurations is too many to enumerate")
    order, into, level = spanning_tree(X, 0)
    if len(order) != X.n_vertices:
        raise Disconnected("complex is disconnected")
    parent, child, edge, lev = _tree_levels(X, order, into, level)
    tree = tree_edge_mask(X, into)
    ids = np.arange(X.n_edges)
    chk = ids[~tree & (ids < X.rev)]
    fn = K.flat_search if backend is None else K.flavour("flat_search", backend)
    masks = np.arange(total, dtype=np.int64)
    return fn(
        masks, radix, perms, pre.phi, table.edge, table.rev_edge, table.hyperplane, table.B, table.A,
        parent, child, edge, lev, X.src[chk], X.dst[chk], chk,
    )


def choices_from_index(index: int, n_hyperplanes: int, n: int) -> dict[int, tuple[int, ...]]:
    perms = all_base_choices(n)
    out = {}
    for h in range(n_hyperplanes):
        out[h] = perms[index % len(perms)]
        index //= len(perms)
    return out
