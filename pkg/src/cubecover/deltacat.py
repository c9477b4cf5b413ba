"""Pre-Δ-categories, parallel holonomy, extension to Δ-categories, and lifting.

Bijections are stored as ``(n_edges, |Δ|)`` int arrays over ground indices:
``phi[e, a]`` is the image of ``a ∈ Δ_x`` in ``Δ_y`` for ``e = (x, y)``, and
``-1`` marks points outside the domain of a partial map.  For ``e = (x, y)``
dual to ``Λ`` the label ``Λ_x`` is the subset on the edge-end ``r(e)`` at
``x`` and ``Λ_y`` the subset on the edge-end ``e`` at ``y``.

Square convention: for ``(e1, e2, e1', e2')`` commutativity means
``φ_{e2} ∘ φ_{e1} = φ_{e1'} ∘ φ_{e2'}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations

import numpy as np

from . import _kernels as K
from . import perm as P
from .complex import CubeComplex, DeltaAssignment, pullback_assignment
from .cover import CoverMap, square_forms_array
from .errors import (
    IllDefined,
    NontrivialParallelHolonomy,
    NotClean,
    PathDisconnected,
    RecoveryFailed,
    UnverifiedCover,
)
from .hyperplane import (
    HyperplaneSystem,
    Side,
    certify_all,
    compute_hyperplanes,
    sides_and_parallel_edges,
)


def image_masks(phi: np.ndarray, edges: np.ndarray, masks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Image subset (as a bitmask) of ``masks[i]`` under ``phi[edges[i]]``.

    The second array is False where some point of the mask is undefined.
    """
    N = phi.shape[1]
    bits = ((masks[:, None] >> np.arange(N)) & 1).astype(bool)
    vals = phi[edges]
    ok = ~(bits & (vals < 0)).any(axis=1)
    contrib = np.where(bits & (vals >= 0), np.left_shift(1, np.maximum(vals, 0)), 0)
    return np.bitwise_or.reduce(contrib, axis=1), ok


def _mask_elements(mask: int) -> list[int]:
    return [i for i in range(int(mask).bit_length()) if mask >> i & 1]


# ---------------------------------------------------------------- pre-Δ


@dataclass(frozen=True, eq=False)
class PreDeltaCategory:
    complex: CubeComplex
    assignment: DeltaAssignment
    phi: np.ndarray

    @property
    def N(self) -> int:
        return self.assignment.L.size

    @cached_property
    def hyperplanes(self) -> HyperplaneSystem:
        return compute_hyperplanes(self.complex)

    @cached_property
    def lam_src(self) -> np.ndarray:
        return self.assignment.end_mask[self.complex.rev]

    @cached_property
    def lam_dst(self) -> np.ndarray:
        return self.assignment.end_mask

    def as_dict(self, e: int) -> dict[int, int]:
        return {a: int(b) for a, b in enumerate(self.phi[e]) if b >= 0}


def build_pre_delta(X: CubeComplex, A: DeltaAssignment, hs: HyperplaneSystem | None = None) -> PreDeltaCategory:
    """The unique family ``φ*_e : Δ − Λ_x → Δ − Λ_y`` inducing the adjacency maps."""
    L = A.L
    N, n = L.size, L.n
    if N - n == 2 * n:
        raise RecoveryFailed("complement ground set has 2n elements; set bijections are not determined")
    hs = hs or compute_hyperplanes(X)
    bad = [c for c in certify_all(X, hs) if not c.clean]
    if bad:
        raise NotClean("; ".join(bad[0].lines()))
    rows = X.star_pairs
    phi = K.recover_star(
        rows[:, 0].copy(), rows[:, 1].copy(), rows[:, 2].copy(),
        A.end_mask.astype(np.int64), X.rev, N,
    )
    fail = np.argwhere(phi == -2)
    if len(fail):
        e, a = fail[0]
        raise RecoveryFailed(f"edge {e}: star intersection for element {L.ground.elements[a]!r} is not a singleton")
    # the recovered bijection must reproduce the adjacency map on every star vertex
    if len(rows):
        img, ok = image_masks(phi, rows[:, 0], A.end_mask[rows[:, 1]])
        wrong = np.flatnonzero(~ok | (img != A.end_mask[rows[:, 2]]))
        if len(wrong):
            raise RecoveryFailed(f"edge {rows[wrong[0], 0]}: adjacency map is not induced by a set bijection")
    pre = PreDeltaCategory(X, A, phi)
    pre.__dict__["hyperplanes"] = hs
    report = verify_pre_delta(X, pre)
    if report:
        raise RecoveryFailed(report[0])
    return pre


def _check_inverses(X: CubeComplex, phi: np.ndarray, dom: np.ndarray, cod: np.ndarray) -> list[str]:
    out = []
    N = phi.shape[1]
    a = np.arange(N)
    in_dom = ((dom[:, None] >> a) & 1).astype(bool)
    defined = phi >= 0
    for e in np.flatnonzero((in_dom != defined).any(axis=1)):
        out.append(f"CELL edge/{e}: domain is not the complement of the dual label")
    img, ok = image_masks(phi, np.arange(X.n_edges), dom)
    for e in np.flatnonzero(ok & (img != cod)):
        out.append(f"CELL edge/{e}: image is not the complement of the dual label")
    back = np.take_along_axis(phi[X.rev], np.maximum(phi, 0), axis=1)
    for e in np.flatnonzero((defined & (back != a)).any(axis=1)):
        out.append(f"CELL edge/{e}: map on the reversed edge is not the inverse")
    return out


def _square_checks(X: CubeComplex, phi: np.ndarray, end_mask: np.ndarray, total: bool) -> list[str]:
    out = []
    if X.n_squares == 0:
        return out
    N = phi.shape[1]
    full = (1 << N) - 1
    rev = X.rev
    sq = X.squares
    lam1_x = end_mask[rev[sq[:, 0]]]
    lam2_x = end_mask[rev[sq[:, 3]]]
    domain = np.full(len(sq), full, dtype=np.int64) if total else full & ~lam1_x & ~lam2_x
    for s in np.flatnonzero(K.square_defects(phi, sq, domain)):
        out.append(f"CELL square/{s}: the two paths around the square disagree")
    # transport of crossing labels, in all eight rootings of each square
    F = square_forms_array(sq, rev).reshape(-1, 4)
    sid = np.repeat(np.arange(len(sq)), 8)
    e1, e2, e1p, e2p = F.T
    checks = [
        (e1, end_mask[rev[e2p]], end_mask[rev[e2]], "label of the crossing hyperplane is not transported along e1"),
        (e2p, end_mask[rev[e1]], end_mask[rev[e1p]], "label of the crossing hyperplane is not transported along e2'"),
    ]
    if total:
        checks.append((e1, end_mask[rev[e1]], end_mask[e1], "dual label is not carried to the dual label"))
    bad_sq: dict[int, str] = {}
    for edges, src_mask, want, msg in checks:
        img, ok = image_masks(phi, edges, src_mask)
        for i in np.flatnonzero(~ok | (img != want)):
            bad_sq.setdefault(int(sid[i]), msg)
    for s in sorted(bad_sq):
        out.append(f"CELL square/{s}: {bad_sq[s]}")
    return out


def verify_pre_delta(X: CubeComplex, pre: PreDeltaCategory) -> list[str]:
    """Inverses, restricted square commutativity, transport of crossing labels."""
    full = (1 << pre.N) - 1
    out = _check_inverses(X, pre.phi, full & ~pre.lam_src, full & ~pre.lam_dst)
    out += _square_checks(X, pre.phi, pre.assignment.end_mask, total=False)
    return out


def lift_pre_delta(f: CoverMap, pre: PreDeltaCategory) -> PreDeltaCategory:
    """Pull back along a verified cover (labels and maps both pulled back)."""
    if not f.verified:
        raise UnverifiedCover("cover map has not been verified")
    A = pullback_assignment(pre.assignment, f.edge_map)
    return PreDeltaCategory(f.total, A, pre.phi[f.edge_map])


# ---------------------------------------------------------------- parallel holonomy


@dataclass(frozen=True, eq=False)
class ParallelHolonomy:
    hyperplane: int
    side: int
    basepoint: int
    domain: tuple[int, ...]  # sorted Λ_p
    nodes: np.ndarray  # side 0-cubes in BFS order
    transport: np.ndarray  # transport[i]: Λ_p → Λ_{nodes[i]}, as a partial row
    tree_edges: tuple[int, ...]
    loop_edges: tuple[int, ...]
    loop_gains: tuple[tuple[int, ...], ...]  # permutations of positions in domain
    image: tuple[tuple[int, ...], ...]

    @property
    def trivial(self) -> bool:
        return len(self.image) <= 1

    def witness(self) -> list[int]:
        for e, g in zip(self.loop_edges, self.loop_gains):
            if not P.is_identity(g):
                return [int(e)]
        return []

    def transport_to(self, v: int) -> dict[int, int]:
        i = int(np.flatnonzero(self.nodes == v)[0])
        return {a: int(self.transport[i, a]) for a in self.domain}

    def element_image(self) -> set[tuple[tuple[int, int], ...]]:
        """The image group as maps on the elements of ``Λ_p``."""
        d = self.domain
        return {tuple((d[i], d[g[i]]) for i in range(len(d))) for g in self.image}


def _side_holonomy(X: CubeComplex, pre: PreDeltaCategory, side: Side, basepoint: int | None = None) -> ParallelHolonomy:
    N = pre.N
    p = int(side.vertices[0]) if basepoint is None else int(basepoint)
    if p not in side.dual_end:
        raise ValueError(f"0-cube {p} is not on side {side.sign:+d} of hyperplane {side.hyperplane}")
    lam_p = int(pre.assignment.end_mask[side.dual_end[p]])
    domain = tuple(_mask_elements(lam_p))
    out_of: dict[int, list[int]] = {}
    for e in side.edges.tolist():
        out_of.setdefault(int(X.src[e]), []).append(e)
    node = {p: 0}
    order = [p]
    parent, child, edge, level = [], [], [], []
    depth = {p: 0}
    q = deque([p])
    while q:
        x = q.popleft()
        for e in out_of.get(x, []):
            y = int(X.dst[e])
            if y not in node:
                node[y] = len(order)
                order.append(y)
                depth[y] = depth[x] + 1
                parent.append(node[x])
                child.append(node[y])
                edge.append(e)
                level.append(depth[y])
                q.append(y)
    if len(order) != len(side.vertices):
        raise PathDisconnected(f"side {side.sign:+d} of hyperplane {side.hyperplane} is disconnected")
    T0 = np.full((len(order), N), -1, dtype=np.int64)
    T0[0, list(domain)] = list(domain)
    arr = lambda v: np.asarray(v, dtype=np.int64)
    T = K.forest_transport(T0, arr(parent), arr(child), arr(edge), arr(level), pre.phi)
    tree = set(edge) | {int(X.rev[e]) for e in edge}
    loops = [e for e in side.edges.tolist() if e not in tree and e < X.rev[e]]
    G = K.forest_gains(
        T, arr([node[int(X.src[e])] for e in loops]), arr([node[int(X.dst[e])] for e in loops]), arr(loops), pre.phi
    )
    pos = {a: i for i, a in enumerate(domain)}
    gains = []
    for row in G:
        gains.append(tuple(pos.get(int(row[a]), -1) for a in domain))
    if any(-1 in g for g in gains):
        raise IllDefined(-1, f"parallel transport leaves the label set on side {side.sign:+d} of hyperplane {side.hyperplane}")
    if len(side.squares):
        sq = X.squares[side.squares]
        dom = np.array([pre.assignment.end_mask[side.dual_end[int(X.src[s[0]])]] for s in sq], dtype=np.int64)
        bad = np.flatnonzero(K.square_defects(pre.phi, sq, dom))
        if len(bad):
            raise IllDefined(int(side.squares[bad[0]]))
    image = P.generate(gains, len(domain)) if domain else [()]
    return ParallelHolonomy(
        side.hyperplane, side.sign, p, domain, np.array(order, dtype=np.int64), T,
        tuple(edge), tuple(loops), tuple(gains), tuple(image),
    )


def parallel_holonomy(
    X: CubeComplex, pre: PreDeltaCategory, h: int, side: int, basepoint: int | None = None
) -> ParallelHolonomy:
    """``Ψ_p``: loops on one side of the carrier acting on ``Λ_p``."""
    hs = pre.hyperplanes
    minus, plus = sides_and_parallel_edges(X, hs, h)
    return _side_holonomy(X, pre, plus if side > 0 else minus, basepoint)


def all_parallel_holonomies(X: CubeComplex, pre: PreDeltaCategory) -> list[ParallelHolonomy]:
    hs = pre.hyperplanes
    certs = certify_all(X, hs)
    out = []
    for hp, cert in zip(hs, certs):
        if not cert.clean:
            raise NotClean("; ".join(cert.lines()))
        for side in sides_and_parallel_edges(X, hs, hp, cert):
            out.append(_side_holonomy(X, pre, side))
    return out


# ---------------------------------------------------------------- extension


@dataclass(frozen=True, eq=False)
class ExtensionTable:
    """How each base choice propagates: ``φ°_d(a) = A[d][p[B[d][a]]]`` for the
    positive dual edges ``d`` of each hyperplane, with ``p`` the base choice."""

    hyperplane: np.ndarray  # per row
    edge: np.ndarray
    rev_edge: np.ndarray
    B: np.ndarray  # (rows, N): element of Λ_x -> position in the base domain, -1 elsewhere
    A: np.ndarray  # (rows, n): position in the base codomain -> element of Λ_y
    n_hyperplanes: int
    n: int


def extension_table(X: CubeComplex, pre: PreDeltaCategory, check_trivial: bool = True) -> ExtensionTable:
    hs = pre.hyperplanes
    certs = certify_all(X, hs)
    N, n = pre.N, pre.assignment.L.n
    hyp, edges, revs, Bs, As = [], [], [], [], []
    for hp, cert in zip(hs, certs):
        if not cert.clean:
            raise NotClean("; ".join(cert.lines()))
        e0 = int(hp.positive[0])
        x0, y0 = int(X.src[e0]), int(X.dst[e0])
        minus, plus = sides_and_parallel_edges(X, hs, hp, cert)
        hm = _side_holonomy(X, pre, minus, x0)
        hp_ = _side_holonomy(X, pre, plus, y0)
        if check_trivial:
            for hol in (hm, hp_):
                if not hol.trivial:
                    raise NontrivialParallelHolonomy(hp.id, hol.side, hol.witness())
        sx, sy = hm.domain, hp_.domain
        node_m = {int(v): i for i, v in enumerate(hm.nodes)}
        node_p = {int(v): i for i, v in enumerate(hp_.nodes)}
        for d in hp.positive.tolist():
            a_, b_ = int(X.src[d]), int(X.dst[d])
            Tm = hm.transport[node_m[a_]]
            Tp = hp_.transport[node_p[b_]]
            B = np.full(N, -1, dtype=np.int64)
            for i, a in enumerate(sx):
                B[Tm[a]] = i
            A = np.array([Tp[b] for b in sy], dtype=np.int64)
            hyp.append(hp.id)
            edges.append(d)
            revs.append(int(X.rev[d]))
            Bs.append(B)
            As.append(A)
    return ExtensionTable(
        np.array(hyp, dtype=np.int64), np.array(edges, dtype=np.int64), np.array(revs, dtype=np.int64),
        np.array(Bs, dtype=np.int64).reshape(-1, N), np.array(As, dtype=np.int64).reshape(-1, n),
        len(hs), n,
    )


@dataclass(frozen=True, eq=False)
class DeltaCategory:
    complex: CubeComplex
    assignment: DeltaAssignment
    phi: np.ndarray
    base_choices: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.assignment.L.size

    def as_dict(self, e: int) -> dict[int, int]:
        return {a: int(b) for a, b in enumerate(self.phi[e])}


def fill_extension(pre_phi: np.ndarray, table: ExtensionTable, choices: dict[int, tuple[int, ...]]) -> np.ndarray:
    phi = pre_phi.copy()
    ident = tuple(range(table.n))
    for r in range(len(table.edge)):
        p = choices.get(int(table.hyperplane[r]), ident)
        e, er = table.edge[r], table.rev_edge[r]
        for a in np.flatnonzero(table.B[r] >= 0):
            b = table.A[r, p[table.B[r, a]]]
            phi[e, a] = b
            phi[er, b] = a
    return phi


def extend_to_delta(
    X: CubeComplex, pre: PreDeltaCategory, base_choices: dict[int, tuple[int, ...]] | None = None
) -> DeltaCategory:
    """Complete ``φ*`` to total bijections by propagating one base bijection per hyperplane.

    With base dual edge ``e = (x, y)`` and choice ``φ°_e``, a dual edge
    ``e' = (x', y')`` of the same orientation gets
    ``φ°_{e'} = ψ_γ ∘ φ°_e ∘ ψ_{γ'}⁻¹`` for parallel paths ``γ: y → y'`` and
    ``γ': x → x'``.
    """
    choices = dict(base_choices or {})
    n = pre.assignment.L.n
    for h, p in choices.items():
        if sorted(p) != list(range(n)):
            raise ValueError(f"base choice for hyperplane {h} is not a permutation of {n} positions")
    table = extension_table(X, pre)
    phi = fill_extension(pre.phi, table, choices)
    dc = DeltaCategory(X, pre.assignment, phi, choices)
    report = verify_delta(X, dc)
    if report:
        raise IllDefined(-1, report[0])
    return dc


def verify_delta(X: CubeComplex, dc: DeltaCategory) -> list[str]:
    """Invertibility, commutativity and parallel transport on every square."""
    N = dc.N
    phi = dc.phi
    out = []
    if X.n_edges:
        ok = np.array_equal(np.sort(phi, axis=1), np.tile(np.arange(N), (X.n_edges, 1)))
        if not ok:
            for e in np.flatnonzero((np.sort(phi, axis=1) != np.arange(N)).any(axis=1)):
                out.append(f"CELL edge/{e}: not a bijection of the ground set")
            return out
    full = np.full(X.n_edges, (1 << N) - 1, dtype=np.int64)
    out += _check_inverses(X, phi, full, full)
    out += _square_checks(X, phi, dc.assignment.end_mask, total=True)
    return out


def lift_delta(f: CoverMap, dc: DeltaCategory) -> DeltaCategory:
    """``φ̂_ê = φ_{f(ê)}`` with the link identifications pulled back along ``f``."""
    if not f.verified:
        raise UnverifiedCover("cover map has not been verified")
    A = pullback_assignment(dc.assignment, f.edge_map)
    lifted = DeltaCategory(f.total, A, dc.phi[f.edge_map], dict(dc.base_choices))
    report = verify_delta(f.total, lifted)
    if report:
        raise IllDefined(-1, report[0])
    return lifted


def all_base_choices(n: int) -> list[tuple[int, ...]]:
    return sorted(permutations(range(n)))
