"""Hyperplanes, their carriers and sides, and cleanliness certificates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as K
from . import perm as P
from .complex import FACE_LAYOUT, CubeComplex, axis_edge
from .cover import (
    CoverMap,
    NotFound,
    VoltageAssignment,
    compose,
    gains_from_generators,
    homomorphisms,
    identity_cover,
    voltage_cover,
)
from .errors import AlreadyTwoSided, NotClean


@dataclass(frozen=True, eq=False)
class Hyperplane:
    id: int
    dual_edges: np.ndarray
    orientation_classes: tuple[np.ndarray, ...]

    @property
    def two_sided(self) -> bool:
        return len(self.orientation_classes) == 2

    @property
    def positive(self) -> np.ndarray:
        """The orientation class holding the smallest dual edge."""
        return self.orientation_classes[0]


@dataclass(frozen=True, eq=False)
class HyperplaneSystem:
    complex: CubeComplex
    label: np.ndarray
    orient: np.ndarray
    hyperplanes: tuple[Hyperplane, ...]

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def __getitem__(self, i: int) -> Hyperplane:
        return self.hyperplanes[i]

    def __iter__(self):
        return iter(self.hyperplanes)

    @cached_property
    def positive_edge(self) -> np.ndarray:
        """True on directed 1-cubes in the positive class of their hyperplane."""
        mask = np.zeros(len(self.label), dtype=bool)
        for h in self.hyperplanes:
            mask[h.positive] = True
        return mask


def _square_pairs(X: CubeComplex, with_reversal: bool) -> tuple[np.ndarray, np.ndarray]:
    sq = X.squares
    r = X.rev
    a = [sq[:, 0], sq[:, 1], r[sq[:, 0]], r[sq[:, 1]]]
    b = [sq[:, 2], sq[:, 3], r[sq[:, 2]], r[sq[:, 3]]]
    if with_reversal:
        ids = np.arange(X.n_edges)
        a.append(ids)
        b.append(r)
    return np.concatenate(a).astype(np.int64), np.concatenate(b).astype(np.int64)


def compute_hyperplanes(X: CubeComplex) -> HyperplaneSystem:
    """Union-find over directed 1-cubes: square opposites and reversal."""
    a, b = _square_pairs(X, True)
    label = K.components(X.n_edges, a, b)
    a, b = _square_pairs(X, False)
    orient = K.components(X.n_edges, a, b)
    hs = []
    order = np.argsort(label, kind="stable")
    cuts = np.flatnonzero(np.diff(label[order])) + 1
    for h, members in enumerate(np.split(order, cuts) if X.n_edges else []):
        members = np.sort(members)
        classes = []
        seen = []
        for e in members:
            o = orient[e]
            if o not in seen:
                seen.append(o)
                classes.append(members[orient[members] == o])
        hs.append(Hyperplane(h, members, tuple(classes)))
    return HyperplaneSystem(X, label, orient, tuple(hs))


@dataclass(frozen=True)
class CleanlinessCertificate:
    hyperplane: int
    embedded: bool
    embedded_witness: int | None
    two_sided: bool
    two_sided_witness: int | None
    self_osculating: bool
    osculation_witness: int | None
    sides_disjoint: bool
    sides_witness: int | None
    # (positive dual edge, its - side 0-cube, its + side 0-cube) rows
    product_structure: np.ndarray | None

    @property
    def clean(self) -> bool:
        return self.product_structure is not None

    def lines(self) -> list[str]:
        h = self.hyperplane
        out = []
        if not self.embedded:
            out.append(f"CELL square/{self.embedded_witness}: hyperplane {h} self-intersects")
        if not self.two_sided:
            out.append(f"CELL edge/{self.two_sided_witness}: hyperplane {h} is one-sided")
        if self.self_osculating:
            out.append(f"CELL vertex/{self.osculation_witness}: hyperplane {h} self-osculates")
        if not self.sides_disjoint:
            out.append(f"CELL vertex/{self.sides_witness}: hyperplane {h} has both sides at one 0-cube")
        return out


def _osculation(X: CubeComplex, hs: HyperplaneSystem) -> dict[int, int]:
    """First 0-cube with two edge-ends of the same hyperplane, per hyperplane."""
    keys = np.stack([hs.label, X.dst], axis=1)
    if len(keys) == 0:
        return {}
    _, idx, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
    out: dict[int, int] = {}
    for i in idx[counts > 1]:
        h = int(hs.label[i])
        x = int(X.dst[i])
        out[h] = min(out.get(h, x), x)
    return out


def _self_intersections(X: CubeComplex, hs: HyperplaneSystem) -> dict[int, int]:
    out: dict[int, int] = {}
    if X.n_squares == 0:
        return out
    l1 = hs.label[X.squares[:, 0]]
    l2 = hs.label[X.squares[:, 1]]
    for s in np.flatnonzero(l1 == l2):
        out.setdefault(int(l1[s]), int(s))
    return out


def certify_all(X: CubeComplex, hs: HyperplaneSystem | None = None) -> list[CleanlinessCertificate]:
    hs = hs or compute_hyperplanes(X)
    osc = _osculation(X, hs)
    inter = _self_intersections(X, hs)
    return [_certify(X, hs, h, osc, inter) for h in hs]


def certify_clean(X: CubeComplex, hs: HyperplaneSystem, h: Hyperplane | int) -> CleanlinessCertificate:
    hp = hs[h] if isinstance(h, (int, np.integer)) else h
    return _certify(X, hs, hp, _osculation(X, hs), _self_intersections(X, hs))


def _certify(X, hs, hp: Hyperplane, osc, inter) -> CleanlinessCertificate:
    h = hp.id
    embedded = h not in inter
    two_sided = hp.two_sided
    two_w = None
    if not two_sided:
        two_w = int(hp.dual_edges[0])
    pos = hp.positive
    minus, plus = X.src[pos], X.dst[pos]
    common = np.intersect1d(minus, plus)
    disjoint = len(common) == 0
    side_w = int(common[0]) if len(common) else None
    self_osc = h in osc
    product = None
    if embedded and two_sided and not self_osc and disjoint:
        if len(np.unique(minus)) == len(pos) and len(np.unique(plus)) == len(pos):
            product = np.stack([pos, minus, plus], axis=1)
    return CleanlinessCertificate(
        h, embedded, inter.get(h), two_sided, two_w, self_osc, osc.get(h), disjoint, side_w, product
    )


def check_certificate(X: CubeComplex, hs: HyperplaneSystem, cert: CleanlinessCertificate) -> bool:
    """Independent re-check of a certificate against the complex."""
    hp = hs[cert.hyperplane]
    if cert.embedded_witness is not None:
        s = X.squares[cert.embedded_witness]
        if hs.label[s[0]] != hs.label[s[1]]:
            return False
    if cert.osculation_witness is not None:
        ends = [e for e in X.ends_at[cert.osculation_witness] if hs.label[e] == hp.id]
        if len(ends) < 2:
            return False
    if cert.product_structure is not None:
        d, lo, hi = cert.product_structure.T
        if set(d.tolist()) | set(X.rev[d].tolist()) != set(hp.dual_edges.tolist()):
            return False
        if np.any(X.src[d] != lo) or np.any(X.dst[d] != hi):
            return False
        if len(set(lo.tolist()) | set(hi.tolist())) != 2 * len(d):
            return False
        for x in np.concatenate([lo, hi]).tolist():
            if sum(1 for e in X.ends_at[x] if hs.label[e] == hp.id) != 1:
                return False
    return True


# ---------------------------------------------------------------- sides


@dataclass(frozen=True, eq=False)
class Side:
    hyperplane: int
    sign: int
    vertices: np.ndarray
    edges: np.ndarray  # directed parallel 1-cubes, reversal-closed
    squares: np.ndarray  # faces of carrier 3-cubes lying in this side
    dual_end: dict[int, int]  # 0-cube -> the dual edge-end there


def _parallel_edges(X: CubeComplex, hs: HyperplaneSystem, h: int) -> tuple[np.ndarray, np.ndarray]:
    """Directed parallel edges on the - and + side."""
    sq = X.squares
    pos = hs.positive_edge
    minus, plus = [], []
    if len(sq):
        lab = hs.label
        for s in np.flatnonzero(lab[sq[:, 0]] == h):
            e1, e2, e1p, e2p = sq[s]
            if pos[e1]:
                plus.append(e2)
                minus.append(e2p)
            else:
                plus.append(e2p)
                minus.append(e2)
        for s in np.flatnonzero(lab[sq[:, 1]] == h):
            e1, e2, e1p, e2p = sq[s]
            if pos[e2]:
                plus.append(e1p)
                minus.append(e1)
            else:
                plus.append(e1)
                minus.append(e1p)
    out = []
    for lst in (minus, plus):
        arr = np.array(lst, dtype=np.int64)
        out.append(np.unique(np.concatenate([arr, X.rev[arr]])) if len(arr) else arr)
    return out[0], out[1]


def _side_squares(X: CubeComplex, hs: HyperplaneSystem, h: int) -> tuple[list[int], list[int]]:
    minus, plus = [], []
    pos = hs.positive_edge
    for c, A in enumerate(X.cubes):
        for i in range(3):
            e = axis_edge(A, i, 0)
            if hs.label[e] != h:
                continue
            for f, (a, b, k, val) in enumerate(FACE_LAYOUT):
                if k != i:
                    continue
                side_plus = (val == 1) == bool(pos[e])
                (plus if side_plus else minus).append(int(X.cube_faces[c, f]))
    return sorted(set(minus)), sorted(set(plus))


def sides_and_parallel_edges(
    X: CubeComplex, hs: HyperplaneSystem, h: Hyperplane | int, cert: CleanlinessCertificate | None = None
) -> tuple[Side, Side]:
    """The ``-1`` and ``+1`` sides of a clean, 2-sided hyperplane."""
    hp = hs[h] if isinstance(h, (int, np.integer)) else h
    cert = cert or certify_clean(X, hs, hp)
    if not cert.clean:
        raise NotClean(f"hyperplane {hp.id} is not fully clean and 2-sided: " + "; ".join(cert.lines()))
    d, lo, hi = cert.product_structure.T
    em, ep = _parallel_edges(X, hs, hp.id)
    sm, sp = _side_squares(X, hs, hp.id)
    minus = Side(
        hp.id, -1, np.sort(lo), em, np.array(sm, dtype=np.int64),
        {int(x): int(X.rev[e]) for x, e in zip(lo, d)},
    )
    plus = Side(
        hp.id, +1, np.sort(hi), ep, np.array(sp, dtype=np.int64),
        {int(x): int(e) for x, e in zip(hi, d)},
    )
    return minus, plus


# ---------------------------------------------------------------- repairs


def needs_two_siding(cert: CleanlinessCertificate) -> bool:
    return not cert.two_sided or not cert.sides_disjoint


def two_sided_cover(X: CubeComplex, hs: HyperplaneSystem, h: Hyperplane | int) -> CoverMap:
    """Degree-2 cover from the mod-2 voltage that is 1 exactly on edges dual to ``h``.

    Accepted when ``h`` is one-sided or its two sides meet at a 0-cube (a loop
    edge is the smallest such case).
    """
    hp = hs[h] if isinstance(h, (int, np.integer)) else h
    cert = certify_clean(X, hs, hp)
    if not needs_two_siding(cert):
        raise AlreadyTwoSided(f"hyperplane {hp.id} is already 2-sided with disjoint sides")
    gains = np.tile(np.arange(2), (X.n_edges, 1))
    gains[hp.dual_edges] = (1, 0)
    return voltage_cover(X, VoltageAssignment(2, gains, ((0, 1), (1, 0))))


def all_clean(X: CubeComplex) -> tuple[bool, list[CleanlinessCertificate]]:
    certs = certify_all(X)
    return all(c.clean for c in certs), certs


def search_clean_cover(X: CubeComplex, budget: int = 8, max_candidates: int = 64) -> CoverMap | NotFound:
    """A cover of degree ``≤ budget`` in which every hyperplane is fully clean
    and 2-sided.

    First repairs one-sided hyperplanes (and those whose sides touch) by
    double covers, then walks the group ladder of voltage covers.
    """
    ok, certs = all_clean(X)
    if ok:
        return identity_cover(X)
    best = sum(not c.clean for c in certs)
    best_lines = [line for c in certs for line in c.lines()]
    tried = 0

    cur = identity_cover(X)
    while cur.degree * 2 <= budget:
        Y = cur.total
        hs = compute_hyperplanes(Y)
        certs = certify_all(Y, hs)
        todo = [c for c in certs if needs_two_siding(c)]
        if not todo:
            break
        tried += 1
        cur = compose(cur, two_sided_cover(Y, hs, todo[0].hyperplane))
        ok, certs = all_clean(cur.total)
        bad = sum(not c.clean for c in certs)
        if ok:
            return cur
        if bad < best:
            best, best_lines = bad, [line for c in certs for line in c.lines()]

    for name, elements in P.ladder(budget):
        for labels in homomorphisms(X, elements, surjective=True, limit=max_candidates):
            tried += 1
            f = voltage_cover(X, gains_from_generators(X, labels, elements))
            ok, certs = all_clean(f.total)
            if ok:
                return f
            bad = sum(not c.clean for c in certs)
            if bad < best:
                best, best_lines = bad, [line for c in certs for line in c.lines()]
    return NotFound(
        f"no clean cover of degree <= {budget}; best attempt leaves {best} hyperplane(s) unclean",
        budget, tried, tuple(best_lines),
    )
