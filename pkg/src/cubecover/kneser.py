"""Kneser complexes ``K_n(Δ)`` and recovery of set bijections from their isomorphisms.

Vertices are the ``n``-subsets of the ground set in lexicographic order of
their index tuples; two vertices span an edge iff the subsets are disjoint,
and higher simplices are the cliques of that graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import NotInduced, ValidationError


@dataclass(frozen=True)
class LabelSet:
    """A finite, totally ordered set of distinct labels."""

    elements: tuple[Hashable, ...]

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("labels must be pairwise distinct")
        if not self.elements:
            raise ValueError("label set must be non-empty")

    @classmethod
    def range(cls, k: int) -> "LabelSet":
        return cls(tuple(range(1, k + 1)))

    @property
    def cardinality(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def position(self) -> dict[Hashable, int]:
        return {a: i for i, a in enumerate(self.elements)}


def _as_labelset(delta) -> LabelSet:
    if isinstance(delta, LabelSet):
        return delta
    if isinstance(delta, int):
        return LabelSet.range(delta)
    return LabelSet(tuple(delta))


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_elements(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True, eq=False)
class KneserComplex:
    ground: LabelSet
    n: int
    vertices: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    simplices: tuple[tuple[tuple[int, ...], ...], ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.ground)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @cached_property
    def masks(self) -> np.ndarray:
        return np.array([sum(1 << i for i in s) for s in self.vertices], dtype=np.int64)

    @cached_property
    def index_of_mask(self) -> dict[int, int]:
        return {int(m): i for i, m in enumerate(self.masks)}

    @cached_property
    def adjacency(self) -> list[int]:
        """Neighbour sets as bitmasks over vertex indices."""
        adj = [0] * self.num_vertices
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    @cached_property
    def edge_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(e) for e in self.edges)

    def degree(self, v: int) -> int:
        return popcount(self.adjacency[v])

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def subset(self, v: int) -> tuple[Hashable, ...]:
        """The labels of the ``n``-subset attached to vertex ``v``."""
        return tuple(self.ground.elements[i] for i in self.vertices[v])

    def vertex_of(self, labels: Iterable[Hashable]) -> int:
        idx = sorted(self.ground.position[a] for a in labels)
        return self.index_of_mask[sum(1 << i for i in idx)]

    def vertex_of_mask(self, mask: int) -> int:
        return self.index_of_mask[int(mask)]

    def induced_vertex_map(self, perm: Sequence[int]) -> list[int]:
        """Vertex action of a permutation of the ground indices."""
        out = []
        for s in self.vertices:
            out.append(self.index_of_mask[sum(1 << perm[i] for i in s)])
        return out

    def label(self, v: int) -> str:
        return "".join(str(a) for a in self.subset(v))


def _cliques(num: int, adjacency: list[int], max_size: int) -> list[list[tuple[int, ...]]]:
    layers: list[list[tuple[int, ...]]] = [[(v,) for v in range(num)]]
    while len(layers) < max_size:
        nxt = []
        for c in layers[-1]:
            common = adjacency[c[0]]
            for v in c[1:]:
                common &= adjacency[v]
            common >>= c[-1] + 1
            w = c[-1] + 1
            while common:
                if common & 1:
                    nxt.append(c + (w,))
                common >>= 1
                w += 1
        if not nxt:
            break
        layers.append(nxt)
    return layers


def build_kneser(delta, n: int) -> KneserComplex:
    """``K_n(Δ)``: ``n``-subsets of ``delta``, adjacent when disjoint, flag-completed."""
    ground = _as_labelset(delta)
    if not 1 <= n <= len(ground):
        raise ValueError(f"n={n} out of range for |Δ|={len(ground)}")
    vertices = tuple(combinations(range(len(ground)), n))
    masks = [sum(1 << i for i in s) for s in vertices]
    edges = tuple(
        (i, j)
        for i in range(len(vertices))
        for j in range(i + 1, len(vertices))
        if masks[i] & masks[j] == 0
    )
    adjacency = [0] * len(vertices)
    for i, j in edges:
        adjacency[i] |= 1 << j
        adjacency[j] |= 1 << i
    max_size = len(ground) // n
    layers = _cliques(len(vertices), adjacency, max_size + 1)
    if len(layers) > max_size:
        raise ValidationError(f"clique of size {len(layers)} exceeds the bound {max_size}")
    d, rem = divmod(len(ground) - 1, n)
    # with n = 1 every subset family is a clique, so only n >= 2 has dimension d-1
    if rem == 0 and d >= 1 and n >= 2 and len(layers) != d:
        raise ValidationError("dimension does not match |Δ| = nd+1")
    return KneserComplex(ground, n, vertices, edges, tuple(tuple(layer) for layer in layers))


def kneser_parameters(K: KneserComplex) -> tuple[int, int] | None:
    """``(n, d)`` when ``|Δ| = nd+1``, else ``None``."""
    if (K.size - 1) % K.n:
        return None
    return K.n, (K.size - 1) // K.n


def sub_kneser(K: KneserComplex, sigma: Iterable[Hashable]) -> tuple[KneserComplex | None, list[int]]:
    """``K_n(Σ)`` with its vertex inclusion into ``K``.

    Returns ``(None, [])`` when ``|Σ| < n``.
    """
    sigma = set(sigma)
    unknown = sigma - set(K.ground.elements)
    if unknown:
        raise ValueError(f"labels {sorted(map(str, unknown))} not in the ground set")
    sub_ground = tuple(a for a in K.ground.elements if a in sigma)
    if len(sub_ground) < K.n:
        return None, []
    sub = build_kneser(LabelSet(sub_ground), K.n)
    inclusion = [K.vertex_of(sub.subset(v)) for v in range(sub.num_vertices)]
    return sub, inclusion


def vertex_star(K: KneserComplex, v: int) -> set[tuple[int, ...]]:
    """Simplices of ``K`` strictly containing ``v``, with ``v`` removed."""
    out = set()
    for layer in K.simplices[1:]:
        for s in layer:
            if v in s:
                out.add(tuple(w for w in s if w != v))
    return out


@dataclass(frozen=True)
class SetBijection:
    source: LabelSet
    target: LabelSet
    forward: tuple[int, ...]

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        out = [0] * len(self.forward)
        for i, j in enumerate(self.forward):
            out[j] = i
        return tuple(out)

    def __call__(self, label: Hashable) -> Hashable:
        return self.target.elements[self.forward[self.source.position[label]]]

    def as_dict(self) -> dict[Hashable, Hashable]:
        return {a: self(a) for a in self.source.elements}


def recover_bijection(K1: KneserComplex, K2: KneserComplex, iso: Mapping[int, int] | Sequence[int]) -> SetBijection:
    """The bijection ``b: Δ1 → Δ2`` with ``s(iso(v)) = b(s_v)``.

    ``b(a)`` is read off as the single element common to the images of all
    vertices whose subsets contain ``a``.
    """
    if K1.size != K2.size or K1.n != K2.n:
        raise NotInduced("Kneser complexes have different parameters")
    if isinstance(iso, Mapping):
        image = [iso[v] for v in range(K1.num_vertices)]
    else:
        image = list(iso)
    if len(image) != K1.num_vertices or sorted(image) != list(range(K2.num_vertices)):
        raise NotInduced("vertex map is not a bijection")
    full = (1 << K2.size) - 1
    forward = []
    for a in range(K1.size):
        acc = full
        for v, s in enumerate(K1.vertices):
            if a in s:
                acc &= int(K2.masks[image[v]])
        if popcount(acc) != 1:
            raise NotInduced(f"element {K1.ground.elements[a]!r}: intersection has {popcount(acc)} elements")
        forward.append(acc.bit_length() - 1)
    if len(set(forward)) != len(forward):
        raise NotInduced("recovered map is not injective")
    induced = K1.induced_vertex_map(forward) if K1 is K2 else [
        K2.index_of_mask[sum(1 << forward[i] for i in s)] for s in K1.vertices
    ]
    if induced != image:
        bad = next(v for v in range(len(image)) if induced[v] != image[v])
        raise NotInduced(f"vertex {K1.label(bad)} is not sent to the image of its subset")
    return SetBijection(K1.ground, K2.ground, tuple(forward))


def is_square_free(K: KneserComplex) -> tuple[bool, tuple[int, int, int, int] | None]:
    """Search the 1-skeleton for an induced 4-cycle ``v1 v2 v3 v4``."""
    adj = K.adjacency
    N = K.num_vertices
    for v1 in range(N):
        for v3 in range(v1 + 1, N):
            if adj[v1] >> v3 & 1:
                continue
            common = mask_elements(adj[v1] & adj[v3])
            for i, v2 in enumerate(common):
                for v4 in common[i + 1:]:
                    if not adj[v2] >> v4 & 1:
                        return False, (v1, v2, v3, v4)
    return True, None


def expected_counts(n: int, d: int) -> tuple[int, int]:
    """Vertex count and common degree of ``K_n`` on ``nd+1`` points."""
    return comb(n * d + 1, n), comb(n * (d - 1) + 1, n)
