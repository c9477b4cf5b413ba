"""Small permutation groups as explicit element lists.

A permutation of ``{0..k-1}`` is a tuple ``p`` with ``p[i]`` the image of
``i``.  Composition is right-to-left: ``compose(q, p)`` is ``q∘p``.  Every
group touched by this package has at most a few thousand elements, so a
group is simply its sorted element list.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

Perm = tuple[int, ...]


def identity(k: int) -> Perm:
    return tuple(range(k))


def compose(q: Sequence[int], p: Sequence[int]) -> Perm:
    return tuple(q[i] for i in p)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p: Sequence[int]) -> bool:
    return all(i == j for i, j in enumerate(p))


def conjugate(g: Sequence[int], p: Sequence[int]) -> Perm:
    """``g∘p∘g⁻¹``."""
    return compose(compose(g, p), inverse(g))


def generate(gens: Iterable[Sequence[int]], degree: int) -> list[Perm]:
    """Closure of ``gens`` under composition, sorted."""
    gens = [tuple(g) for g in gens]
    ident = identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                gh = compose(g, h)
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(seen)


def multiplication_table(elements: Sequence[Perm]) -> np.ndarray:
    """``table[a, b]`` is the index of ``elements[a]∘elements[b]``."""
    index = {g: i for i, g in enumerate(elements)}
    size = len(elements)
    table = np.empty((size, size), dtype=np.int64)
    for a, g in enumerate(elements):
        for b, h in enumerate(elements):
            table[a, b] = index[compose(g, h)]
    return table


def symmetric_group(k: int) -> list[Perm]:
    return sorted(permutations(range(k)))


def elementary_abelian_generators(k: int) -> list[Perm]:
    """(Z/2)^k acting on 2k points, generator i swapping 2i and 2i+1."""
    gens = []
    for i in range(k):
        p = list(range(2 * k))
        p[2 * i], p[2 * i + 1] = p[2 * i + 1], p[2 * i]
        gens.append(tuple(p))
    return gens


def cyclic_generator(k: int) -> Perm:
    return tuple((i + 1) % k for i in range(k))


# Fixed order; searches walk this list front to back.
GROUP_LADDER: list[tuple[str, list[Perm], int]] = [
    ("Z2", elementary_abelian_generators(1), 2),
    ("Z2^2", elementary_abelian_generators(2), 4),
    ("S3", [(1, 0, 2), (1, 2, 0)], 3),
    ("Z2^3", elementary_abelian_generators(3), 6),
]


def ladder(max_order: int) -> list[tuple[str, list[Perm]]]:
    out = []
    for name, gens, degree in GROUP_LADDER:
        elements = generate(gens, degree)
        if len(elements) <= max_order:
            out.append((name, elements))
    return out


def are_conjugate_subgroups(a: Iterable[Perm], b: Iterable[Perm], g: Sequence[int]) -> bool:
    """True iff ``g A g⁻¹ == B`` as sets."""
    return {conjugate(g, p) for p in a} == set(b)
