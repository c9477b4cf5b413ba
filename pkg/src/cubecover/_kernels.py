"""Hot loops, each in a numba and a pure-numpy flavour.

The numba versions are used when numba imports and ``CUBECOVER_DISABLE_NUMBA``
is unset.  Both flavours take and return plain int64 arrays and must agree
bit-for-bit; ``tests/test_kernels.py`` checks that, and
``benchmarks/bench_kernels.py`` times them against each other.

Permutation rows use ``-1`` for "undefined" so that partial bijections and
total ones share one representation.
"""

from __future__ import annotations

import numpy as np

from ._config import numba_requested, thread_cap

try:
    if not numba_requested():
        raise ImportError
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    HAVE_NUMBA = False

if HAVE_NUMBA and thread_cap():
    numba.set_num_threads(min(thread_cap(), numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------- numpy flavour


def _np_components(n, a, b):
    parent = np.arange(n, dtype=np.int64)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v in zip(a.tolist(), b.tolist()):
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    roots = np.array([find(x) for x in range(n)], dtype=np.int64)
    _, first, labels = np.unique(roots, return_index=True, return_inverse=True)
    # relabel by first appearance so class 0 holds element 0
    order = np.argsort(np.argsort(first))
    return order[labels.reshape(-1)].astype(np.int64)


def _np_recover_star(row_e, row_wx, row_wy, end_mask, rev, N):
    m = len(end_mask)
    full = (1 << N) - 1
    lam_x = end_mask[rev]
    lam_y = end_mask
    bits = ((end_mask[:, None] >> np.arange(N)) & 1).astype(bool)
    acc = np.tile((full & ~lam_y)[:, None], (1, N))
    for a in range(N):
        hit = bits[row_wx, a]
        if not hit.any():
            continue
        np.bitwise_and.at(acc[:, a], row_e[hit], end_mask[row_wy[hit]])
    phi = np.full((m, N), -1, dtype=np.int64)
    in_dom = ~((lam_x[:, None] >> np.arange(N)) & 1).astype(bool)
    single = (acc > 0) & ((acc & (acc - 1)) == 0)
    logs = np.zeros_like(acc)
    nz = acc > 0
    logs[nz] = np.log2(acc[nz].astype(np.float64)).round().astype(np.int64)
    phi[in_dom & single] = logs[in_dom & single]
    phi[in_dom & ~single] = -2
    return phi


def _np_square_defects(phi, squares, domain):
    k = len(squares)
    N = phi.shape[1]
    if k == 0:
        return np.zeros(0, dtype=bool)
    e1, e2, e1p, e2p = squares.T
    a = np.arange(N)
    dom = ((domain[:, None] >> a) & 1).astype(bool)

    def apply(rows, vals):
        safe = np.where(vals >= 0, vals, 0)
        out = np.take_along_axis(phi[rows], safe, axis=1)
        return np.where(vals >= 0, out, -1)

    left = apply(e2, phi[e1])
    right = apply(e1p, phi[e2p])
    bad = dom & ((left < 0) | (right < 0) | (left != right))
    return bad.any(axis=1)


def _np_forest_transport(T, parent, child, edge, levels, phi):
    T = T.copy()
    if len(edge) == 0:
        return T
    cuts = np.flatnonzero(np.diff(levels)) + 1
    for sl in np.split(np.arange(len(edge)), cuts):
        src = T[parent[sl]]
        safe = np.where(src >= 0, src, 0)
        out = np.take_along_axis(phi[edge[sl]], safe, axis=1)
        T[child[sl]] = np.where(src >= 0, out, -1)
    return T


def _np_forest_gains(T, tail, head, edge, phi):
    k = len(edge)
    N = T.shape[1]
    if k == 0:
        return np.zeros((0, N), dtype=np.int64)
    Th = T[head]
    inv = np.full((k, N + 1), -1, dtype=np.int64)
    rows = np.repeat(np.arange(k), N)
    cols = np.where(Th >= 0, Th, N).reshape(-1)
    inv[rows, cols] = np.tile(np.arange(N), k)
    inv = inv[:, :N]
    src = T[tail]
    safe = np.where(src >= 0, src, 0)
    mid = np.take_along_axis(phi[edge], safe, axis=1)
    mid = np.where(src >= 0, mid, -1)
    safe = np.where(mid >= 0, mid, 0)
    out = np.take_along_axis(inv, safe, axis=1)
    return np.where(mid >= 0, out, -1)


def _np_fiber_bfs(out1, out2, dst1, dst2, x1, x2):
    n1, C = out1.shape
    n2 = out2.shape[0]
    ids = np.full(n1 * n2, -1, dtype=np.int64)
    pairs = [(x1, x2)]
    ids[x1 * n2 + x2] = 0
    frontier = np.array([0], dtype=np.int64)
    pa = [x1]
    pb = [x2]
    heads = []
    count = 1
    while len(frontier):
        a = np.array(pa, dtype=np.int64)[frontier]
        b = np.array(pb, dtype=np.int64)[frontier]
        ta = dst1[out1[a]]  # (F, C)
        tb = dst2[out2[b]]
        keys = (ta * n2 + tb).reshape(-1)
        new = []
        for key in keys.tolist():
            if ids[key] < 0:
                ids[key] = count
                count += 1
                pa.append(key // n2)
                pb.append(key % n2)
                new.append(ids[key])
        heads.append(ids[keys].reshape(-1, C))
        frontier = np.array(new, dtype=np.int64)
    pairs = np.stack([np.array(pa, dtype=np.int64), np.array(pb, dtype=np.int64)], axis=1)
    head = np.concatenate(heads) if heads else np.zeros((0, C), dtype=np.int64)
    return pairs, head


def _np_flat_search(
    masks, radix, perms, phi_star, fwd, fwd_rev, fwd_hyp, fwd_B, fwd_A,
    parent, child, edge, levels, chk_tail, chk_head, chk_edge,
):
    M = len(masks)
    m, N = phi_star.shape
    phi = np.broadcast_to(phi_star, (M, m, N)).copy()
    H = len(radix)
    choice = np.zeros((M, H), dtype=np.int64)
    rem = masks.copy()
    for h in range(H):
        choice[:, h] = rem % radix[h]
        rem //= radix[h]
    for f in range(len(fwd)):
        e, r, h = fwd[f], fwd_rev[f], fwd_hyp[f]
        p = perms[choice[:, h]]  # (M, n)
        for a in range(N):
            pos = fwd_B[f, a]
            if pos < 0:
                continue
            b = fwd_A[f][p[:, pos]]
            phi[:, e, a] = b
            phi[np.arange(M), r, b] = a
    n_nodes = 1 + max(
        int(child.max(initial=0)), int(parent.max(initial=0)),
        int(chk_tail.max(initial=0)), int(chk_head.max(initial=0)),
    )
    T = np.empty((M, n_nodes, N), dtype=np.int64)
    T[:] = np.arange(N)
    if len(edge):
        cuts = np.flatnonzero(np.diff(levels)) + 1
        for sl in np.split(np.arange(len(edge)), cuts):
            src = T[:, parent[sl]]
            T[:, child[sl]] = np.take_along_axis(phi[:, edge[sl]], src, axis=2)
    ok = np.ones(M, dtype=bool)
    if len(chk_edge):
        mid = np.take_along_axis(phi[:, chk_edge], T[:, chk_tail], axis=2)
        ok = (mid == T[:, chk_head]).all(axis=(1, 2))
    return ok


# ---------------------------------------------------------------- numba flavour

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_find(parent, x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            nxt = parent[x]
            parent[x] = root
            x = nxt
        return root

    @njit(cache=True)
    def _nb_components(n, a, b):
        parent = np.arange(n)
        for i in range(len(a)):
            ru = _nb_find(parent, a[i])
            rv = _nb_find(parent, b[i])
            if ru != rv:
                if ru < rv:
                    parent[rv] = ru
                else:
                    parent[ru] = rv
        labels = np.full(n, -1, dtype=np.int64)
        remap = np.full(n, -1, dtype=np.int64)
        nxt = 0
        for x in range(n):
            r = _nb_find(parent, x)
            if remap[r] < 0:
                remap[r] = nxt
                nxt += 1
            labels[x] = remap[r]
        return labels

    @njit(cache=True)
    def _nb_recover_star(row_e, row_wx, row_wy, end_mask, rev, N):
        m = len(end_mask)
        full = (np.int64(1) << N) - 1
        acc = np.empty((m, N), dtype=np.int64)
        for e in range(m):
            comp = full & ~end_mask[e]
            for a in range(N):
                acc[e, a] = comp
        for r in range(len(row_e)):
            e = row_e[r]
            mx = end_mask[row_wx[r]]
            my = end_mask[row_wy[r]]
            for a in range(N):
                if (mx >> a) & 1:
                    acc[e, a] &= my
        phi = np.full((m, N), -1, dtype=np.int64)
        for e in range(m):
            lam_x = end_mask[rev[e]]
            for a in range(N):
                if (lam_x >> a) & 1:
                    continue
                v = acc[e, a]
                if v > 0 and (v & (v - 1)) == 0:
                    b = 0
                    while (v >> b) != 1:
                        b += 1
                    phi[e, a] = b
                else:
                    phi[e, a] = -2
        return phi

    @njit(cache=True, parallel=True)
    def _nb_square_defects(phi, squares, domain):
        k = len(squares)
        N = phi.shape[1]
        bad = np.zeros(k, dtype=np.bool_)
        for s in prange(k):
            e1 = squares[s, 0]
            e2 = squares[s, 1]
            e1p = squares[s, 2]
            e2p = squares[s, 3]
            for a in range(N):
                if not (domain[s] >> a) & 1:
                    continue
                p = phi[e1, a]
                left = phi[e2, p] if p >= 0 else -1
                q = phi[e2p, a]
                right = phi[e1p, q] if q >= 0 else -1
                if left < 0 or right < 0 or left != right:
                    bad[s] = True
        return bad

    @njit(cache=True)
    def _nb_forest_transport(T, parent, child, edge, levels, phi):
        T = T.copy()
        N = T.shape[1]
        for k in range(len(edge)):
            u = parent[k]
            v = child[k]
            e = edge[k]
            for a in range(N):
                t = T[u, a]
                T[v, a] = phi[e, t] if t >= 0 else -1
        return T

    @njit(cache=True, parallel=True)
    def _nb_forest_gains(T, tail, head, edge, phi):
        k = len(edge)
        N = T.shape[1]
        out = np.full((k, N), -1, dtype=np.int64)
        for i in prange(k):
            inv = np.full(N, -1, dtype=np.int64)
            for a in range(N):
                t = T[head[i], a]
                if t >= 0:
                    inv[t] = a
            for a in range(N):
                t = T[tail[i], a]
                if t < 0:
                    continue
                mid = phi[edge[i], t]
                if mid >= 0:
                    out[i, a] = inv[mid]
        return out

    @njit(cache=True)
    def _nb_fiber_bfs(out1, out2, dst1, dst2, x1, x2):
        n1, C = out1.shape
        n2 = out2.shape[0]
        ids = np.full(n1 * n2, -1, dtype=np.int64)
        cap = 1024
        pa = np.empty(cap, dtype=np.int64)
        pb = np.empty(cap, dtype=np.int64)
        head = np.empty((cap, C), dtype=np.int64)
        pa[0] = x1
        pb[0] = x2
        ids[x1 * n2 + x2] = 0
        count = 1
        i = 0
        while i < count:
            a = pa[i]
            b = pb[i]
            for c in range(C):
                ta = dst1[out1[a, c]]
                tb = dst2[out2[b, c]]
                key = ta * n2 + tb
                if ids[key] < 0:
                    if count == cap:
                        cap *= 2
                        npa = np.empty(cap, dtype=np.int64)
                        npb = np.empty(cap, dtype=np.int64)
                        nh = np.empty((cap, C), dtype=np.int64)
                        npa[:count] = pa[:count]
                        npb[:count] = pb[:count]
                        nh[:count] = head[:count]
                        pa, pb, head = npa, npb, nh
                    ids[key] = count
                    pa[count] = ta
                    pb[count] = tb
                    count += 1
                head[i, c] = ids[key]
            i += 1
        pairs = np.empty((count, 2), dtype=np.int64)
        pairs[:, 0] = pa[:count]
        pairs[:, 1] = pb[:count]
        return pairs, head[:count].copy()

    @njit(cache=True, parallel=True)
    def _nb_flat_search(
        masks, radix, perms, phi_star, fwd, fwd_rev, fwd_hyp, fwd_B, fwd_A,
        parent, child, edge, levels, chk_tail, chk_head, chk_edge,
    ):
        M = len(masks)
        m, N = phi_star.shape
        H = len(radix)
        n_nodes = 1
        for k in range(len(child)):
            n_nodes = max(n_nodes, child[k] + 1, parent[k] + 1)
        for k in range(len(chk_tail)):
            n_nodes = max(n_nodes, chk_tail[k] + 1, chk_head[k] + 1)
        ok = np.ones(M, dtype=np.bool_)
        for i in prange(M):
            phi = phi_star.copy()
            choice = np.empty(H, dtype=np.int64)
            rem = masks[i]
            for h in range(H):
                choice[h] = rem % radix[h]
                rem //= radix[h]
            for f in range(len(fwd)):
                p = perms[choice[fwd_hyp[f]]]
                for a in range(N):
                    pos = fwd_B[f, a]
                    if pos < 0:
                        continue
                    b = fwd_A[f, p[pos]]
                    phi[fwd[f], a] = b
                    phi[fwd_rev[f], b] = a
            T = np.empty((n_nodes, N), dtype=np.int64)
            for v in range(n_nodes):
                for a in range(N):
                    T[v, a] = a
            for k in range(len(edge)):
                for a in range(N):
                    T[child[k], a] = phi[edge[k], T[parent[k], a]]
            for k in range(len(chk_edge)):
                for a in range(N):
                    if phi[chk_edge[k], T[chk_tail[k], a]] != T[chk_head[k], a]:
                        ok[i] = False
                        break
                if not ok[i]:
                    break
        return ok


# ---------------------------------------------------------------- dispatch

_NAMES = [
    "components",
    "recover_star",
    "square_defects",
    "forest_transport",
    "forest_gains",
    "fiber_bfs",
    "flat_search",
]


def flavour(name: str, backend: str):
    """The ``numba`` or ``numpy`` implementation of kernel ``name``."""
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is unavailable or disabled")
        return globals()["_nb_" + name]
    return globals()["_np_" + name]


BACKEND = "numba" if HAVE_NUMBA else "numpy"

components = flavour("components", BACKEND)
recover_star = flavour("recover_star", BACKEND)
square_defects = flavour("square_defects", BACKEND)
forest_transport = flavour("forest_transport", BACKEND)
forest_gains = flavour("forest_gains", BACKEND)
fiber_bfs = flavour("fiber_bfs", BACKEND)
flat_search = flavour("flat_search", BACKEND)
