"""Hot loops: derangement adjacency and exhaustive independent-set search.

Each kernel exists twice.  The ``*_nb`` versions are numba ``@njit``
functions over uint64 word bitsets; the ``*_py`` versions use numpy
broadcasting or Python big-int bitsets.  Which one the public names bind
to is decided once at import time:

    PGLEKR_DISABLE_NUMBA=1   -> pure numpy / Python path

Both paths are always importable so tests and the benchmark can compare
them in one process (the numba path only if numba imports).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba as nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    nb = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("PGLEKR_DISABLE_NUMBA", "0").lower() not in ("1", "true", "yes")

_njit_opts = {"nogil": True, "cache": True}


def _njit(fn):
    if not HAVE_NUMBA:
        return None
    return nb.njit(**_njit_opts)(fn)


# -- adjacency ---------------------------------------------------------------

def disagree_adjacency_py(perms: np.ndarray, chunk: int = 256) -> np.ndarray:
    """``adj[i, j]`` iff ``perms[i][x] != perms[j][x]`` for every point x.

    With right actions, ``g^-1 h`` fixes ``p = x^g`` exactly when
    ``x^g == x^h``, so this is the derangement relation.
    """
    n = perms.shape[0]
    adj = np.empty((n, n), dtype=bool)
    for s in range(0, n, chunk):
        block = perms[s:s + chunk]
        adj[s:s + chunk] = ~(block[:, None, :] == perms[None, :, :]).any(axis=2)
    return adj


def _disagree_adjacency(perms):
    n, deg = perms.shape
    adj = np.zeros((n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(i + 1, n):
            ok = True
            for x in range(deg):
                if perms[i, x] == perms[j, x]:
                    ok = False
                    break
            adj[i, j] = ok
            adj[j, i] = ok
    return adj


disagree_adjacency_nb = _njit(_disagree_adjacency)


# -- bitset helpers ------------------------------------------------------------

def pack_rows(adj: np.ndarray) -> np.ndarray:
    """Pack a boolean matrix into uint64 words, bit ``j % 64`` of word ``j // 64``."""
    rows, n = adj.shape
    words = (n + 63) // 64
    packed = np.zeros((rows, words * 8), dtype=np.uint8)
    packed[:, : (n + 7) // 8] = np.packbits(adj.astype(bool), axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64)


def rows_to_ints(adj: np.ndarray) -> list[int]:
    weights = [1 << j for j in range(adj.shape[1])]
    return [sum(w for w, b in zip(weights, row) if b) for row in adj]


# -- independent-set enumeration -------------------------------------------------
#
# Independent sets of G are cliques of the complement.  Branch and bound
# in the style of Tomita's MCQ: colour the candidate set greedily with
# classes that are cliques of G (hence independent in the complement);
# the colour count bounds any independent set inside the candidates.

def enumerate_rooted_py(adj: np.ndarray, root: int, target: int, recolor_every: int = 1):
    """All independent sets of size ``target`` containing ``root``.

    Returns ``(sets, witness)``; ``witness`` is a larger independent set
    if one exists (search stops there), else None.
    """
    n = adj.shape[0]
    gadj = rows_to_ints(adj)
    full = (1 << n) - 1
    indep = [full & ~g & ~(1 << v) for v, g in enumerate(gadj)]
    found = []

    def colour(P):
        order, cols = [], []
        U, c = P, 0
        while U:
            c += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                U &= ~low
                Q &= ~low
                Q &= gadj[v]
                order.append(v)
                cols.append(c)
        return order, cols

    def inherit(P, order, cols):
        o2, c2 = [], []
        last, c = -1, 0
        for v, cv in zip(order, cols):
            if P >> v & 1:
                if cv != last:
                    c += 1
                    last = cv
                o2.append(v)
                c2.append(c)
        return o2, c2

    def expand(R, P, order, cols, depth):
        if len(R) == target:
            if P:
                low = P & -P
                raise _Exceeded(R + [low.bit_length() - 1])
            found.append(tuple(sorted(R)))
            return
        if depth % recolor_every == 0:
            order, cols = colour(P)
        else:
            order, cols = inherit(P, order, cols)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + cols[i] < target:
                return
            v = order[i]
            expand(R + [v], P & indep[v], order[:i], cols[:i], depth + 1)
            P &= ~(1 << v)

    try:
        expand([root], indep[root], [], [], 0)
    except _Exceeded as exc:
        return sorted(found), tuple(sorted(exc.witness))
    return sorted(found), None


class _Exceeded(Exception):
    def __init__(self, witness):
        self.witness = witness


def _lowbit(x):
    low = x & (~x + np.uint64(1))
    return int(np.log2(np.float64(low)))


def _enumerate_rooted(gadj, root, target, recolor_every, capacity):
    n = gadj.shape[0]
    W = gadj.shape[1]
    one = np.uint64(1)
    indep = np.empty((n, W), dtype=np.uint64)
    for v in range(n):
        for w in range(W):
            indep[v, w] = ~gadj[v, w]
        indep[v, v // 64] &= ~(one << np.uint64(v % 64))
    # clear padding bits
    if n % 64:
        pad = (one << np.uint64(n % 64)) - one
        for v in range(n):
            indep[v, W - 1] &= pad

    maxd = target + 1
    P = np.zeros((maxd, W), dtype=np.uint64)
    order = np.zeros((maxd, n), dtype=np.int64)
    cols = np.zeros((maxd, n), dtype=np.int64)
    count = np.zeros(maxd, dtype=np.int64)
    pos = np.zeros(maxd, dtype=np.int64)
    R = np.zeros(maxd + 1, dtype=np.int64)
    U = np.zeros(W, dtype=np.uint64)
    Q = np.zeros(W, dtype=np.uint64)
    results = np.zeros((capacity, target), dtype=np.int64)
    nres = 0
    witness = np.full(target + 1, -1, dtype=np.int64)

    R[0] = root
    for w in range(W):
        P[0, w] = indep[root, w]
    d = 0
    size = 1
    fresh = True
    while d >= 0:
        if fresh:
            fresh = False
            if size == target:
                nonempty = False
                for w in range(W):
                    if P[d, w] != 0:
                        nonempty = True
                if nonempty:
                    for i in range(size):
                        witness[i] = R[i]
                    for w in range(W):
                        if P[d, w] != 0:
                            witness[size] = w * 64 + _lowbit(P[d, w])
                            break
                    return results, nres, witness
                if nres < capacity:
                    for i in range(size):
                        results[nres, i] = R[i]
                nres += 1
                d -= 1
                size -= 1
                continue
            m = 0
            if d % recolor_every == 0:
                for w in range(W):
                    U[w] = P[d, w]
                c = 0
                while True:
                    empty = True
                    for w in range(W):
                        if U[w] != 0:
                            empty = False
                    if empty:
                        break
                    c += 1
                    for w in range(W):
                        Q[w] = U[w]
                    w0 = 0
                    while w0 < W:
                        if Q[w0] == 0:
                            w0 += 1
                            continue
                        v = w0 * 64 + _lowbit(Q[w0])
                        bit = one << np.uint64(v % 64)
                        U[w0] &= ~bit
                        Q[w0] &= ~bit
                        for w in range(W):
                            Q[w] &= gadj[v, w]
                        order[d, m] = v
                        cols[d, m] = c
                        m += 1
            else:
                last = -1
                c = 0
                for i in range(count[d - 1] if d > 0 else 0):
                    if i >= pos[d - 1]:
                        break
                    v = order[d - 1, i]
                    if (P[d, v // 64] >> np.uint64(v % 64)) & one:
                        if cols[d - 1, i] != last:
                            c += 1
                            last = cols[d - 1, i]
                        order[d, m] = v
                        cols[d, m] = c
                        m += 1
            count[d] = m
            pos[d] = m
        # next branch at depth d
        pos[d] -= 1
        i = pos[d]
        if i < 0 or size + cols[d, i] < target:
            d -= 1
            size -= 1
            continue
        v = order[d, i]
        R[size] = v
        for w in range(W):
            P[d + 1, w] = P[d, w] & indep[v, w]
        P[d, v // 64] &= ~(one << np.uint64(v % 64))
        d += 1
        size += 1
        fresh = True
    return results, nres, witness


if HAVE_NUMBA:
    _lowbit = nb.njit(**_njit_opts)(_lowbit)
    _enumerate_rooted_nb = nb.njit(**_njit_opts)(_enumerate_rooted)
else:  # pragma: no cover
    _enumerate_rooted_nb = None


def enumerate_rooted_nb(adj: np.ndarray, root: int, target: int, recolor_every: int = 1, capacity: int = 4096):
    gadj = pack_rows(adj)
    while True:
        results, nres, witness = _enumerate_rooted_nb(gadj, root, target, recolor_every, capacity)
        if witness[0] >= 0:
            return None, tuple(sorted(int(x) for x in witness))
        if nres <= capacity:
            break
        capacity = int(nres)
    sets = sorted(tuple(sorted(int(x) for x in row)) for row in results[:nres])
    return sets, None


def enumerate_rooted(adj, root, target, recolor_every=1):
    if USE_NUMBA:
        sets, witness = enumerate_rooted_nb(adj, root, target, recolor_every)
        return (sets or []), witness
    return enumerate_rooted_py(adj, root, target, recolor_every)


def disagree_adjacency(perms: np.ndarray) -> np.ndarray:
    if USE_NUMBA:
        return disagree_adjacency_nb(np.ascontiguousarray(perms, dtype=np.int64))
    return disagree_adjacency_py(perms)
