"""Compiled inner loops: Edmonds' blossom search and the parity gadget.

Everything here works on flat int64 arrays so numba can compile it.  The
Python-facing wrappers live in :mod:`graphfactors.matching` and
:mod:`graphfactors.factor`.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def csr_from_edges(nn, ea, eb):
    """Adjacency in CSR form; each node lists neighbours in edge order."""
    counts = np.zeros(nn + 1, dtype=np.int64)
    for k in range(ea.size):
        counts[ea[k] + 1] += 1
        counts[eb[k] + 1] += 1
    for v in range(nn):
        counts[v + 1] += counts[v]
    indptr = counts.copy()
    fill = counts[:nn].copy()
    indices = np.empty(2 * ea.size, dtype=np.int64)
    for k in range(ea.size):
        a = ea[k]
        b = eb[k]
        indices[fill[a]] = b
        fill[a] += 1
        indices[fill[b]] = a
        fill[b] += 1
    return indptr, indices


@njit(cache=True)
def _lca(a, b, mate, parent, base, mark):
    mark[:] = False
    while True:
        a = base[a]
        mark[a] = True
        if mate[a] == -1:
            break
        a = parent[mate[a]]
    while True:
        b = base[b]
        if mark[b]:
            return b
        b = parent[mate[b]]


@njit(cache=True)
def _mark_path(v, b, child, mate, parent, base, blossom):
    while base[v] != b:
        blossom[base[v]] = True
        blossom[base[mate[v]]] = True
        parent[v] = child
        child = mate[v]
        v = parent[mate[v]]


@njit(cache=True)
def _find_path(root, nn, indptr, indices, mate, parent, base, used, blossom, mark, queue):
    for i in range(nn):
        used[i] = False
        parent[i] = -1
        base[i] = i
    used[root] = True
    head = 0
    tail = 1
    queue[0] = root
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(indptr[v], indptr[v + 1]):
            to = indices[k]
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = _lca(v, to, mate, parent, base, mark)
                blossom[:] = False
                _mark_path(v, cur, to, mate, parent, base, blossom)
                _mark_path(to, cur, v, mate, parent, base, blossom)
                for i in range(nn):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue[tail] = i
                            tail += 1
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    return to
                nxt = mate[to]
                used[nxt] = True
                queue[tail] = nxt
                tail += 1
    return -1


@njit(cache=True)
def blossom_matching(nn, indptr, indices, need_perfect):
    """Maximum-cardinality matching of a simple graph.

    Returns ``(mate, ok)``; ``mate[v] == -1`` marks an exposed vertex.  With
    ``need_perfect`` the search stops at the first root that has no
    augmenting path, since such a root stays exposed in every later
    matching; ``ok`` is then False.
    """
    mate = np.full(nn, -1, dtype=np.int64)
    if need_perfect and nn % 2 == 1:
        return mate, False
    for v in range(nn):
        if mate[v] == -1:
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if w != v and mate[w] == -1:
                    mate[v] = w
                    mate[w] = v
                    break
    parent = np.empty(nn, dtype=np.int64)
    base = np.empty(nn, dtype=np.int64)
    used = np.empty(nn, dtype=np.bool_)
    blossom = np.empty(nn, dtype=np.bool_)
    mark = np.empty(nn, dtype=np.bool_)
    queue = np.empty(nn, dtype=np.int64)
    for root in range(nn):
        if mate[root] != -1:
            continue
        end = _find_path(root, nn, indptr, indices, mate, parent, base, used, blossom, mark, queue)
        if end == -1:
            if need_perfect:
                return mate, False
            continue
        v = end
        while v != -1:
            pv = parent[v]
            ppv = mate[pv]
            mate[v] = pv
            mate[pv] = v
            v = ppv
    return mate, True


@njit(cache=True)
def gadget_arrays(n, eu, ev, lo, hi):
    """Lay out the parity-interval gadget.

    Node order: for each vertex, its slot nodes (one per edge end) followed
    by its ``deg - lo`` core nodes.  Edge order: slot-slot edges by edge
    instance, then every slot-core pair per vertex, then the
    ``(hi - lo) // 2`` disjoint core-core edges per vertex.
    """
    m = eu.size
    deg = np.zeros(n, dtype=np.int64)
    for i in range(m):
        deg[eu[i]] += 1
        deg[ev[i]] += 1
    slot_start = np.empty(n, dtype=np.int64)
    core_start = np.empty(n, dtype=np.int64)
    pos = 0
    n_edges = m
    for v in range(n):
        slot_start[v] = pos
        pos += deg[v]
        core_start[v] = pos
        pos += deg[v] - lo[v]
        n_edges += deg[v] * (deg[v] - lo[v]) + (hi[v] - lo[v]) // 2
    nn = pos
    ea = np.empty(n_edges, dtype=np.int64)
    eb = np.empty(n_edges, dtype=np.int64)
    slot_u = np.empty(m, dtype=np.int64)
    slot_v = np.empty(m, dtype=np.int64)
    nxt = slot_start.copy()
    k = 0
    for i in range(m):
        a = nxt[eu[i]]
        nxt[eu[i]] += 1
        b = nxt[ev[i]]
        nxt[ev[i]] += 1
        slot_u[i] = a
        slot_v[i] = b
        ea[k] = a
        eb[k] = b
        k += 1
    for v in range(n):
        for s in range(slot_start[v], slot_start[v] + deg[v]):
            for c in range(core_start[v], core_start[v] + deg[v] - lo[v]):
                ea[k] = s
                eb[k] = c
                k += 1
    for v in range(n):
        for j in range((hi[v] - lo[v]) // 2):
            ea[k] = core_start[v] + 2 * j
            eb[k] = core_start[v] + 2 * j + 1
            k += 1
    return nn, ea, eb, slot_u, slot_v, slot_start, core_start


@njit(cache=True)
def solve_parity(n, eu, ev, lo, hi):
    """Gadget plus perfect matching in one call.

    Returns ``(found, chosen)`` where ``chosen[i]`` says whether edge
    instance ``i`` belongs to the decoded factor.
    """
    chosen = np.zeros(eu.size, dtype=np.bool_)
    parity = 0
    for v in range(n):
        parity += lo[v]
    if parity % 2 == 1:
        return False, chosen
    nn, ea, eb, slot_u, slot_v, _, _ = gadget_arrays(n, eu, ev, lo, hi)
    indptr, indices = csr_from_edges(nn, ea, eb)
    mate, ok = blossom_matching(nn, indptr, indices, True)
    if not ok:
        return False, chosen
    for i in range(eu.size):
        chosen[i] = mate[slot_u[i]] == slot_v[i]
    return True, chosen
