# cython: language_level=3, boundscheck=False, wraparound=False
# cython: initializedcheck=False, cdivision=True
"""Compiled search kernel; mirrors the pure backend's two entry points.

Same contract as the pure module: grid arrays in, edge-id lists and fault
subsets out, identical subset order and identical early-exit rules.  The
matching state lives in flat C arrays and the augmenting searches recurse
on raw pointers.
"""

import numpy as np

BACKEND = "accel"

cdef int _INF = 1 << 30


cdef bint _dfs(int u, int* adj_start, int* adj_edge, int* adj_other,
               unsigned char* edge_ok, unsigned char* vert_ok,
               int* dist, int* match_v, int* match_e) noexcept nogil:
    cdef int idx, e, w, m
    for idx in range(adj_start[u], adj_start[u + 1]):
        e = adj_edge[idx]
        if not edge_ok[e]:
            continue
        w = adj_other[idx]
        if not vert_ok[w]:
            continue
        m = match_v[w]
        if m == -1 or (dist[m] == dist[u] + 1 and
                       _dfs(m, adj_start, adj_edge, adj_other, edge_ok,
                            vert_ok, dist, match_v, match_e)):
            match_v[u] = w
            match_v[w] = u
            match_e[u] = e
            match_e[w] = e
            return True
    dist[u] = _INF
    return False


cdef int _hopcroft_karp(int nv, int* adj_start, int* adj_edge, int* adj_other,
                        int* lefts, int n_lefts,
                        unsigned char* edge_ok, unsigned char* vert_ok,
                        int* match_v, int* match_e,
                        int* dist, int* queue) noexcept nogil:
    cdef int size = 0
    cdef int i, u, w, m, idx, e, head, tail
    cdef bint found
    for i in range(n_lefts):
        if match_v[lefts[i]] != -1:
            size += 1
    while True:
        head = 0
        tail = 0
        found = False
        for i in range(n_lefts):
            u = lefts[i]
            if match_v[u] == -1:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = _INF
        while head < tail:
            u = queue[head]
            head += 1
            for idx in range(adj_start[u], adj_start[u + 1]):
                if not edge_ok[adj_edge[idx]]:
                    continue
                w = adj_other[idx]
                if not vert_ok[w]:
                    continue
                m = match_v[w]
                if m == -1:
                    found = True
                elif dist[m] == _INF:
                    dist[m] = dist[u] + 1
                    queue[tail] = m
                    tail += 1
        if not found:
            return size
        for i in range(n_lefts):
            u = lefts[i]
            if match_v[u] == -1 and _dfs(u, adj_start, adj_edge, adj_other,
                                         edge_ok, vert_ok, dist,
                                         match_v, match_e):
                size += 1


cdef bint _kuhn(int u, int* adj_start, int* adj_edge, int* adj_other,
                unsigned char* edge_ok, unsigned char* vert_ok,
                long long* visited, long long stamp,
                int* match_v, int* match_e) noexcept nogil:
    cdef int idx, e, w, pw
    for idx in range(adj_start[u], adj_start[u + 1]):
        e = adj_edge[idx]
        if not edge_ok[e]:
            continue
        w = adj_other[idx]
        if not vert_ok[w] or visited[w] == stamp:
            continue
        visited[w] = stamp
        pw = match_v[w]
        if pw == -1 or _kuhn(pw, adj_start, adj_edge, adj_other, edge_ok,
                             vert_ok, visited, stamp, match_v, match_e):
            match_v[u] = w
            match_v[w] = u
            match_e[u] = e
            match_e[w] = e
            return True
    return False


cdef tuple _combo_tuple(int[::1] cand, int[::1] idx, int k):
    cdef list out = []
    cdef int i
    for i in range(k):
        out.append(cand[idx[i]])
    return tuple(out)


cdef inline bint _next_combo(int[::1] idx, int k, int n) noexcept nogil:
    cdef int i = k - 1
    while i >= 0 and idx[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    i += 1
    while i < k:
        idx[i] = idx[i - 1] + 1
        i += 1
    return True


def max_matching_edges(arrays, banned_edges=(), banned_verts=()):
    """Edge ids (ascending) of a maximum matching avoiding the banned items."""
    cdef int nv = arrays.n_verts
    cdef int m = arrays.n_edges
    cdef int[::1] adj_start = arrays.adj_start
    cdef int[::1] adj_edge = arrays.adj_edge
    cdef int[::1] adj_other = arrays.adj_other
    cdef unsigned char[::1] even = arrays.even
    cdef unsigned char[::1] edge_ok = np.ones(m, dtype=np.uint8)
    cdef unsigned char[::1] vert_ok = np.ones(nv, dtype=np.uint8)
    cdef int e, v
    for e in banned_edges:
        edge_ok[e] = 0
    for v in banned_verts:
        vert_ok[v] = 0
    cdef int[::1] lefts = np.empty(nv, dtype=np.int32)
    cdef int n_lefts = 0
    for v in range(nv):
        if even[v] and vert_ok[v]:
            lefts[n_lefts] = v
            n_lefts += 1
    cdef int[::1] match_v = np.full(nv, -1, dtype=np.int32)
    cdef int[::1] match_e = np.full(nv, -1, dtype=np.int32)
    cdef int[::1] dist = np.full(nv, _INF, dtype=np.int32)
    cdef int[::1] queue = np.empty(nv, dtype=np.int32)
    _hopcroft_karp(nv, &adj_start[0], &adj_edge[0], &adj_other[0],
                   &lefts[0], n_lefts, &edge_ok[0], &vert_ok[0],
                   &match_v[0], &match_e[0], &dist[0], &queue[0])
    return sorted({match_e[v] for v in range(nv) if match_e[v] != -1})


def find_preclusion_sets(arrays, candidates, k_in, target_in, base_match=None,
                         banned_verts=(), exhaustive=False, find_all=True):
    """Subsets F of ``candidates`` with |F| = k leaving no matching of size ``target``.

    ``candidates`` must be ascending edge ids; subsets come out in
    lexicographic order.  In the default mode ``base_match`` must be a
    maximum matching of the graph minus ``banned_verts`` with exactly
    ``target`` edges.
    """
    cdef int nv = arrays.n_verts
    cdef int m = arrays.n_edges
    cdef int k = k_in
    cdef int target = target_in
    cdef int[::1] adj_start = arrays.adj_start
    cdef int[::1] adj_edge = arrays.adj_edge
    cdef int[::1] adj_other = arrays.adj_other
    cdef int[::1] eu = arrays.eu
    cdef int[::1] ev = arrays.ev
    cdef unsigned char[::1] even = arrays.even
    cdef int[::1] cand = np.asarray(list(candidates), dtype=np.int32)
    cdef int n_cand = cand.shape[0]
    if k <= 0 or k > n_cand:
        return []
    cdef unsigned char[::1] vert_ok = np.ones(nv, dtype=np.uint8)
    cdef unsigned char[::1] edge_ok = np.ones(m, dtype=np.uint8)
    cdef int v, e, i, j
    for v in banned_verts:
        vert_ok[v] = 0
    hits = []

    cdef int[::1] idx = np.arange(k, dtype=np.int32)
    cdef int[::1] match_v = np.empty(nv, dtype=np.int32)
    cdef int[::1] match_e = np.empty(nv, dtype=np.int32)
    cdef int[::1] dist = np.full(nv, _INF, dtype=np.int32)
    cdef int[::1] queue = np.empty(nv, dtype=np.int32)
    cdef int[::1] lefts = np.empty(nv, dtype=np.int32)
    cdef int n_lefts, size, u, w

    if exhaustive:
        n_lefts = 0
        for v in range(nv):
            if even[v] and vert_ok[v]:
                lefts[n_lefts] = v
                n_lefts += 1
        while True:
            for i in range(k):
                edge_ok[cand[idx[i]]] = 0
            for v in range(nv):
                match_v[v] = -1
                match_e[v] = -1
            size = _hopcroft_karp(nv, &adj_start[0], &adj_edge[0],
                                  &adj_other[0], &lefts[0], n_lefts,
                                  &edge_ok[0], &vert_ok[0], &match_v[0],
                                  &match_e[0], &dist[0], &queue[0])
            for i in range(k):
                edge_ok[cand[idx[i]]] = 1
            if size < target:
                hits.append(_combo_tuple(cand, idx, k))
                if not find_all:
                    return hits
            if not _next_combo(idx, k, n_cand):
                return hits

    if base_match is None or len(base_match) != target:
        raise ValueError("incremental mode needs a maximum matching of exactly target size")
    cdef unsigned char[::1] in_base = np.zeros(m, dtype=np.uint8)
    cdef int[::1] base_v = np.full(nv, -1, dtype=np.int32)
    cdef int[::1] base_e = np.full(nv, -1, dtype=np.int32)
    for e in base_match:
        in_base[e] = 1
        u = eu[e]
        w = ev[e]
        base_v[u] = w
        base_v[w] = u
        base_e[u] = e
        base_e[w] = e
    cdef int[::1] base_free = np.empty(nv, dtype=np.int32)
    cdef int n_base_free = 0
    for v in range(nv):
        if even[v] and vert_ok[v] and base_v[v] == -1:
            base_free[n_base_free] = v
            n_base_free += 1
    cdef int allowed_failures = n_base_free
    cdef long long[::1] visited = np.zeros(nv, dtype=np.int64)
    cdef long long stamp = 0
    cdef int[::1] removed = np.empty(k, dtype=np.int32)
    cdef int[::1] attempts = np.empty(k + n_base_free, dtype=np.int32)
    cdef int n_removed, n_attempts, need, failures, successes
    cdef bint is_mp

    while True:
        n_removed = 0
        for i in range(k):
            e = cand[idx[i]]
            if in_base[e]:
                removed[n_removed] = e
                n_removed += 1
        if n_removed:
            for i in range(k):
                edge_ok[cand[idx[i]]] = 0
            match_v[:] = base_v
            match_e[:] = base_e
            n_attempts = 0
            for i in range(n_removed):
                e = removed[i]
                u = eu[e]
                w = ev[e]
                match_v[u] = -1
                match_v[w] = -1
                match_e[u] = -1
                match_e[w] = -1
                attempts[n_attempts] = u if even[u] else w
                n_attempts += 1
            for i in range(n_base_free):
                attempts[n_attempts] = base_free[i]
                n_attempts += 1
            need = n_removed
            failures = 0
            successes = 0
            is_mp = False
            for i in range(n_attempts):
                stamp += 1
                if _kuhn(attempts[i], &adj_start[0], &adj_edge[0],
                         &adj_other[0], &edge_ok[0], &vert_ok[0],
                         &visited[0], stamp, &match_v[0], &match_e[0]):
                    successes += 1
                    if successes == need:
                        break
                else:
                    failures += 1
                    if failures > allowed_failures:
                        is_mp = True
                        break
            for i in range(k):
                edge_ok[cand[idx[i]]] = 1
            if is_mp:
                hits.append(_combo_tuple(cand, idx, k))
                if not find_all:
                    return hits
        if not _next_combo(idx, k, n_cand):
            return hits
