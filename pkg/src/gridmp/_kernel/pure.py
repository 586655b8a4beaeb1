"""Pure-Python search kernel.

Two entry points shared with the compiled twin:

``max_matching_edges``
    Maximum matching of the grid minus banned edges and vertices, via
    Hopcroft-Karp over the parity bipartition (breadth-first layering, then
    depth-first augmentation).

``find_preclusion_sets``
    Enumerate k-subsets of a candidate edge list and report those whose
    removal leaves no matching of size ``target``.  The default mode starts
    from a known maximum matching and re-augments incrementally after
    removing the overlap; subsets disjoint from that matching are skipped
    outright, since the matching survives them.  The exhaustive mode ignores
    the known matching and recomputes a maximum matching from scratch for
    every subset, so the two modes check each other.
"""

from __future__ import annotations

from itertools import combinations

BACKEND = "pure"

_INF = 1 << 30


def _hopcroft_karp(nv, adj_start, adj_edge, adj_other, lefts, edge_ok, vert_ok,
                   match_v, match_e):
    """Grow ``match_v``/``match_e`` to a maximum matching; returns its size."""
    size = sum(1 for u in lefts if match_v[u] != -1)
    dist = [_INF] * nv

    def bfs():
        queue = []
        for u in lefts:
            if match_v[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        head = 0
        while head < len(queue):
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
                    queue.append(m)
        return found

    def dfs(u):
        for idx in range(adj_start[u], adj_start[u + 1]):
            e = adj_edge[idx]
            if not edge_ok[e]:
                continue
            w = adj_other[idx]
            if not vert_ok[w]:
                continue
            m = match_v[w]
            if m == -1 or (dist[m] == dist[u] + 1 and dfs(m)):
                match_v[u] = w
                match_v[w] = u
                match_e[u] = e
                match_e[w] = e
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in lefts:
            if match_v[u] == -1 and dfs(u):
                size += 1
    return size


def _unpack(arrays):
    return (arrays.n_verts, arrays.n_edges, arrays.eu.tolist(), arrays.ev.tolist(),
            arrays.even.tolist(), arrays.adj_start.tolist(),
            arrays.adj_edge.tolist(), arrays.adj_other.tolist())


def max_matching_edges(arrays, banned_edges=(), banned_verts=()):
    """Edge ids (ascending) of a maximum matching avoiding the banned items."""
    nv, m, eu, ev, even, adj_start, adj_edge, adj_other = _unpack(arrays)
    edge_ok = [True] * m
    for e in banned_edges:
        edge_ok[e] = False
    vert_ok = [True] * nv
    for v in banned_verts:
        vert_ok[v] = False
    lefts = [v for v in range(nv) if even[v] and vert_ok[v]]
    match_v = [-1] * nv
    match_e = [-1] * nv
    _hopcroft_karp(nv, adj_start, adj_edge, adj_other, lefts, edge_ok, vert_ok,
                   match_v, match_e)
    return sorted({match_e[v] for v in range(nv) if match_e[v] != -1})


def find_preclusion_sets(arrays, candidates, k, target, base_match=None,
                         banned_verts=(), exhaustive=False, find_all=True):
    """Subsets F of ``candidates`` with |F| = k leaving no matching of size ``target``.

    ``candidates`` must be ascending edge ids; subsets come out in
    lexicographic order.  In the default mode ``base_match`` must be a
    maximum matching of the graph minus ``banned_verts`` with exactly
    ``target`` edges.
    """
    nv, m, eu, ev, even, adj_start, adj_edge, adj_other = _unpack(arrays)
    cand = [int(e) for e in candidates]
    if k <= 0 or k > len(cand):
        return []
    vert_ok = [True] * nv
    for v in banned_verts:
        vert_ok[v] = False
    edge_ok = [True] * m
    hits: list[tuple[int, ...]] = []

    if exhaustive:
        lefts = [v for v in range(nv) if even[v] and vert_ok[v]]
        for combo in combinations(cand, k):
            for e in combo:
                edge_ok[e] = False
            match_v = [-1] * nv
            match_e = [-1] * nv
            size = _hopcroft_karp(nv, adj_start, adj_edge, adj_other, lefts,
                                  edge_ok, vert_ok, match_v, match_e)
            for e in combo:
                edge_ok[e] = True
            if size < target:
                hits.append(combo)
                if not find_all:
                    return hits
        return hits

    if base_match is None or len(base_match) != target:
        raise ValueError("incremental mode needs a maximum matching of exactly target size")
    in_base = [False] * m
    base_v = [-1] * nv
    base_e = [-1] * nv
    for e in base_match:
        in_base[e] = True
        u, w = eu[e], ev[e]
        base_v[u] = w
        base_v[w] = u
        base_e[u] = e
        base_e[w] = e
    base_free = [v for v in range(nv)
                 if even[v] and vert_ok[v] and base_v[v] == -1]
    allowed_failures = len(base_free)
    visited = [0] * nv
    stamp = 0
    match_v = base_v.copy()
    match_e = base_e.copy()

    def kuhn(u):
        # single augmenting-path attempt from a free even vertex
        for idx in range(adj_start[u], adj_start[u + 1]):
            e = adj_edge[idx]
            if not edge_ok[e]:
                continue
            w = adj_other[idx]
            if not vert_ok[w] or visited[w] == stamp:
                continue
            visited[w] = stamp
            pw = match_v[w]
            if pw == -1 or kuhn(pw):
                match_v[u] = w
                match_v[w] = u
                match_e[u] = e
                match_e[w] = e
                return True
        return False

    for combo in combinations(cand, k):
        removed = [e for e in combo if in_base[e]]
        if not removed:
            continue
        for e in combo:
            edge_ok[e] = False
        match_v[:] = base_v
        match_e[:] = base_e
        attempts = []
        for e in removed:
            u, w = eu[e], ev[e]
            match_v[u] = match_v[w] = -1
            match_e[u] = match_e[w] = -1
            attempts.append(u if even[u] else w)
        attempts.extend(base_free)
        need = len(removed)
        failures = 0
        successes = 0
        is_mp = False
        for u in attempts:
            stamp += 1
            if kuhn(u):
                successes += 1
                if successes == need:
                    break
            else:
                failures += 1
                if failures > allowed_failures:
                    is_mp = True
                    break
        for e in combo:
            edge_ok[e] = True
        if is_mp:
            hits.append(combo)
            if not find_all:
                return hits
    return hits
