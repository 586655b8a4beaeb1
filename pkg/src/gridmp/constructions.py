"""Explicit matchings of grid graphs, built not searched.

All constructions recurse over axis-aligned boxes (per-position coordinate
ranges) of one ambient grid, so intermediate steps emit ambient edges
directly.  Within a box, parity is measured relative to the box's low corner;
boxes entered by the recursions always keep that relative parity aligned with
what the construction needs.

The odd-order constructions produce almost-perfect matchings uncovering a
prescribed vertex: one for vertices with all coordinates even (layer pairing
around the vertex, recursing into its layer), and one for the general
even-parity-sum vertex (peeling two odd coordinates at a time and stitching
neighbor layers through companion vertices).
"""

from __future__ import annotations

import itertools
from typing import Iterable

from .errors import GridmpError, ValidationError
from .grid import Coords, Edge, GridSpec
from .matching import FaultSet, Matching, as_edge_ids

Box = tuple[tuple[int, int], ...]


def _full_box(grid: GridSpec) -> Box:
    return tuple((0, k - 1) for k in grid.dims)


def _box_order(box: Box) -> int:
    out = 1
    for lo, hi in box:
        out *= hi - lo + 1
    return out


def _with_range(box: Box, d: int, lo: int, hi: int) -> Box:
    return box[:d] + ((lo, hi),) + box[d + 1:]


def _replace(v: Coords, d: int, value: int) -> Coords:
    return v[:d] + (value,) + v[d + 1:]


def _cross_pairs(box: Box, d: int, j: int) -> list[Edge]:
    """The matching of position-d edges joining layer j to layer j+1 in the box."""
    ranges = [range(lo, hi + 1) for lo, hi in box]
    ranges[d] = range(j, j + 1)
    return [Edge(v, _replace(v, d, j + 1)) for v in itertools.product(*ranges)]


def _paired_layers(box: Box, d: int, start: int, stop: int) -> list[Edge]:
    """Pair consecutive layers (start,start+1), (start+2,start+3), ... up to stop."""
    out = []
    for j in range(start, stop, 2):
        out.extend(_cross_pairs(box, d, j))
    return out


def _apm_all_even_box(box: Box, u: Coords) -> list[Edge]:
    # u must be even relative to the box's low corner in every position
    for d, (lo, hi) in enumerate(box):
        if hi > lo:
            return (
                _paired_layers(box, d, lo, u[d] - 1)
                + _paired_layers(box, d, u[d] + 1, hi)
                + _apm_all_even_box(_with_range(box, d, u[d], u[d]), u)
            )
    return []  # the box is the single vertex u


def _apm_even_sum_box(box: Box, u: Coords) -> list[Edge]:
    odd = [d for d, (lo, hi) in enumerate(box) if (u[d] - lo) % 2]
    if not odd:
        return _apm_all_even_box(box, u)
    p, q = odd[0], odd[1]
    up, uq = u[p], u[q]
    outer = _paired_layers(box, p, box[p][0], up - 2) \
        + _paired_layers(box, p, up + 2, box[p][1])
    mid = _with_range(box, p, up, up)
    inner = _paired_layers(mid, q, mid[q][0], uq - 2) \
        + _paired_layers(mid, q, uq + 2, mid[q][1])
    core = _with_range(mid, q, uq, uq)

    # companion vertices: free coordinates sit at the box's low corner
    base = tuple(u[d] if d in (p, q) else box[d][0] for d in range(len(u)))
    v = _replace(base, q, uq - 1)
    w = _replace(base, q, uq + 1)
    v_minus = _replace(v, p, up - 1)
    w_plus = _replace(w, p, up + 1)

    return (
        outer + inner
        + _apm_all_even_box(_with_range(box, p, up - 1, up - 1), v_minus)
        + _apm_all_even_box(_with_range(mid, q, uq - 1, uq - 1), v)
        + _apm_even_sum_box(core, u)
        + _apm_all_even_box(_with_range(mid, q, uq + 1, uq + 1), w)
        + _apm_all_even_box(_with_range(box, p, up + 1, up + 1), w_plus)
        + [Edge.between(v_minus, v), Edge.between(w, w_plus)]
    )


def _pm_minus_vertex_box(grid: GridSpec, box: Box, u: Coords,
                         faults: list[Edge]) -> list[Edge]:
    if not faults:
        return _apm_all_even_box(box, u)
    d = min(e.position for e in faults)
    lo_d, hi_d = box[d]

    # lexicographically first all-even transversal whose rungs dodge the faults
    blocked = {e.lo for e in faults if e.position == d}
    free = [s for s in range(len(box)) if s != d]
    for choice in itertools.product(*(range(box[s][0], box[s][1] + 1, 2) for s in free)):
        cand = list(u)
        for s, c in zip(free, choice):
            cand[s] = c
        x = tuple(cand)
        if all(_replace(x, d, j) not in blocked for j in range(lo_d, hi_d)):
            break
    else:
        raise GridmpError("no all-even transversal path avoids the faults")

    path_lo = _replace(x, d, lo_d)
    out = _paired_layers_on_path(path_lo, d, lo_d, u[d] - 1) \
        + _paired_layers_on_path(path_lo, d, u[d] + 1, hi_d)
    for j in range(lo_d, hi_d + 1):
        layer = _with_range(box, d, j, j)
        in_layer = [e for e in faults if e.position != d and e.lo[d] == j]
        hole = u if j == u[d] else _replace(x, d, j)
        out.extend(_pm_minus_vertex_box(grid, layer, hole, in_layer))
    return out


def _paired_layers_on_path(v_lo: Coords, d: int, start: int, stop: int) -> list[Edge]:
    out = []
    for j in range(start, stop, 2):
        a = _replace(v_lo, d, j)
        out.append(Edge(a, _replace(a, d, j + 1)))
    return out


# -- public constructions --------------------------------------------------

def canonical_pm(grid: GridSpec, d: int) -> Matching:
    """The perfect matching pairing layers (0,1), (2,3), ... at position ``d``."""
    grid._check_position(d)
    if grid.dims[d] % 2:
        raise ValidationError(f"canonical pairing needs an even extent at position {d}, "
                              f"got {grid.dims[d]}")
    edges = _paired_layers(_full_box(grid), d, 0, grid.dims[d] - 1)
    m = Matching.of(grid, edges)
    assert m.is_perfect
    return m


def _require_odd_order(grid: GridSpec):
    if grid.order % 2 == 0:
        raise ValidationError(f"grid {grid} has even order; no almost-perfect matching exists")


def apm_all_even(grid: GridSpec, u: Coords) -> Matching:
    """Almost-perfect matching uncovering an all-even-coordinate vertex."""
    _require_odd_order(grid)
    if not grid.is_all_even(u):
        raise ValidationError(f"vertex {u} must have every coordinate even")
    m = Matching.of(grid, _apm_all_even_box(_full_box(grid), u))
    assert m.is_almost_perfect and not m.covers(u)
    return m


def apm_even_sum(grid: GridSpec, u: Coords) -> Matching:
    """Almost-perfect matching uncovering any vertex of even coordinate sum."""
    _require_odd_order(grid)
    grid.check_vertex(u)
    if sum(u) % 2:
        raise ValidationError(f"vertex {u} has odd coordinate sum; it cannot be uncovered")
    m = Matching.of(grid, _apm_even_sum_box(_full_box(grid), u))
    assert m.is_almost_perfect and not m.covers(u)
    return m


def apm_avoiding_edge(grid: GridSpec, f: Edge) -> Matching:
    """Almost-perfect matching not containing ``f``.

    Splits between f's layers; the even-layer-count side gets the canonical
    pairing along f's position, the other side an almost-perfect matching
    uncovering its low corner.  ``f`` runs between the sides, so it never
    appears.
    """
    _require_odd_order(grid)
    grid.edge_id(f)
    d, t = f.position, f.lo[f.position]
    box = _full_box(grid)
    side_a = _with_range(box, d, 0, t)
    side_b = _with_range(box, d, t + 1, grid.dims[d] - 1)
    edges: list[Edge] = []
    for side in (side_a, side_b):
        lo, hi = side[d]
        if (hi - lo) % 2:  # even layer count: perfect by pairing along d
            edges.extend(_paired_layers(side, d, lo, hi))
        else:
            corner = tuple(r[0] for r in side)
            edges.extend(_apm_all_even_box(side, corner))
    m = Matching.of(grid, edges)
    assert m.is_almost_perfect and f not in m
    return m


def pm_of_vertex_deleted(grid: GridSpec, u: Coords, faults) -> Matching:
    """Perfect matching of the grid minus vertex ``u`` avoiding the faults.

    ``u`` must have all coordinates even and the fault count must stay below
    the dimension count; a fault-free transversal path then always exists,
    picked lexicographically.
    """
    _require_odd_order(grid)
    if not grid.is_all_even(u):
        raise ValidationError(f"vertex {u} must have every coordinate even")
    ids = as_edge_ids(grid, faults)
    star = grid.star(u)
    if ids & star:
        raise ValidationError("faults must avoid the deleted vertex's edges")
    if len(ids) > grid.n - 1:
        raise ValidationError(f"at most {grid.n - 1} faults are supported, got {len(ids)}")
    fault_edges = [grid.edge_at(i) for i in sorted(ids)]
    m = Matching.of(grid, _pm_minus_vertex_box(grid, _full_box(grid), u, fault_edges))
    assert not m.covers(u) and len(m.ids) * 2 == grid.order - 1
    assert not (m.ids & ids)
    return m
