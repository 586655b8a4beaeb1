"""Matchings, fault sets, alternating cycles, and the matching oracle.

The oracle is a maximum-matching search over the parity bipartition (grids
are bipartite under the coordinate-sum 2-coloring), run by the selected
kernel backend.  Vertex deletion is modeled as deleting the incident edges
and dropping the vertex from the coverage target, so one representation
serves both edge- and vertex-deletion queries.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from . import _kernel
from .errors import ValidationError
from .grid import Coords, Edge, GridSpec, format_edge, format_vertex


def as_edge_ids(grid: GridSpec, edges) -> frozenset[int]:
    """Normalize edge ids, Edge objects, or an edge-set type to a frozen id set."""
    if isinstance(edges, (Matching, FaultSet)):
        if edges.grid is not grid and edges.grid != grid:
            raise ValidationError("edge set belongs to a different grid")
        return edges.ids
    out = set()
    for e in edges:
        if isinstance(e, Edge):
            out.add(grid.edge_id(e))
        elif isinstance(e, int) and not isinstance(e, bool):
            if not 0 <= e < len(grid.edges):
                raise ValidationError(f"edge id {e} out of range")
            out.add(e)
        else:
            raise ValidationError(f"cannot interpret {e!r} as an edge")
    return frozenset(out)


class _EdgeSet:
    """Shared behavior of Matching and FaultSet: a frozen id set on one grid."""

    grid: GridSpec
    ids: frozenset[int]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self.grid.edges[i] for i in sorted(self.ids))

    def __contains__(self, e) -> bool:
        if isinstance(e, Edge):
            return self.grid.edge_id(e) in self.ids
        return e in self.ids

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(sorted(self.ids))

    def encode(self) -> list[str]:
        """Canonical edge strings in canonical order (used in reports)."""
        return [format_edge(e) for e in self.edges]


@dataclass(frozen=True)
class FaultSet(_EdgeSet):
    """A set of edges marked faulty; any subset of the grid's edges."""

    grid: GridSpec
    ids: frozenset[int]

    @classmethod
    def of(cls, grid: GridSpec, edges) -> "FaultSet":
        return cls(grid, as_edge_ids(grid, edges))


@dataclass(frozen=True)
class Matching(_EdgeSet):
    """A set of pairwise endpoint-disjoint edges."""

    grid: GridSpec
    ids: frozenset[int]

    def __post_init__(self):
        seen: set[Coords] = set()
        for i in sorted(self.ids):
            e = self.grid.edge_at(i)
            if e.lo in seen or e.hi in seen:
                raise ValidationError(f"not a matching: edges share the endpoint of {e}")
            seen.add(e.lo)
            seen.add(e.hi)

    @classmethod
    def of(cls, grid: GridSpec, edges) -> "Matching":
        return cls(grid, as_edge_ids(grid, edges))

    @cached_property
    def covered(self) -> frozenset[Coords]:
        out = set()
        for e in self.edges:
            out.add(e.lo)
            out.add(e.hi)
        return frozenset(out)

    def covers(self, v: Coords) -> bool:
        return v in self.covered

    def uncovered(self) -> frozenset[Coords]:
        return frozenset(self.grid.vertices) - self.covered

    @property
    def is_perfect(self) -> bool:
        return 2 * len(self.ids) == self.grid.order

    @property
    def is_almost_perfect(self) -> bool:
        return 2 * len(self.ids) == self.grid.order - 1

    @cached_property
    def partners(self) -> dict[Coords, Coords]:
        out = {}
        for e in self.edges:
            out[e.lo] = e.hi
            out[e.hi] = e.lo
        return out

    def partner(self, v: Coords) -> Coords | None:
        return self.partners.get(v)


@dataclass(frozen=True)
class Cycle:
    """A simple cycle given by its cyclic vertex sequence.

    ``edge_ids`` walks the cycle in the same order, closing back to the first
    vertex.  Grid cycles always have even length at least 4.
    """

    grid: GridSpec
    vertices: tuple[Coords, ...]
    edge_ids: tuple[int, ...]

    @classmethod
    def from_vertices(cls, grid: GridSpec, vertices: Sequence[Coords]) -> "Cycle":
        vs = tuple(vertices)
        if len(vs) < 4:
            raise ValidationError("a grid cycle has at least 4 vertices")
        if len(set(vs)) != len(vs):
            raise ValidationError("cycle vertices must be distinct")
        ids = []
        for a, b in zip(vs, vs[1:] + vs[:1]):
            ids.append(grid.edge_id(grid.edge_between(a, b)))
        return cls(grid, vs, tuple(ids))

    @cached_property
    def id_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def alternates_with(self, matching: Matching) -> bool:
        """True when the cycle edges strictly alternate in and out of the matching."""
        flags = [i in matching.ids for i in self.edge_ids]
        return all(flags[i] != flags[(i + 1) % len(flags)] for i in range(len(flags)))

    def encode(self) -> list[str]:
        return [format_vertex(v) for v in self.vertices]


class FaultEdgeKind(Enum):
    NICE_FAULT = "nice-fault"
    BAD_FAULT = "bad-fault"


@dataclass(frozen=True)
class FaultEdgeVerdict:
    """Outcome of the bounded cycle search for one fault edge of the matching.

    ``length_limit`` records the bound the verdict is valid for; a bad-fault
    verdict only says no qualifying cycle of at most that length exists.
    """

    kind: FaultEdgeKind
    witness: Cycle | None
    length_limit: int


# -- oracle ----------------------------------------------------------------

def is_matching(grid: GridSpec, edges) -> bool:
    ids = as_edge_ids(grid, edges)
    seen: set[Coords] = set()
    for i in ids:
        e = grid.edge_at(i)
        if e.lo in seen or e.hi in seen:
            return False
        seen.add(e.lo)
        seen.add(e.hi)
    return True


def max_matching(grid: GridSpec, deleted=(), deleted_vertices: Iterable[Coords] = ()) -> Matching:
    """A maximum matching of the grid minus the deleted edges and vertices."""
    banned_edges = sorted(as_edge_ids(grid, deleted))
    banned_verts = sorted(grid.index_of(v) for v in deleted_vertices)
    ids = _kernel.max_matching_edges(grid.arrays, banned_edges, banned_verts)
    return Matching(grid, frozenset(int(i) for i in ids))


def max_matching_size(grid: GridSpec, deleted=(), deleted_vertices: Iterable[Coords] = ()) -> int:
    return len(max_matching(grid, deleted, deleted_vertices).ids)


def has_perfect_matching(grid: GridSpec, deleted=(), deleted_vertices: Iterable[Coords] = ()) -> bool:
    """True when some matching covers every remaining vertex."""
    remaining = grid.order - len(tuple(deleted_vertices))
    if remaining % 2:
        return False
    return 2 * max_matching_size(grid, deleted, deleted_vertices) == remaining


def has_almost_perfect_matching(grid: GridSpec, deleted=(), deleted_vertices: Iterable[Coords] = ()) -> bool:
    """True when some matching covers all but exactly one remaining vertex."""
    remaining = grid.order - len(tuple(deleted_vertices))
    if remaining % 2 == 0:
        return False
    return 2 * max_matching_size(grid, deleted, deleted_vertices) == remaining - 1


def is_mp_set(grid: GridSpec, faults) -> bool:
    """True when removing the faults leaves neither a perfect nor an
    almost-perfect matching; for either parity that means the matching
    number drops below floor(order / 2)."""
    ids = as_edge_ids(grid, faults)
    return max_matching_size(grid, ids) < grid.order // 2


# -- fault-edge structure --------------------------------------------------

def fault_degree(faults: FaultSet, f: Edge) -> int:
    """Number of other fault edges sharing an endpoint with ``f``."""
    grid = faults.grid
    fid = grid.edge_id(f)
    ends = {f.lo, f.hi}
    count = 0
    for i in faults.ids:
        if i == fid:
            continue
        e = grid.edge_at(i)
        if e.lo in ends or e.hi in ends:
            count += 1
    return count


d_F = fault_degree


def f4_cycles(grid: GridSpec, f: Edge) -> list[Cycle]:
    """All 4-cycles closing ``f`` with a parallel edge one step away.

    There is one for each neighbor of ``f.lo`` inside its own layer, i.e. one
    per legal step at a position other than the edge's own.
    """
    if grid.n < 2:
        raise ValidationError("a 1-dimensional grid has no 4-cycles")
    grid.edge_id(f)
    u, v, d = f.lo, f.hi, f.position
    cycles = []
    for d2 in range(grid.n):
        if d2 == d:
            continue
        for step in (-1, 1):
            c = u[d2] + step
            if not 0 <= c < grid.dims[d2]:
                continue
            u2 = u[:d2] + (c,) + u[d2 + 1:]
            v2 = v[:d2] + (c,) + v[d2 + 1:]
            cycles.append(Cycle.from_vertices(grid, (u, v, v2, u2)))
    return cycles


def symmetric_difference(matching: Matching, cycle: Cycle) -> Matching:
    """Flip the matching along an alternating cycle; size and coverage persist."""
    if not cycle.alternates_with(matching):
        raise ValidationError("cycle does not alternate with the matching")
    return Matching(matching.grid, matching.ids ^ cycle.id_set)


def is_nice_cycle(faults: FaultSet, matching: Matching, cycle: Cycle) -> bool:
    """True when the cycle alternates with the matching and its fault overlap
    is nonempty and lies entirely inside the matching."""
    if not cycle.alternates_with(matching):
        return False
    overlap = cycle.id_set & faults.ids
    return bool(overlap) and overlap <= matching.ids


def apply_nice_cycles(matching: Matching, cycles: Sequence[Cycle], faults: FaultSet) -> Matching:
    """Flip the matching along pairwise disjoint nice cycles covering every
    fault edge of the matching; the result has equal size and no fault edges."""
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            shared = cycles[i].id_set & cycles[j].id_set
            if shared:
                e = matching.grid.edge_at(min(shared))
                raise ValidationError(f"cycles {i} and {j} are not edge-disjoint: both use {e}")
    for i, c in enumerate(cycles):
        if not is_nice_cycle(faults, matching, c):
            raise ValidationError(f"cycle {i} is not a nice cycle for this fault set and matching")
    in_matching = faults.ids & matching.ids
    covered = set()
    for c in cycles:
        covered |= c.id_set
    missed = in_matching - covered
    if missed:
        names = ", ".join(str(matching.grid.edge_at(i)) for i in sorted(missed))
        raise ValidationError(f"cycles do not cover the fault edges of the matching: {names}")
    out = matching
    for c in cycles:
        out = Matching(out.grid, out.ids ^ c.id_set)
    assert not (out.ids & faults.ids) and len(out.ids) == len(matching.ids)
    return out


def classify_fault_edge(grid: GridSpec, faults: FaultSet, matching: Matching,
                        f: Edge, max_cycle_length: int = 8) -> FaultEdgeVerdict:
    """Search for a nice cycle through ``f``, trying 4-cycles first and then
    all alternating cycles up to ``max_cycle_length`` edges.

    A nice-fault verdict carries a witness cycle.  A bad-fault verdict is
    relative to the length bound, which is echoed in the result.
    """
    fid = grid.edge_id(f)
    if fid not in faults.ids or fid not in matching.ids:
        raise ValidationError(f"{f} is not a fault edge of the matching")
    if max_cycle_length < 4:
        raise ValidationError("max_cycle_length must be at least 4")
    if grid.n >= 2:
        for c in f4_cycles(grid, f):
            if is_nice_cycle(faults, matching, c):
                return FaultEdgeVerdict(FaultEdgeKind.NICE_FAULT, c, max_cycle_length)
    witness = _alternating_cycle_search(grid, faults, matching, f, max_cycle_length)
    if witness is not None:
        return FaultEdgeVerdict(FaultEdgeKind.NICE_FAULT, witness, max_cycle_length)
    return FaultEdgeVerdict(FaultEdgeKind.BAD_FAULT, None, max_cycle_length)


def _alternating_cycle_search(grid, faults, matching, f, limit):
    """Depth-first search for a nice cycle through ``f`` of length <= limit.

    The walk leaves f.hi on a non-matching edge and alternates; edges outside
    the matching must also lie outside the fault set, which makes any cycle
    found automatically nice.  Neighbors are tried in edge-id order, so the
    witness is deterministic.
    """
    u, v = f.lo, f.hi
    max_path = limit - 1
    path: list[Coords] = []
    visited = {u, v}

    def incident(w):
        return [(grid.edge_id(Edge.between(w, x)), x) for x in grid.neighbors(w)]

    def walk(w, steps):
        # steps = edges walked so far from v; next edge is matched iff steps is odd
        if steps >= max_path:
            return False
        if steps % 2:
            x = matching.partner(w)
            if x is None or x in visited:
                return False
            path.append(x)
            visited.add(x)
            if walk(x, steps + 1):
                return True
            visited.discard(x)
            path.pop()
            return False
        for i, x in incident(w):
            if i in matching.ids or i in faults.ids:
                continue
            if x == u:
                if steps >= 2:
                    return True
                continue
            if x in visited:
                continue
            path.append(x)
            visited.add(x)
            if walk(x, steps + 1):
                return True
            visited.discard(x)
            path.pop()
        return False

    if walk(v, 0):
        return Cycle.from_vertices(grid, (u, v, *path))
    return None
