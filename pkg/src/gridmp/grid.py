"""Grid graphs: Cartesian products of paths, with canonical orderings.

A grid is described by its per-axis vertex counts ``dims``.  Vertices are
coordinate tuples; two vertices are adjacent when they differ by exactly one
in exactly one coordinate (that coordinate is the *position* of the edge).
Everything downstream relies on the orderings fixed here: vertices are ranked
row-major with coordinate 0 most significant, and edges are oriented
low-to-high and ranked by (position, low-endpoint rank).  Edge identity in set
work is the dense rank in that ordering.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import ValidationError

Coords = tuple[int, ...]


class VertexClass(Enum):
    """Coordinate-sum parity; a proper 2-coloring of any grid."""

    EVEN = "even"
    ODD = "odd"


def _check_coords(obj) -> Coords:
    if not isinstance(obj, tuple) or not obj:
        raise ValidationError(f"vertex must be a non-empty tuple, got {obj!r}")
    for c in obj:
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise ValidationError(f"vertex coordinates must be non-negative integers, got {obj!r}")
    return obj


@dataclass(frozen=True)
class Edge:
    """An unordered grid edge stored in canonical orientation (lo below hi).

    ``position`` is the unique coordinate where the endpoints differ.
    """

    lo: Coords
    hi: Coords
    position: int = field(init=False, compare=False)

    def __post_init__(self):
        lo, hi = _check_coords(self.lo), _check_coords(self.hi)
        if len(lo) != len(hi):
            raise ValidationError(f"endpoints differ in dimension: {lo} vs {hi}")
        diffs = [i for i in range(len(lo)) if lo[i] != hi[i]]
        if len(diffs) != 1 or hi[diffs[0]] - lo[diffs[0]] != 1:
            raise ValidationError(f"not a grid edge: {lo} and {hi} must differ by 1 in exactly one coordinate")
        object.__setattr__(self, "position", diffs[0])

    @classmethod
    def between(cls, u: Coords, v: Coords) -> "Edge":
        """Build the canonical edge joining ``u`` and ``v`` given in either order."""
        if u > v:
            u, v = v, u
        return cls(u, v)

    def other(self, v: Coords) -> Coords:
        if v == self.lo:
            return self.hi
        if v == self.hi:
            return self.lo
        raise ValidationError(f"{format_vertex(v)} is not an endpoint of {self}")

    def __str__(self) -> str:
        return format_edge(self)


@dataclass(frozen=True)
class PartitionView:
    """The split of a grid at one position: layers and the crossings between them.

    ``layers[j]`` holds the vertices whose coordinate at ``position`` equals j,
    in row-major order.  ``crossings[j]`` holds the matching of edges joining
    layer j to layer j+1, in canonical edge order.
    """

    grid: "GridSpec"
    position: int
    layers: tuple[tuple[Coords, ...], ...]
    crossings: tuple[tuple[Edge, ...], ...]

    @property
    def layer_count(self) -> int:
        return len(self.layers)


@dataclass(frozen=True)
class GridSpec:
    """Immutable description of one grid plus cached derived structure.

    Derived views (vertex list, edge list, adjacency) are built lazily and
    cached; instances are safe to share across concurrent readers.
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.dims, tuple):
            object.__setattr__(self, "dims", tuple(self.dims))
        if not self.dims:
            raise ValidationError("dims must not be empty")
        for k in self.dims:
            if not isinstance(k, int) or isinstance(k, bool):
                raise ValidationError(f"dims must be integers, got {self.dims!r}")
            if k <= 1:
                raise ValidationError(f"every dim must be at least 2, got {self.dims!r}")

    # -- basic counts ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def order(self) -> int:
        return math.prod(self.dims)

    @property
    def n2(self) -> int:
        return sum(1 for k in self.dims if k == 2)

    @property
    def ne(self) -> int:
        return sum(1 for k in self.dims if k % 2 == 0)

    @property
    def min_degree(self) -> int:
        return self.n

    @property
    def max_degree(self) -> int:
        return 2 * self.n - self.n2

    # -- vertices ----------------------------------------------------------

    @cached_property
    def vertices(self) -> tuple[Coords, ...]:
        return tuple(itertools.product(*(range(k) for k in self.dims)))

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        out, acc = [], 1
        for k in reversed(self.dims):
            out.append(acc)
            acc *= k
        return tuple(reversed(out))

    def check_vertex(self, v: Coords) -> Coords:
        _check_coords(v)
        if len(v) != self.n or any(c >= k for c, k in zip(v, self.dims)):
            raise ValidationError(f"vertex {v!r} does not lie in the {format_dims(self.dims)} grid")
        return v

    def contains(self, v) -> bool:
        try:
            self.check_vertex(v)
        except ValidationError:
            return False
        return True

    def index_of(self, v: Coords) -> int:
        """Row-major rank of a vertex, coordinate 0 most significant."""
        self.check_vertex(v)
        return sum(c * s for c, s in zip(v, self._strides))

    def vertex_at(self, index: int) -> Coords:
        if not 0 <= index < self.order:
            raise ValidationError(f"vertex index {index} out of range for order {self.order}")
        out = []
        for s in self._strides:
            out.append(index // s)
            index %= s
        return tuple(out)

    def degree(self, v: Coords) -> int:
        self.check_vertex(v)
        return sum((c > 0) + (c < k - 1) for c, k in zip(v, self.dims))

    def neighbors(self, v: Coords) -> list[Coords]:
        """Adjacent vertices, ordered by the rank of the joining edge."""
        self.check_vertex(v)
        out = []
        for d, (c, k) in enumerate(zip(v, self.dims)):
            if c > 0:
                out.append(v[:d] + (c - 1,) + v[d + 1:])
            if c < k - 1:
                out.append(v[:d] + (c + 1,) + v[d + 1:])
        return out

    def vertex_class(self, v: Coords) -> VertexClass:
        self.check_vertex(v)
        return VertexClass.EVEN if sum(v) % 2 == 0 else VertexClass.ODD

    def class_sizes(self) -> dict[VertexClass, int]:
        even = sum(1 for v in self.vertices if sum(v) % 2 == 0)
        return {VertexClass.EVEN: even, VertexClass.ODD: self.order - even}

    def is_all_even(self, v: Coords) -> bool:
        self.check_vertex(v)
        return all(c % 2 == 0 for c in v)

    def all_even_vertices(self) -> Iterator[Coords]:
        return itertools.product(*(range(0, k, 2) for k in self.dims))

    def is_min_degree(self, v: Coords) -> bool:
        return self.degree(v) == self.min_degree

    def is_max_degree(self, v: Coords) -> bool:
        return self.degree(v) == self.max_degree

    # -- edges -------------------------------------------------------------

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """All edges, position-major then by low-endpoint rank; index = edge id."""
        out = []
        for d in range(self.n):
            for v in self.vertices:
                if v[d] < self.dims[d] - 1:
                    out.append(Edge(v, v[:d] + (v[d] + 1,) + v[d + 1:]))
        return tuple(out)

    @cached_property
    def _edge_rank(self) -> dict[tuple[Coords, Coords], int]:
        return {(e.lo, e.hi): i for i, e in enumerate(self.edges)}

    def edge_id(self, e: Edge) -> int:
        try:
            return self._edge_rank[(e.lo, e.hi)]
        except KeyError:
            raise ValidationError(f"edge {e} does not lie in the {format_dims(self.dims)} grid") from None

    def edge_at(self, edge_id: int) -> Edge:
        if not 0 <= edge_id < len(self.edges):
            raise ValidationError(f"edge id {edge_id} out of range")
        return self.edges[edge_id]

    def has_edge(self, u: Coords, v: Coords) -> bool:
        try:
            e = Edge.between(u, v)
        except ValidationError:
            return False
        return (e.lo, e.hi) in self._edge_rank

    def edge_between(self, u: Coords, v: Coords) -> Edge:
        e = Edge.between(u, v)
        self.edge_id(e)
        return e

    def incident_edge_ids(self, v: Coords) -> tuple[int, ...]:
        """Ids of the edges at ``v``, ascending."""
        self.check_vertex(v)
        return tuple(sorted(self.edge_id(Edge.between(v, w)) for w in self.neighbors(v)))

    def star(self, v: Coords) -> frozenset[int]:
        """The full set of edge ids incident with ``v``."""
        return frozenset(self.incident_edge_ids(v))

    # -- structure ---------------------------------------------------------

    def shift(self, v: Coords, d: int, direction: int) -> Coords:
        """The vertex one step from ``v`` along position ``d`` (direction ±1)."""
        self.check_vertex(v)
        self._check_position(d)
        if direction not in (-1, 1):
            raise ValidationError(f"direction must be +1 or -1, got {direction!r}")
        c = v[d] + direction
        if not 0 <= c < self.dims[d]:
            raise ValidationError(f"shift of {format_vertex(v)} at position {d} by {direction:+d} leaves the grid")
        return v[:d] + (c,) + v[d + 1:]

    def _check_position(self, d: int) -> int:
        if not isinstance(d, int) or not 0 <= d < self.n:
            raise ValidationError(f"position {d!r} out of range for {format_dims(self.dims)}")
        return d

    def partition_at(self, d: int) -> PartitionView:
        """Split the grid at position ``d`` into layers and crossing matchings."""
        self._check_position(d)
        k = self.dims[d]
        layers = tuple(
            tuple(v for v in self.vertices if v[d] == j) for j in range(k)
        )
        crossings = tuple(
            tuple(Edge(v, v[:d] + (j + 1,) + v[d + 1:]) for v in layers[j])
            for j in range(k - 1)
        )
        return PartitionView(self, d, layers, crossings)

    def layer_subgrid(self, d: int, j: int) -> tuple["GridSpec", Callable[[Coords], Coords]]:
        """The layer at ``d``=j as an (n-1)-grid plus its embedding into this grid."""
        self._check_position(d)
        if self.n == 1:
            raise ValidationError("a 1-dimensional grid has no layer subgrids")
        if not 0 <= j < self.dims[d]:
            raise ValidationError(f"layer index {j} out of range at position {d}")
        sub = GridSpec(self.dims[:d] + self.dims[d + 1:])

        def embed(sv: Coords) -> Coords:
            sub.check_vertex(sv)
            return sv[:d] + (j,) + sv[d:]

        return sub, embed

    # -- kernel arrays -----------------------------------------------------

    @cached_property
    def arrays(self) -> "GraphArrays":
        edges = self.edges
        m = len(edges)
        eu = np.empty(m, np.int32)
        ev = np.empty(m, np.int32)
        for i, e in enumerate(edges):
            eu[i] = self.index_of(e.lo)
            ev[i] = self.index_of(e.hi)
        even = np.fromiter((sum(v) % 2 == 0 for v in self.vertices), np.uint8, self.order)
        incident: list[list[int]] = [[] for _ in range(self.order)]
        for i in range(m):
            incident[eu[i]].append(i)
            incident[ev[i]].append(i)
        adj_start = np.zeros(self.order + 1, np.int32)
        adj_edge = np.empty(2 * m, np.int32)
        adj_other = np.empty(2 * m, np.int32)
        pos = 0
        for v in range(self.order):
            for i in incident[v]:
                adj_edge[pos] = i
                adj_other[pos] = ev[i] if eu[i] == v else eu[i]
                pos += 1
            adj_start[v + 1] = pos
        return GraphArrays(self.order, m, eu, ev, even, adj_start, adj_edge, adj_other)

    def __str__(self) -> str:
        return format_dims(self.dims)


@dataclass(frozen=True)
class GraphArrays:
    """Flat adjacency arrays consumed by the search kernels.

    ``adj_edge``/``adj_other`` list, per vertex in CSR layout, the incident
    edge ids (ascending) and the opposite endpoints.
    """

    n_verts: int
    n_edges: int
    eu: np.ndarray
    ev: np.ndarray
    even: np.ndarray
    adj_start: np.ndarray
    adj_edge: np.ndarray
    adj_other: np.ndarray


def build_grid(dims: Iterable[int]) -> GridSpec:
    """Validate ``dims`` and return the grid it describes."""
    return GridSpec(tuple(dims))


# -- text encodings --------------------------------------------------------

def format_dims(dims: Iterable[int]) -> str:
    return ",".join(str(k) for k in dims)


def parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValidationError(f"cannot parse dims from {text!r}") from None
    build_grid(dims)
    return dims


def format_vertex(v: Coords) -> str:
    return ",".join(str(c) for c in v)


def parse_vertex(text: str) -> Coords:
    try:
        v = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValidationError(f"cannot parse vertex from {text!r}") from None
    return _check_coords(v)


def format_edge(e: Edge) -> str:
    return f"{format_vertex(e.lo)}|{format_vertex(e.hi)}"


def parse_edge(text: str) -> Edge:
    parts = text.split("|")
    if len(parts) != 2:
        raise ValidationError(f"cannot parse edge from {text!r}: expected 'u|v'")
    return Edge.between(parse_vertex(parts[0]), parse_vertex(parts[1]))
