"""Preclusion numbers by brute force, optimal-set enumeration, and checks
of the closed-form predictions.

The searches enumerate k-subsets of edge ids in lexicographic order.  By
default they start from a constructed witness matching (canonical pairing
for even order, the all-even almost-perfect matching for odd order): a
subset disjoint from a surviving maximum matching can never preclude, so
skipping those subsets loses nothing.  The unpruned mode recomputes a
maximum matching from scratch per subset and exists to cross-check the
pruned one.

A subset budget guards every search; requests whose C(|E|, k) exceeds it
are refused with the certified lower bound reached so far.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from . import _kernel
from .constructions import apm_all_even, canonical_pm
from .errors import BudgetError, GridmpError, SearchLimitError, ValidationError
from .grid import Coords, GridSpec, build_grid, format_dims, parse_dims
from .matching import FaultSet, Matching, as_edge_ids, max_matching_size

DEFAULT_BUDGET = 10 ** 8


def default_budget() -> int:
    """The subset budget, overridable with the GRIDMP_BUDGET variable."""
    raw = os.environ.get("GRIDMP_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
        if value <= 0:
            raise ValueError
    except ValueError:
        raise ValidationError(f"GRIDMP_BUDGET must be a positive integer, got {raw!r}") from None
    return value


class SetKind(Enum):
    TRIVIAL = "trivial"
    SPECIAL_2GRID = "special-2-grid"
    OTHER = "other"


@dataclass(frozen=True)
class Classification:
    """Tag for one optimal preclusion set.

    Trivial sets isolate ``vertex``; the special 2-grid pattern is a pair of
    parallel edges at rows 0 and 2 of the length-3 axis, starting at even
    ``offset`` along ``axis``.
    """

    kind: SetKind
    vertex: Coords | None = None
    offset: int | None = None
    axis: int | None = None


@dataclass(frozen=True)
class MpResult:
    dims: tuple[int, ...]
    mp: int
    predicted_mp: int
    optimal_sets: tuple[FaultSet, ...]
    classifications: tuple[Classification, ...]
    super_matched: bool
    prediction_match: bool
    mismatches: tuple[str, ...] = field(default=())


def predicted_mp(grid: GridSpec) -> int:
    """Closed-form preclusion number: n for even order, n+1 for odd."""
    return grid.n if grid.order % 2 == 0 else grid.n + 1


def pruning_witness(grid: GridSpec) -> Matching:
    """Deterministic maximum matching used to filter candidate subsets."""
    if grid.order % 2 == 0:
        d = min(i for i, k in enumerate(grid.dims) if k % 2 == 0)
        return canonical_pm(grid, d)
    return apm_all_even(grid, (0,) * grid.n)


def _gate(n_candidates: int, k: int, budget: int, lower_bound: int | None):
    required = math.comb(n_candidates, k)
    if required > budget:
        raise BudgetError(
            f"refusing to enumerate C({n_candidates},{k}) = {required} subsets "
            f"(budget {budget})",
            required=required, budget=budget, size=k, lower_bound=lower_bound)


def _search(grid: GridSpec, k: int, *, find_all: bool, prune: bool = True):
    witness = pruning_witness(grid)
    return _kernel.find_preclusion_sets(
        grid.arrays, range(len(grid.edges)), k, grid.order // 2,
        base_match=sorted(witness.ids), exhaustive=not prune, find_all=find_all)


def brute_force_mp(grid: GridSpec, limit: int | None = None,
                   budget: int | None = None, prune: bool = True) -> int:
    """Smallest k for which some k-subset of edges precludes, by exhaustion.

    ``limit`` caps the size tried (default: predicted value plus one); if it
    is exhausted the error carries the certified lower bound.
    """
    budget = default_budget() if budget is None else budget
    cap = limit if limit is not None else predicted_mp(grid) + 1
    n_edges = len(grid.edges)
    for k in range(1, min(cap, n_edges) + 1):
        _gate(n_edges, k, budget, k - 1)
        if _search(grid, k, find_all=False, prune=prune):
            return k
    raise SearchLimitError(
        f"no preclusion set of size up to {cap} in {grid}; mp > {cap}",
        lower_bound=cap)


def enumerate_optimal_sets(grid: GridSpec, budget: int | None = None,
                           prune: bool = True, mp: int | None = None) -> list[FaultSet]:
    """All minimum preclusion sets, in lexicographic edge-id order."""
    budget = default_budget() if budget is None else budget
    if mp is None:
        mp = brute_force_mp(grid, budget=budget, prune=prune)
    _gate(len(grid.edges), mp, budget, mp - 1)
    hits = _search(grid, mp, find_all=True, prune=prune)
    return [FaultSet(grid, frozenset(int(i) for i in h)) for h in hits]


def special_pattern_sets(grid: GridSpec) -> list[FaultSet]:
    """Every syntactic instance of the special 2-grid pattern in this grid."""
    out = []
    if grid.n != 2:
        return out
    for axis in (0, 1):
        other = 1 - axis
        if grid.dims[axis] % 2 or grid.dims[other] != 3:
            continue
        for u0 in range(0, grid.dims[axis] - 1, 2):
            edges = []
            for row in (0, 2):
                lo = (u0, row) if axis == 0 else (row, u0)
                hi = (u0 + 1, row) if axis == 0 else (row, u0 + 1)
                edges.append(grid.edge_between(lo, hi))
            out.append(FaultSet.of(grid, edges))
    return out


def classify_set(grid: GridSpec, faults) -> Classification:
    """Tag an optimal set as a vertex star, a special 2-grid pair, or other.

    Classification assumes the set is a minimum preclusion set; for other
    sets the tag is meaningless.
    """
    ids = as_edge_ids(grid, faults)
    if not ids:
        return Classification(SetKind.OTHER)
    edges = [grid.edge_at(i) for i in sorted(ids)]
    common = {edges[0].lo, edges[0].hi}
    for e in edges[1:]:
        common &= {e.lo, e.hi}
    for v in sorted(common):
        if grid.star(v) == ids:
            return Classification(SetKind.TRIVIAL, vertex=v)
    if grid.n == 2 and len(edges) == 2:
        a = edges[0].position
        other = 1 - a
        if (edges[1].position == a and grid.dims[a] % 2 == 0
                and grid.dims[other] == 3):
            u0 = edges[0].lo[a]
            rows = {edges[0].lo[other], edges[1].lo[other]}
            if edges[1].lo[a] == u0 and u0 % 2 == 0 and rows == {0, 2}:
                return Classification(SetKind.SPECIAL_2GRID, offset=u0, axis=a)
    return Classification(SetKind.OTHER)


def expected_optimal_sets(grid: GridSpec) -> list[FaultSet] | None:
    """The closed-form list of optimal sets, where one is known.

    Odd order, n >= 2: the stars of odd-parity vertices of degree n+1.
    Paths: removed edges must split the path into all-odd pieces, which for
    odd length takes one pair of edges at even then odd offset, and for even
    length a single edge at even offset.
    """
    k = grid.dims[0]
    if grid.order % 2:
        if grid.n == 1:
            return [FaultSet.of(grid, [i, j])
                    for i in range(0, k - 1, 2) for j in range(i + 1, k - 1, 2)]
        out = [FaultSet(grid, grid.star(v)) for v in grid.vertices
               if sum(v) % 2 == 1 and grid.degree(v) == grid.n + 1]
        return sorted(out, key=lambda s: sorted(s.ids))
    if grid.n == 1:
        return [FaultSet.of(grid, [i]) for i in range(0, k - 1, 2)]
    return None


def _same_families(got: Sequence[FaultSet], want: Sequence[FaultSet]) -> bool:
    return {s.ids for s in got} == {s.ids for s in want}


def verify_grid(grid: GridSpec, budget: int | None = None) -> MpResult:
    """Compare brute-force ground truth against every applicable prediction."""
    pred = predicted_mp(grid)
    problems: list[str] = []
    mp = brute_force_mp(grid, budget=budget)
    sets = enumerate_optimal_sets(grid, budget=budget, mp=mp)
    tags = tuple(classify_set(grid, s) for s in sets)
    super_matched = bool(sets) and all(t.kind is SetKind.TRIVIAL for t in tags)

    if mp != pred:
        problems.append(f"brute-force mp {mp} != predicted {pred}")
    even = grid.order % 2 == 0
    if even and grid.n >= 3:
        bad = sum(1 for t in tags if t.kind is not SetKind.TRIVIAL)
        if bad:
            problems.append(f"{bad} optimal set(s) are not vertex stars")
    elif even and grid.n == 2:
        bad = sum(1 for t in tags if t.kind is SetKind.OTHER)
        if bad:
            problems.append(f"{bad} optimal set(s) fit neither known pattern")
        have = {s.ids for s in sets}
        missing = [s for s in special_pattern_sets(grid) if s.ids not in have]
        if missing:
            problems.append(f"{len(missing)} special pattern(s) are not optimal sets")
    elif not even:
        want = expected_optimal_sets(grid)
        if not _same_families(sets, want):
            problems.append("optimal sets differ from the predicted family")
    return MpResult(grid.dims, mp, pred, tuple(sets), tags, super_matched,
                    not problems, tuple(problems))


def verify_vertex_deleted_mp(grid: GridSpec, u: Coords,
                             budget: int | None = None) -> bool:
    """Check that the vertex-deleted grid has preclusion number exactly n.

    Exhausts all fault sets of size below n (none may preclude) and exhibits
    a precluding star of size n at a far corner.
    """
    budget = default_budget() if budget is None else budget
    if grid.order % 2 == 0:
        raise ValidationError("vertex-deleted check needs an odd-order grid")
    if not grid.is_all_even(u):
        raise ValidationError(f"vertex {u} must have every coordinate even")
    base = apm_all_even(grid, u)  # a perfect matching of the grid minus u
    star = grid.star(u)
    candidates = [i for i in range(len(grid.edges)) if i not in star]
    target = (grid.order - 1) // 2
    uidx = grid.index_of(u)
    for k in range(1, grid.n):
        _gate(len(candidates), k, budget, k - 1)
        hits = _kernel.find_preclusion_sets(
            grid.arrays, candidates, k, target, base_match=sorted(base.ids),
            banned_verts=[uidx], find_all=False)
        if hits:
            return False
    corner = next(v for v in _corners(grid.dims) if v != u)
    failing = grid.star(corner)
    size = max_matching_size(grid, failing, deleted_vertices=[u])
    return size < target


def _corners(dims):
    return itertools.product(*((0, k - 1) for k in dims))


@dataclass(frozen=True)
class SweepItem:
    dims: tuple[int, ...]
    result: MpResult | None = None
    error: str | None = None
    skipped: bool = False  # refused by the budget gate, not a failure

    @property
    def ok(self) -> bool:
        return self.result is not None and self.result.prediction_match


def _verify_one(args) -> SweepItem:
    dims, budget = args
    try:
        return SweepItem(dims, result=verify_grid(build_grid(dims), budget=budget))
    except BudgetError as exc:
        return SweepItem(dims, error=str(exc), skipped=True)
    except GridmpError as exc:
        return SweepItem(dims, error=str(exc))


def sweep(grids: Iterable[GridSpec], budget: int | None = None,
          jobs: int = 1) -> list[SweepItem]:
    """Run verify_grid over a family; item order follows the input order.

    Failures are recorded per grid and the sweep continues.  With jobs > 1
    the grids are verified in worker processes; the output order is still
    the input order.
    """
    work = [(g.dims, budget) for g in grids]
    if jobs <= 1:
        return [_verify_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_verify_one, work))


def grid_family(max_n: int, max_order: int,
                extra: Iterable[Sequence[int]] = ()) -> list[GridSpec]:
    """All grids with at most ``max_n`` dims and order at most ``max_order``.

    One representative per dimension multiset, with dims non-increasing;
    sorted by (n, order, dims).  ``extra`` entries are appended if absent.
    """
    found: set[tuple[int, ...]] = set()

    def rec(prefix: tuple[int, ...], max_k: int, left: int):
        if prefix:
            found.add(prefix)
        if len(prefix) == max_n:
            return
        for k in range(2, min(max_k, left) + 1):
            rec(prefix + (k,), k, left // k)

    rec((), max_order, max_order)
    ordered = sorted(found, key=lambda d: (len(d), math.prod(d), d))
    out = [build_grid(d) for d in ordered]
    for dims in extra:
        g = build_grid(dims)
        if g.dims not in found:
            out.append(g)
    return out


def parse_family(text: str) -> list[GridSpec]:
    """Family file: one dims string per line; '#' starts a comment."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(build_grid(parse_dims(line)))
    return out
