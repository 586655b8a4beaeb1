"""Matching preclusion of n-dimensional grid graphs.

Builds grid graphs, the explicit perfect and almost-perfect matchings
behind the closed-form preclusion numbers, the nice-cycle augmentation
machinery, and an independent brute-force checker for the predictions.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import BudgetError, GridmpError, SearchLimitError, ValidationError
from .grid import (
    Edge,
    GridSpec,
    VertexClass,
    build_grid,
    format_dims,
    format_edge,
    format_vertex,
    parse_dims,
    parse_edge,
    parse_vertex,
)
from .matching import (
    Cycle,
    FaultEdgeKind,
    FaultEdgeVerdict,
    FaultSet,
    Matching,
    apply_nice_cycles,
    classify_fault_edge,
    f4_cycles,
    fault_degree,
    has_almost_perfect_matching,
    has_perfect_matching,
    is_matching,
    is_mp_set,
    is_nice_cycle,
    max_matching,
    max_matching_size,
    symmetric_difference,
)
from .constructions import (
    apm_all_even,
    apm_avoiding_edge,
    apm_even_sum,
    canonical_pm,
    pm_of_vertex_deleted,
)
from .preclusion import (
    Classification,
    MpResult,
    SetKind,
    SweepItem,
    brute_force_mp,
    classify_set,
    default_budget,
    enumerate_optimal_sets,
    expected_optimal_sets,
    grid_family,
    parse_family,
    predicted_mp,
    special_pattern_sets,
    sweep,
    verify_grid,
    verify_vertex_deleted_mp,
)

__all__ = [
    "__version__",
    "BudgetError",
    "GridmpError",
    "SearchLimitError",
    "ValidationError",
    "Edge",
    "GridSpec",
    "VertexClass",
    "build_grid",
    "format_dims",
    "format_edge",
    "format_vertex",
    "parse_dims",
    "parse_edge",
    "parse_vertex",
    "Cycle",
    "FaultEdgeKind",
    "FaultEdgeVerdict",
    "FaultSet",
    "Matching",
    "apply_nice_cycles",
    "classify_fault_edge",
    "f4_cycles",
    "fault_degree",
    "has_almost_perfect_matching",
    "has_perfect_matching",
    "is_matching",
    "is_mp_set",
    "is_nice_cycle",
    "max_matching",
    "max_matching_size",
    "symmetric_difference",
    "apm_all_even",
    "apm_avoiding_edge",
    "apm_even_sum",
    "canonical_pm",
    "pm_of_vertex_deleted",
    "Classification",
    "MpResult",
    "SetKind",
    "SweepItem",
    "brute_force_mp",
    "classify_set",
    "default_budget",
    "enumerate_optimal_sets",
    "expected_optimal_sets",
    "grid_family",
    "parse_family",
    "predicted_mp",
    "special_pattern_sets",
    "sweep",
    "verify_grid",
    "verify_vertex_deleted_mp",
]
