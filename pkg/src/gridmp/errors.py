"""Exception types shared across the package."""

from __future__ import annotations


class GridmpError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(GridmpError, ValueError):
    """Malformed input or a violated precondition."""


class BudgetError(GridmpError):
    """A search was refused or abandoned because it exceeds the subset budget.

    ``lower_bound`` is the largest set size already exhausted without finding
    a preclusion set, so the true preclusion number is known to be larger.
    """

    def __init__(self, message: str, *, required: int, budget: int,
                 size: int, lower_bound: int | None = None):
        super().__init__(message)
        self.required = required
        self.budget = budget
        self.size = size
        self.lower_bound = lower_bound


class SearchLimitError(GridmpError):
    """Every set size up to the cap was exhausted without finding a
    preclusion set; ``lower_bound`` is the largest size ruled out."""

    def __init__(self, message: str, *, lower_bound: int):
        super().__init__(message)
        self.lower_bound = lower_bound
