"""Federated data-driven multi-objective optimization."""

from ._core import (
    Problem,
    RbfnModel,
    fast_nondominated_sort,
    fit_local,
    igd,
    latin_hypercube,
    nondominated_filter,
    run_experiment,
    sorted_average,
)

__all__ = [
    "Problem",
    "RbfnModel",
    "fast_nondominated_sort",
    "fit_local",
    "igd",
    "latin_hypercube",
    "nondominated_filter",
    "run_experiment",
    "sorted_average",
]
