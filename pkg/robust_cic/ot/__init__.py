"""Optimal-transport primitives used by the estimators."""

from .barycentric import barycentric_map
from .exact import cost_matrix, exact_ot_plan, ot_distance
from .one_d import Monotone1DMap, monotone_matching, ot_cost_1d, quantile_map_1d
from .sinkhorn import SinkhornResult, sinkhorn_plan

__all__ = [
    "Monotone1DMap",
    "SinkhornResult",
    "barycentric_map",
    "cost_matrix",
    "exact_ot_plan",
    "monotone_matching",
    "ot_cost_1d",
    "ot_distance",
    "quantile_map_1d",
    "sinkhorn_plan",
]
