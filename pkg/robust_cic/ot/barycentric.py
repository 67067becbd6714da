"""Barycentric projection of a transport plan onto a map."""

import numpy as np

from ..errors import DimensionMismatchError, InvalidInputError
from ..measures import EmpiricalMeasure, TransportPlan


def barycentric_map(plan: TransportPlan, target: EmpiricalMeasure) -> np.ndarray:
    """Send source atom i to the plan-weighted mean of the targets it is coupled with."""
    n, m = plan.shape
    if m != target.n:
        raise DimensionMismatchError(f"plan has {m} columns but the target has {target.n} atoms")
    mass = plan.coupling.sum(axis=1)
    if np.any(mass <= 0):
        raise InvalidInputError(f"plan row {int(np.argmin(mass))} carries no mass")
    return (plan.coupling @ target.points) / mass[:, None]
