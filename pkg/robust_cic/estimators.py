"""
Counterfactual distribution estimators.

Every estimator learns the natural drift from the control group (t=0 -> t=1) and
pushes the pre-intervention treatment sample through it. The result is the
estimated post-intervention treatment sample had no treatment occurred.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .measures import EmpiricalMeasure, TransportPlan, check_same_dimension
from .ot import barycentric_map, exact_ot_plan, ot_distance, quantile_map_1d, sinkhorn_plan
from .ot.sinkhorn import DEFAULT_MAX_ITER, DEFAULT_TOL
from .subspace import DEFAULT_STEP, Direction, DirectionSet, max_sliced_ascent, project, rot_select
from .telemetry import Span

logger = logging.getLogger(__name__)

CIC = "cic"
OT = "ot"
SINKHORN = "sinkhorn"
ROT = "rot"
MAX_SLICED = "max-sliced"

METHODS = (CIC, OT, SINKHORN, ROT, MAX_SLICED)


@dataclass(frozen=True, eq=False)
class CounterfactualEstimate:
    """Estimated counterfactual sample: one output atom per pre-intervention treatment atom."""

    samples: np.ndarray
    method: str
    runtime_s: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]

    def as_measure(self) -> EmpiricalMeasure:
        return EmpiricalMeasure.uniform(self.samples)


def cic_tensorized(y0c: EmpiricalMeasure, y1c: EmpiricalMeasure, y0t: EmpiricalMeasure) -> CounterfactualEstimate:
    """Univariate changes-in-changes applied to each coordinate independently."""
    d = check_same_dimension(y0c, y1c, y0t)
    with Span(CIC, attributes={"d": d}) as span:
        samples = np.empty_like(y0t.points)
        for i in range(d):
            drift = quantile_map_1d(y0c.coordinate(i), y1c.coordinate(i))
            samples[:, i] = drift(y0t.points[:, i])
    return CounterfactualEstimate(samples, CIC, span.elapsed_s)


def _transfer_displacements(y0c: EmpiricalMeasure, y0t: EmpiricalMeasure, images: np.ndarray) -> np.ndarray:
    # each treatment atom moves like its nearest control atom at t=0
    displacement = images - y0c.points
    _, nearest = cKDTree(y0c.points).query(y0t.points, k=1)
    return y0t.points + displacement[nearest]


def _plan_counterfactual(y0c, y1c, y0t, plan: TransportPlan) -> np.ndarray:
    return _transfer_displacements(y0c, y0t, barycentric_map(plan, y1c))


def ot_counterfactual(y0c: EmpiricalMeasure, y1c: EmpiricalMeasure, y0t: EmpiricalMeasure) -> CounterfactualEstimate:
    """Drift estimated by the exact transport plan between the two control samples."""
    d = check_same_dimension(y0c, y1c, y0t)
    with Span(OT, attributes={"d": d}) as span:
        plan, cost = exact_ot_plan(y0c, y1c)
        samples = _plan_counterfactual(y0c, y1c, y0t, plan)
    return CounterfactualEstimate(samples, OT, span.elapsed_s, {"plan_cost": cost})


def sinkhorn_counterfactual(
    y0c: EmpiricalMeasure,
    y1c: EmpiricalMeasure,
    y0t: EmpiricalMeasure,
    lam: float,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
) -> CounterfactualEstimate:
    """Drift estimated by the entropic plan between the two control samples."""
    d = check_same_dimension(y0c, y1c, y0t)
    with Span(SINKHORN, attributes={"d": d, "lambda": lam}) as span:
        result = sinkhorn_plan(y0c, y1c, lam, max_iter=max_iter, tol=tol)
        samples = _plan_counterfactual(y0c, y1c, y0t, result.plan)
    meta = {
        "lambda": lam,
        "converged": result.converged,
        "marginal_violation": result.marginal_violation,
        "iterations": result.iterations,
    }
    return CounterfactualEstimate(samples, SINKHORN, span.elapsed_s, meta)


def lift_along(y0c: EmpiricalMeasure, y1c: EmpiricalMeasure, y0t: EmpiricalMeasure, w: Direction) -> np.ndarray:
    """Move each treatment atom along w by the 1D drift of its projection."""
    drift = quantile_map_1d(project(y0c, w), project(y1c, w))
    s = project(y0t, w).values()
    return y0t.points + (drift(s) - s)[:, None] * w.vector[None, :]


def rot_counterfactual(y0c: EmpiricalMeasure, y1c: EmpiricalMeasure, y0t: EmpiricalMeasure, dirs: DirectionSet) -> CounterfactualEstimate:
    """Univariate changes-in-changes on the most discriminative of the sampled directions."""
    d = check_same_dimension(y0c, y1c, y0t)
    with Span(ROT, attributes={"d": d, "k": len(dirs)}) as span:
        best, cost, costs = rot_select(y0c, y1c, dirs)
        samples = lift_along(y0c, y1c, y0t, best)
    meta = {"direction": best.vector.tolist(), "cost": cost, "all_costs": list(costs), "k": len(dirs)}
    return CounterfactualEstimate(samples, ROT, span.elapsed_s, meta)


def max_sliced_counterfactual(
    y0c: EmpiricalMeasure,
    y1c: EmpiricalMeasure,
    y0t: EmpiricalMeasure,
    iters: int,
    step: float = DEFAULT_STEP,
    seed: int = 0,
) -> CounterfactualEstimate:
    """Same lifting as `rot_counterfactual`, with the direction found by ascent over the sphere."""
    d = check_same_dimension(y0c, y1c, y0t)
    with Span(MAX_SLICED, attributes={"d": d, "iters": iters}) as span:
        best, cost = max_sliced_ascent(y0c, y1c, iters, step=step, seed=seed)
        samples = lift_along(y0c, y1c, y0t, best)
    meta = {"direction": best.vector.tolist(), "cost": cost, "iters": iters}
    return CounterfactualEstimate(samples, MAX_SLICED, span.elapsed_s, meta)


def evaluate(estimate: CounterfactualEstimate, ground_truth: EmpiricalMeasure) -> float:
    """Exact transport cost between the estimated sample and the ground-truth counterfactual."""
    return ot_distance(estimate.as_measure(), ground_truth)
