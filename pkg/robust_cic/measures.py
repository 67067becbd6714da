"""
Weighted point clouds and couplings.

`EmpiricalMeasure` is the value every other module passes around: the control and
treatment samples at both time stamps, projected measures, and estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError

WEIGHT_SUM_TOL = 1e-12
MARGINAL_TOL = 1e-8


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    """A finite set of n points in R^d carrying nonnegative weights that sum to one."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2:
            raise InvalidInputError(f"points must be an (n, d) array, got shape {points.shape}")
        n, d = points.shape
        if n < 1:
            raise InvalidInputError("empty measure: at least one atom is required")
        if d < 1:
            raise InvalidInputError("points must have dimension d >= 1")
        if not np.all(np.isfinite(points)):
            raise InvalidInputError("points must be finite")
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if weights.shape != (n,):
            raise DimensionMismatchError(f"expected {n} weights, got {weights.shape[0]}")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise InvalidInputError("weights must be finite and nonnegative")
        total = float(weights.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidInputError(f"weights must sum to 1 (got {total!r})")
        object.__setattr__(self, "points", _frozen(points))
        object.__setattr__(self, "weights", _frozen(weights))

    @classmethod
    def uniform(cls, points) -> "EmpiricalMeasure":
        """Build a measure with equal weight 1/n on every point."""
        points = np.asarray(points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        n = points.shape[0]
        if n < 1:
            raise InvalidInputError("empty measure: at least one atom is required")
        return cls(points, np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.weights == self.weights[0]))

    def values(self) -> np.ndarray:
        """Scalar atom values of a one-dimensional measure."""
        if self.d != 1:
            raise DimensionMismatchError(f"expected a one-dimensional measure, got d={self.d}")
        return self.points[:, 0]

    def coordinate(self, i: int) -> "EmpiricalMeasure":
        """Marginal of coordinate i as a one-dimensional measure."""
        if not 0 <= i < self.d:
            raise InvalidInputError(f"coordinate {i} out of range for d={self.d}")
        return EmpiricalMeasure(self.points[:, i : i + 1], self.weights)

    def mean(self) -> np.ndarray:
        return self.weights @ self.points

    def translate(self, v) -> "EmpiricalMeasure":
        v = np.asarray(v, dtype=np.float64).reshape(-1)
        if v.shape != (self.d,):
            raise DimensionMismatchError(f"shift has dimension {v.shape[0]}, measure has d={self.d}")
        return EmpiricalMeasure(self.points + v, self.weights)

    def subsample(self, m: int, rng: np.random.Generator) -> "EmpiricalMeasure":
        """Uniform draw of m atoms without replacement; kept weights are renormalized."""
        if m >= self.n:
            return self
        idx = np.sort(rng.choice(self.n, size=m, replace=False))
        kept = self.weights[idx]
        return EmpiricalMeasure(self.points[idx], kept / kept.sum())


def check_same_dimension(*measures: EmpiricalMeasure) -> int:
    """Return the common dimension of the measures, or raise."""
    dims = {m.d for m in measures}
    if len(dims) != 1:
        raise DimensionMismatchError(f"measures have different dimensions: {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """A nonnegative n x m coupling together with the marginals it was solved for."""

    coupling: np.ndarray
    source_weights: np.ndarray
    target_weights: np.ndarray

    def __post_init__(self):
        coupling = np.asarray(self.coupling, dtype=np.float64)
        a = np.asarray(self.source_weights, dtype=np.float64).reshape(-1)
        b = np.asarray(self.target_weights, dtype=np.float64).reshape(-1)
        if coupling.shape != (a.shape[0], b.shape[0]):
            raise DimensionMismatchError(f"coupling shape {coupling.shape} does not match marginals ({a.shape[0]}, {b.shape[0]})")
        if np.any(coupling < 0):
            raise InvalidInputError("coupling entries must be nonnegative")
        object.__setattr__(self, "coupling", _frozen(coupling))
        object.__setattr__(self, "source_weights", _frozen(a))
        object.__setattr__(self, "target_weights", _frozen(b))

    @property
    def shape(self) -> tuple[int, int]:
        return self.coupling.shape

    def marginal_violation(self) -> float:
        """Largest absolute deviation of a row or column sum from its marginal."""
        rows = np.abs(self.coupling.sum(axis=1) - self.source_weights).max()
        cols = np.abs(self.coupling.sum(axis=0) - self.target_weights).max()
        return float(max(rows, cols))

    def check_marginals(self, tol: float = MARGINAL_TOL) -> None:
        violation = self.marginal_violation()
        if violation > tol:
            raise InvalidInputError(f"plan violates its marginals by {violation:.3e} (tolerance {tol:.1e})")
