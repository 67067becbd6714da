"""
Closed-form optimal transport on the real line.

The monotone map between two one-dimensional measures is the target quantile
function composed with the source cdf. Both are step functions built from the
sorted atoms and their cumulative weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..measures import EmpiricalMeasure

# Cumulative weights are compared with this slack so that equal fractions
# accumulated in a different order still land on the same step.
CUMULATIVE_TOL = 1e-12


def _sorted_with_cumulative(measure: EmpiricalMeasure) -> tuple[np.ndarray, np.ndarray]:
    values = measure.values()
    order = np.argsort(values, kind="stable")
    cumulative = np.cumsum(measure.weights[order])
    cumulative[-1] = 1.0
    return values[order], cumulative


def _require_1d(*measures: EmpiricalMeasure) -> None:
    for measure in measures:
        measure.values()


@dataclass(frozen=True, eq=False)
class Monotone1DMap:
    """The nondecreasing map F_target^-1 o F_source between two empirical measures."""

    source_values: np.ndarray
    source_cumulative: np.ndarray
    target_values: np.ndarray
    target_cumulative: np.ndarray

    def cdf(self, s) -> np.ndarray:
        """Right-continuous source cdf: total weight of source atoms <= s."""
        s = np.asarray(s, dtype=np.float64)
        idx = np.searchsorted(self.source_values, s, side="right")
        padded = np.concatenate(([0.0], self.source_cumulative))
        return padded[idx]

    def quantile(self, u) -> np.ndarray:
        """Left-continuous target pseudo-inverse inf{t | F(t) >= u}, clamped to the target atoms."""
        u = np.asarray(u, dtype=np.float64)
        idx = np.searchsorted(self.target_cumulative, u - CUMULATIVE_TOL, side="left")
        idx = np.clip(idx, 0, self.target_values.shape[0] - 1)
        return self.target_values[idx]

    def __call__(self, s) -> np.ndarray:
        return self.quantile(self.cdf(s))


def quantile_map_1d(source: EmpiricalMeasure, target: EmpiricalMeasure) -> Monotone1DMap:
    """Build the monotone transport map from `source` to `target` (both one-dimensional)."""
    _require_1d(source, target)
    src_values, src_cum = _sorted_with_cumulative(source)
    tgt_values, tgt_cum = _sorted_with_cumulative(target)
    return Monotone1DMap(src_values, src_cum, tgt_values, tgt_cum)


def _quantiles_at(levels: np.ndarray, cumulative: np.ndarray, values: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cumulative, levels, side="left")
    return values[np.clip(idx, 0, values.shape[0] - 1)]


def sorted_cost_1d(source_values: np.ndarray, source_weights: np.ndarray, target_values: np.ndarray, target_weights: np.ndarray) -> float:
    """Squared-cost transport between two weighted scalar samples (any order)."""
    src_order = np.argsort(source_values, kind="stable")
    tgt_order = np.argsort(target_values, kind="stable")
    xs = source_values[src_order]
    ys = target_values[tgt_order]
    u_cum = np.cumsum(source_weights[src_order])
    v_cum = np.cumsum(target_weights[tgt_order])
    u_cum[-1] = 1.0
    v_cum[-1] = 1.0
    # north-west corner coupling: walk the merged breakpoints of both quantile functions
    levels = np.sort(np.concatenate((u_cum, v_cum)))
    u_q = _quantiles_at(levels, u_cum, xs)
    v_q = _quantiles_at(levels, v_cum, ys)
    delta = np.diff(np.concatenate(([0.0], levels)))
    return float(np.sum(delta * (u_q - v_q) ** 2))


def ot_cost_1d(source: EmpiricalMeasure, target: EmpiricalMeasure) -> float:
    """Exact squared-Euclidean transport cost between two one-dimensional measures."""
    _require_1d(source, target)
    return sorted_cost_1d(source.values(), source.weights, target.values(), target.weights)


def monotone_matching(source_values: np.ndarray, target_values: np.ndarray) -> np.ndarray:
    """For equal-size uniform samples, the index of the target matched to each source atom."""
    if source_values.shape != target_values.shape:
        raise InvalidInputError("monotone matching needs samples of equal size")
    src_order = np.argsort(source_values, kind="stable")
    tgt_order = np.argsort(target_values, kind="stable")
    matched = np.empty_like(src_order)
    matched[src_order] = tgt_order
    return matched
