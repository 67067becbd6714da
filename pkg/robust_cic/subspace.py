"""
Robust one-dimensional subspaces.

A direction on the unit sphere defines a projection of both measures onto a line.
`rot_select` keeps the direction of a random set along which the projected measures
are farthest apart; `max_sliced_ascent` searches the whole sphere by first-order
ascent instead.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError
from .measures import EmpiricalMeasure, check_same_dimension
from .ot.one_d import monotone_matching, sorted_cost_1d

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
DEGENERATE_NORM = 1e-12

DEFAULT_K = 10
DEFAULT_STEP = 0.01
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True, eq=False)
class Direction:
    """A unit vector in R^d."""

    vector: np.ndarray

    def __post_init__(self):
        vector = np.array(self.vector, dtype=np.float64).reshape(-1)
        if vector.shape[0] < 1:
            raise InvalidInputError("a direction needs at least one coordinate")
        norm = np.linalg.norm(vector)
        if abs(norm - 1.0) > UNIT_TOL:
            raise InvalidInputError(f"direction must have unit norm, got {norm!r}")
        vector.setflags(write=False)
        object.__setattr__(self, "vector", vector)

    @classmethod
    def normalized(cls, vector) -> "Direction":
        vector = np.asarray(vector, dtype=np.float64).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm < DEGENERATE_NORM:
            raise InvalidInputError("cannot normalize a zero vector")
        return cls(vector / norm)

    @property
    def d(self) -> int:
        return self.vector.shape[0]


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """k directions sampled from one seed."""

    directions: tuple[Direction, ...]
    seed: int | None = None

    def __post_init__(self):
        directions = tuple(self.directions)
        if not directions:
            raise InvalidInputError("empty direction set")
        if len({w.d for w in directions}) != 1:
            raise DimensionMismatchError("directions have different dimensions")
        object.__setattr__(self, "directions", directions)

    @classmethod
    def from_matrix(cls, matrix, seed: int | None = None) -> "DirectionSet":
        return cls(tuple(Direction(row) for row in np.atleast_2d(matrix)), seed)

    @property
    def k(self) -> int:
        return len(self.directions)

    @property
    def d(self) -> int:
        return self.directions[0].d

    def matrix(self) -> np.ndarray:
        """(k, d) array of the direction vectors."""
        return np.stack([w.vector for w in self.directions])

    def __len__(self) -> int:
        return self.k

    def __iter__(self):
        return iter(self.directions)

    def __getitem__(self, i: int) -> Direction:
        return self.directions[i]


def _gaussian_unit_rows(rng: np.random.Generator, k: int, d: int) -> np.ndarray:
    draws = rng.standard_normal((k, d))
    norms = np.linalg.norm(draws, axis=1)
    while np.any(norms < DEGENERATE_NORM):
        bad = norms < DEGENERATE_NORM
        logger.debug("redrawing %d degenerate direction(s)", int(bad.sum()))
        draws[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(draws, axis=1)
    return draws / norms[:, None]


def sample_directions(k: int, d: int, seed: int) -> DirectionSet:
    """k i.i.d. directions uniform on the sphere S^(d-1), reproducible from `seed`."""
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if d < 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    return DirectionSet.from_matrix(_gaussian_unit_rows(rng, k, d), seed)


def _inner(points: np.ndarray, w: np.ndarray) -> np.ndarray:
    # row-wise products so a point's projection does not depend on the other rows
    return np.einsum("ij,j->i", points, w)


def project(m: EmpiricalMeasure, w: Direction) -> EmpiricalMeasure:
    """Push the measure forward by x -> <x, w>; weights are unchanged."""
    if m.d != w.d:
        raise DimensionMismatchError(f"measure has d={m.d}, direction has d={w.d}")
    return EmpiricalMeasure(_inner(m.points, w.vector)[:, None], m.weights)


def projected_cost(mu: EmpiricalMeasure, nu: EmpiricalMeasure, w: Direction) -> float:
    """1D transport cost between the projections of mu and nu on w."""
    if mu.d != w.d or nu.d != w.d:
        raise DimensionMismatchError("measures and direction have different dimensions")
    return sorted_cost_1d(_inner(mu.points, w.vector), mu.weights, _inner(nu.points, w.vector), nu.weights)


def rot_select(mu: EmpiricalMeasure, nu: EmpiricalMeasure, dirs: DirectionSet) -> tuple[Direction, float, list[float]]:
    """
    Direction of `dirs` maximizing the projected transport cost.

    Returns the selected direction, its cost, and the costs of all k directions.
    Ties go to the lowest index.
    """
    d = check_same_dimension(mu, nu)
    if dirs is None or len(dirs) == 0:
        raise InvalidInputError("empty direction set")
    if dirs.d != d:
        raise DimensionMismatchError(f"measures have d={d}, directions have d={dirs.d}")
    costs = [projected_cost(mu, nu, w) for w in dirs]
    best = int(np.argmax(costs))
    return dirs[best], costs[best], costs


def _require_equal_uniform(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> None:
    if mu.n != nu.n or not (mu.is_uniform and nu.is_uniform):
        raise InvalidInputError("max-sliced ascent needs equal-size uniform measures")


def max_sliced_ascent(
    mu: EmpiricalMeasure,
    nu: EmpiricalMeasure,
    iters: int,
    step: float = DEFAULT_STEP,
    seed: int = 0,
    keep_best: bool = False,
) -> tuple[Direction, float]:
    """
    Maximize the projected cost over the whole sphere with adaptive-moment ascent.

    Starts from `sample_directions(1, d, seed)`. Each step matches the projected atoms
    monotonically, takes the gradient of the matched squared gaps with respect to the
    direction, applies a bias-corrected first/second moment update and renormalizes
    onto the sphere. Returns the final direction and its projected cost, or the best
    iterate visited when `keep_best` is set.
    """
    if iters < 1:
        raise InvalidInputError(f"iters must be >= 1, got {iters}")
    d = check_same_dimension(mu, nu)
    _require_equal_uniform(mu, nu)
    x, y, weights = mu.points, nu.points, mu.weights

    w = sample_directions(1, d, seed)[0].vector.copy()
    m1 = np.zeros(d)
    m2 = np.zeros(d)

    def objective(w: np.ndarray) -> tuple[float, np.ndarray]:
        px, py = _inner(x, w), _inner(y, w)
        diff = x - y[monotone_matching(px, py)]
        gap = _inner(diff, w)
        cost = float(np.sum(weights * gap**2))
        grad = 2.0 * (weights * gap) @ diff
        return cost, grad

    cost, grad = objective(w)
    best_w, best_cost = w.copy(), cost
    for t in range(1, iters + 1):
        if not np.any(grad):
            logger.debug("zero gradient at iteration %d, stopping", t)
            break
        m1 = ADAM_BETA1 * m1 + (1 - ADAM_BETA1) * grad
        m2 = ADAM_BETA2 * m2 + (1 - ADAM_BETA2) * grad**2
        m1_hat = m1 / (1 - ADAM_BETA1**t)
        m2_hat = m2 / (1 - ADAM_BETA2**t)
        w = w + step * m1_hat / (np.sqrt(m2_hat) + ADAM_EPS)
        w = w / np.linalg.norm(w)
        cost, grad = objective(w)
        if keep_best and cost >= best_cost:
            best_w, best_cost = w.copy(), cost
    found = Direction.normalized(best_w if keep_best else w)
    return found, projected_cost(mu, nu, found)
