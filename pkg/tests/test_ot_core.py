from itertools import permutations

import numpy as np
import pytest

from robust_cic.errors import DimensionMismatchError, InvalidInputError
from robust_cic.measures import EmpiricalMeasure, TransportPlan
from robust_cic.ot import (
    barycentric_map,
    cost_matrix,
    exact_ot_plan,
    monotone_matching,
    ot_cost_1d,
    ot_distance,
    quantile_map_1d,
    sinkhorn_plan,
)


def brute_force_cost(x: np.ndarray, y: np.ndarray) -> float:
    n = x.shape[0]
    C = ((x[:, None, :] - y[None, :, :]) ** 2).sum(axis=2)
    perms = np.array(list(permutations(range(n))))
    return float(C[np.arange(n), perms].sum(axis=1).min() / n)


def grid_measure(n: int, offset: float = 0.0) -> EmpiricalMeasure:
    return EmpiricalMeasure.uniform(np.column_stack([np.arange(n, dtype=float) + offset, np.zeros(n)]))


def test_measure_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        EmpiricalMeasure.uniform(np.empty((0, 2)))
    with pytest.raises(InvalidInputError):
        EmpiricalMeasure(np.zeros((2, 1)), np.array([0.5, 0.6]))
    with pytest.raises(InvalidInputError):
        EmpiricalMeasure(np.zeros((2, 1)), np.array([1.5, -0.5]))
    with pytest.raises(InvalidInputError):
        EmpiricalMeasure.uniform(np.array([[0.0], [np.nan]]))
    with pytest.raises(DimensionMismatchError):
        EmpiricalMeasure(np.zeros((3, 1)), np.array([0.5, 0.5]))


def test_measure_is_read_only():
    m = EmpiricalMeasure.uniform(np.arange(4.0))
    with pytest.raises(ValueError):
        m.points[0, 0] = 1.0
    assert m.d == 1 and m.n == 4
    assert m.is_uniform


def test_subsample_renormalizes_weights():
    m = EmpiricalMeasure(np.arange(5.0), np.array([0.1, 0.2, 0.3, 0.2, 0.2]))
    sub = m.subsample(3, np.random.default_rng(0))
    assert sub.n == 3
    assert sub.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert m.subsample(10, np.random.default_rng(0)) is m


def test_single_atom_cost():
    a = EmpiricalMeasure.uniform([[0.0, 0.0]])
    b = EmpiricalMeasure.uniform([[3.0, 4.0]])
    plan, cost = exact_ot_plan(a, b)
    assert cost == pytest.approx(25.0)
    assert plan.coupling[0, 0] == pytest.approx(1.0)


def test_two_point_examples():
    a = EmpiricalMeasure.uniform([[0.0], [1.0]])
    assert ot_distance(a, a) == 0.0
    assert ot_distance(a, EmpiricalMeasure.uniform([[1.0], [2.0]])) == pytest.approx(1.0)


def test_cost_matrix_is_exact_on_identical_points():
    rng = np.random.default_rng(1)
    m = EmpiricalMeasure.uniform(rng.normal(size=(6, 3)) * 1e4)
    assert np.all(np.diag(cost_matrix(m, m)) == 0.0)


def test_exact_plan_matches_permutation_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 8))
        d = int(rng.integers(1, 4))
        x, y = rng.normal(size=(n, d)), rng.normal(size=(n, d))
        plan, cost = exact_ot_plan(EmpiricalMeasure.uniform(x), EmpiricalMeasure.uniform(y))
        assert cost == pytest.approx(brute_force_cost(x, y), abs=1e-9)
        assert plan.marginal_violation() <= 1e-8


def test_exact_plan_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        exact_ot_plan(EmpiricalMeasure.uniform(np.zeros((2, 2))), EmpiricalMeasure.uniform(np.zeros((2, 3))))


def test_closed_form_1d_matches_exact_solver():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n, m = int(rng.integers(1, 51)), int(rng.integers(1, 51))
        wx = rng.integers(1, 10, size=n).astype(float)
        wy = rng.integers(1, 10, size=m).astype(float)
        mu = EmpiricalMeasure(rng.normal(size=n), wx / wx.sum())
        nu = EmpiricalMeasure(rng.normal(loc=1.0, size=m), wy / wy.sum())
        assert ot_cost_1d(mu, nu) == pytest.approx(exact_ot_plan(mu, nu)[1], abs=1e-9)


def test_quantile_map_on_support_and_off_support():
    drift = quantile_map_1d(EmpiricalMeasure.uniform([0.0, 1.0, 2.0]), EmpiricalMeasure.uniform([10.0, 20.0, 30.0]))
    np.testing.assert_array_equal(drift(np.array([0.0, 1.0, 2.0])), [10.0, 20.0, 30.0])
    # between atoms the cdf steps down to the lower atom; outside the range it clamps
    assert drift(0.5) == 10.0
    assert drift(-5.0) == 10.0
    assert drift(100.0) == 30.0


def test_quantile_map_respects_weights():
    drift = quantile_map_1d(EmpiricalMeasure(np.array([0.0, 1.0]), np.array([0.25, 0.75])), EmpiricalMeasure.uniform([5.0, 6.0]))
    assert drift(0.0) == 5.0
    assert drift(1.0) == 6.0


def test_quantile_map_is_monotone():
    rng = np.random.default_rng(3)
    drift = quantile_map_1d(EmpiricalMeasure.uniform(rng.normal(size=40)), EmpiricalMeasure.uniform(rng.gamma(2.0, size=25)))
    s = np.linspace(-4, 4, 500)
    assert np.all(np.diff(drift(s)) >= 0)


def test_one_dimensional_maps_reject_multivariate():
    flat, square = EmpiricalMeasure.uniform([[0.0], [1.0]]), EmpiricalMeasure.uniform(np.zeros((2, 2)))
    with pytest.raises(DimensionMismatchError):
        quantile_map_1d(square, square)
    with pytest.raises(DimensionMismatchError):
        quantile_map_1d(flat, square)
    with pytest.raises(DimensionMismatchError):
        ot_cost_1d(square, flat)


def test_monotone_matching_pairs_ranks():
    matched = monotone_matching(np.array([3.0, 1.0, 2.0]), np.array([10.0, 30.0, 20.0]))
    np.testing.assert_array_equal(matched, [1, 0, 2])


def test_translation_and_scaling_of_cost():
    rng = np.random.default_rng(11)
    x = EmpiricalMeasure.uniform(rng.normal(size=(8, 2)))
    y = EmpiricalMeasure.uniform(rng.normal(size=(8, 2)))
    v = np.array([1.5, -2.0])
    assert ot_distance(x, x.translate(v)) == pytest.approx(float(v @ v))
    scaled = ot_distance(EmpiricalMeasure.uniform(3 * x.points), EmpiricalMeasure.uniform(3 * y.points))
    assert scaled == pytest.approx(9 * ot_distance(x, y))


def test_barycentric_map_of_diagonal_plan():
    target = EmpiricalMeasure.uniform([[1.0, 2.0], [3.0, 4.0]])
    plan = TransportPlan(np.diag([0.5, 0.5]), [0.5, 0.5], [0.5, 0.5])
    np.testing.assert_array_equal(barycentric_map(plan, target), target.points)


def test_barycentric_map_averages_split_mass():
    target = EmpiricalMeasure.uniform([[0.0], [2.0]])
    plan = TransportPlan(np.array([[0.25, 0.25], [0.25, 0.25]]), [0.5, 0.5], [0.5, 0.5])
    np.testing.assert_allclose(barycentric_map(plan, target), [[1.0], [1.0]])


def test_barycentric_map_errors():
    target = EmpiricalMeasure.uniform([[0.0], [2.0], [3.0]])
    with pytest.raises(DimensionMismatchError):
        barycentric_map(TransportPlan(np.diag([0.5, 0.5]), [0.5, 0.5], [0.5, 0.5]), target)
    empty_row = TransportPlan(np.array([[0.0, 0.0], [0.5, 0.5]]), [0.5, 0.5], [0.5, 0.5])
    with pytest.raises(InvalidInputError):
        barycentric_map(empty_row, EmpiricalMeasure.uniform([[0.0], [1.0]]))


@pytest.mark.parametrize("lam", [10.0, 30.0, 90.0])
def test_sinkhorn_plan_contract(lam):
    rng = np.random.default_rng(int(lam))
    mu = EmpiricalMeasure.uniform(rng.normal(size=(60, 2)) * 5)
    nu = EmpiricalMeasure.uniform(rng.normal(loc=2.0, size=(50, 2)) * 5)
    result = sinkhorn_plan(mu, nu, lam)
    assert result.converged
    assert result.marginal_violation <= 1e-6
    assert result.cost >= exact_ot_plan(mu, nu)[1] - 1e-9


@pytest.mark.parametrize("seed", range(8))
def test_sinkhorn_small_lambda_approaches_exact_cost(seed):
    rng = np.random.default_rng(seed)
    points = rng.normal(size=(10, 2)) * 3
    mu, nu = EmpiricalMeasure.uniform(points), EmpiricalMeasure.uniform(rng.normal(size=(10, 2)) * 3 + 1)
    result = sinkhorn_plan(mu, nu, 0.01)
    assert result.converged
    assert result.marginal_violation <= 1e-6
    assert result.cost == pytest.approx(exact_ot_plan(mu, nu)[1], abs=1e-3)


def test_sinkhorn_large_lambda_tends_to_independent_coupling():
    mu = EmpiricalMeasure.uniform([[0.0, 0.0], [1.0, 0.0]])
    nu = EmpiricalMeasure.uniform([[0.0, 1.0], [3.0, 2.0]])
    result = sinkhorn_plan(mu, nu, 1e6)
    np.testing.assert_allclose(result.plan.coupling, np.full((2, 2), 0.25), atol=1e-5)
    images = barycentric_map(result.plan, nu)
    np.testing.assert_allclose(images, np.tile(nu.points.mean(axis=0), (2, 1)), atol=1e-4)


def test_sinkhorn_reports_non_convergence(caplog):
    rng = np.random.default_rng(5)
    mu = EmpiricalMeasure.uniform(rng.normal(size=(30, 2)))
    nu = EmpiricalMeasure.uniform(rng.normal(size=(30, 2)) + 3)
    result = sinkhorn_plan(mu, nu, 0.001, max_iter=1)
    assert not result.converged
    assert result.marginal_violation > 1e-6
    assert result.iterations >= 1
    assert "did not converge" in caplog.text


def test_sinkhorn_rejects_nonpositive_lambda():
    m = grid_measure(3)
    with pytest.raises(InvalidInputError):
        sinkhorn_plan(m, m, 0.0)
