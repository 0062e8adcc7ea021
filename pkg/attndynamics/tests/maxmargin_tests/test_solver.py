import numpy as np
import pytest

from attndynamics.exceptions import (
    ConvergenceError,
    NotSeparableError,
    ValidationError
)
from attndynamics.maxmargin import (
    MarginSolution,
    PooledDataset,
    pool_dataset,
    solve_max_margin,
    support_subset_oracle
)
from attndynamics.maxmargin.oracle import MAX_ORACLE_POINTS
from attndynamics.maxmargin.solver import polish, within_tolerance
from attndynamics.tests.testing_utils import random_separable_pooled

TOL = 1e-8


def assert_certified(solution, pooled, tol=TOL):
    u = solution.u_star
    margins = pooled.labels * pooled.points.dot(u)
    assert margins.min() >= 1 - tol
    combined = pooled.points.T.dot(solution.alpha * pooled.labels)
    norm = np.linalg.norm(u)
    assert np.linalg.norm(u - combined) <= tol * max(1.0, norm)
    assert np.all(solution.alpha >= 0)
    assert np.max(solution.alpha * np.abs(margins - 1)) <= tol * max(1.0, solution.alpha.sum())
    gap = 0.5 * u.dot(u) - (solution.alpha.sum() - 0.5 * combined.dot(combined))
    assert abs(gap) <= tol * max(1.0, 0.5 * norm ** 2)


def test_two_points():
    pooled = PooledDataset(np.eye(2), [1, -1])
    solution = solve_max_margin(pooled)
    np.testing.assert_allclose(solution.u_star, [1.0, -1.0], atol=1e-8)
    assert solution.margin == pytest.approx(1 / np.sqrt(2), abs=1e-8)
    assert solution.support == [0, 1]
    assert_certified(solution, pooled)


def test_single_point():
    pooled = PooledDataset([[1.0, 0.0]], [1])
    solution = solve_max_margin(pooled)
    np.testing.assert_allclose(solution.u_star, [1.0, 0.0], atol=1e-8)
    assert solution.margin == pytest.approx(1.0, abs=1e-8)
    oracle = support_subset_oracle(pooled)
    np.testing.assert_allclose(oracle.u_star, [1.0, 0.0], atol=1e-12)


@pytest.mark.parametrize('seed', range(20))
def test_solver_matches_oracle(seed):
    pooled = random_separable_pooled(seed)
    solution = solve_max_margin(pooled)
    oracle = support_subset_oracle(pooled)
    assert_certified(solution, pooled)
    assert abs(solution.norm - oracle.norm) <= 1e-6
    np.testing.assert_allclose(solution.u_star, oracle.u_star, atol=1e-5)


def test_oracle_collinear_points():
    pooled = PooledDataset([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]], [1, 1, 1])
    oracle = support_subset_oracle(pooled)
    assert list(oracle.support) == [0]
    np.testing.assert_allclose(oracle.u_star, [0.5, 0.5], atol=1e-12)


def test_oracle_size_limit():
    pooled = random_separable_pooled(0, n=MAX_ORACLE_POINTS + 1, d=2)
    with pytest.raises(ValidationError, match='at most'):
        support_subset_oracle(pooled)


def test_coinciding_points_with_opposite_labels():
    pooled = PooledDataset([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]], [1, 1, -1])
    with pytest.raises(NotSeparableError, match='coincide'):
        solve_max_margin(pooled)
    with pytest.raises(NotSeparableError):
        support_subset_oracle(pooled)


def test_zero_point_is_not_separable():
    with pytest.raises(NotSeparableError, match='zero vector'):
        solve_max_margin(PooledDataset([[0.0, 0.0], [1.0, 0.0]], [1, -1]))


def test_dual_growth_means_not_separable():
    # u1 > 0 and u2 > 0 cannot give u1 + u2 < 0; small points make the duals grow fast
    points = 1e-4 * np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    pooled = PooledDataset(points, [1, 1, -1])
    with pytest.raises(NotSeparableError, match='diverged'):
        solve_max_margin(pooled, max_updates=10 ** 6)


def test_update_cap_on_inseparable_data():
    pooled = PooledDataset([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [1, 1, -1])
    with pytest.raises(ConvergenceError, match='No KKT certificate'):
        solve_max_margin(pooled, max_updates=300)


def test_slow_dual_growth_is_not_divergence():
    # nearly parallel points of opposite labels need a large separator
    points = np.array([[1.0, 0.0], [1.0, 1e-2], [1.0, -1e-2]])
    pooled = PooledDataset(points, [1, 1, -1])
    solution = solve_max_margin(pooled)
    assert solution.certified(TOL)
    assert solution.min_margin >= 1 - TOL
    oracle = support_subset_oracle(pooled)
    assert solution.norm == pytest.approx(oracle.norm, rel=1e-6)


def test_polish_certifies_a_rough_iterate():
    pooled = random_separable_pooled(5)
    exact = support_subset_oracle(pooled)
    rough_alpha = exact.alpha + 1e-3 * (exact.alpha > 0)
    rough_u = pooled.points.T.dot(rough_alpha * pooled.labels)
    polished = polish(pooled.points, pooled.labels, rough_alpha, rough_u, TOL)
    assert polished is not None
    u, alpha, residuals = polished
    np.testing.assert_allclose(u, exact.u_star, atol=1e-6)
    assert np.all(alpha >= 0)
    assert within_tolerance(residuals, np.linalg.norm(u), alpha.sum(), TOL)


def test_certification_is_relative_to_scale():
    residuals = {'feasibility': 0.0, 'stationarity': 1e-6,
                 'complementarity': 1e-2, 'duality_gap': 1e-1}
    assert within_tolerance(residuals, 7e3, 4.9e7, 1e-8)
    assert not within_tolerance(residuals, 1.0, 1.0, 1e-8)
    assert not within_tolerance(dict(residuals, feasibility=1e-7), 7e3, 4.9e7, 1e-8)


def test_empty_input():
    with pytest.raises(ValidationError):
        solve_max_margin(PooledDataset(np.zeros((0, 2)), []))


def test_reference_pooled_datasets(even_pairs_run, parity_run, even_pairs_dataset, parity_dataset):
    for run, dataset in ((even_pairs_run, even_pairs_dataset), (parity_run, parity_dataset)):
        pooled = pool_dataset(run.checkpoint_at(100), dataset, step=100)
        solution = solve_max_margin(pooled)
        assert solution.certified(TOL)
        margins = pooled.labels * pooled.points.dot(solution.u_star)
        assert margins.min() >= 1 - TOL
        assert np.all(solution.alpha >= 0)
        assert solution.alpha.sum() == pytest.approx(solution.norm ** 2, rel=1e-6)


def test_larger_scale_pooled_dataset(even_pairs_lambda10_run, even_pairs_dataset):
    pooled = pool_dataset(even_pairs_lambda10_run.checkpoint_at(100), even_pairs_dataset)
    solution = solve_max_margin(pooled)
    assert solution.certified(TOL)
    assert solution.min_margin >= 1 - TOL


def test_reference_subsample_matches_oracle(even_pairs_run, even_pairs_dataset):
    pooled = pool_dataset(even_pairs_run.checkpoint_at(100), even_pairs_dataset)
    rng = np.random.RandomState(7)
    sample = pooled.subset(sorted(rng.choice(len(pooled), 6, replace=False)))
    solution = solve_max_margin(sample)
    oracle = support_subset_oracle(sample)
    assert abs(solution.norm - oracle.norm) <= 1e-6


def test_solution_dictionary_round_trip():
    pooled = random_separable_pooled(1)
    solution = solve_max_margin(pooled)
    data = solution.to_dictionary()
    assert set(['u_star', 'margin', 'support_indices', 'kkt']) <= set(data)
    assert sorted(data['kkt']) == ['complementarity', 'feasibility', 'stationarity']
    loaded = MarginSolution.from_dictionary(data)
    np.testing.assert_array_equal(loaded.u_star, solution.u_star)
    assert loaded.support == solution.support
    assert loaded.margin == solution.margin
