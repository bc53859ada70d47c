import numpy as np
import pytest

from app.models.oracle_models import Classification, Grid, WeightingOutcome
from app.models.problem_models import Problem
from app.services.problem_registry import registry_get
from app.utils.validators import CapabilityError, ConfigurationError, InputError, PreconditionError


@pytest.fixture
def flat_problem():
    """f(t) = (t, 1) on [0, 1]: every point weakly Pareto, only t = 0 Pareto"""
    return Problem(
        name="flat",
        n=1, m=2, p=2,
        objective=lambda x: np.array([x[0], 1.0]),
        constraints=lambda x: np.array([-x[0], x[0] - 1.0]),
        objective_jacobian=lambda x: np.array([[1.0], [0.0]]),
        constraint_jacobian=lambda x: np.array([[-1.0], [1.0]]),
        strictly_feasible_start=[0.5],
    )


def ex52_grid() -> Grid:
    return Grid(bounds=[(-2.0, 3.0)], counts=[501])


def test_ex52_nondominated_points_cover_pareto_interval(oracle_service, ex52):
    points = oracle_service.brute_force_nondominated(ex52, ex52_grid())
    assert 99 <= len(points) <= 103
    assert points.min() >= -0.01
    assert points.max() <= 1.01


def test_every_feasible_ex51_point_is_nondominated(oracle_service, ex51):
    points = oracle_service.brute_force_nondominated(ex51, Grid(bounds=[(0.0, 10.0)], counts=[101]))
    assert len(points) == 101


def test_infeasible_grid_points_are_dropped(oracle_service, ex51):
    points = oracle_service.feasible_grid(ex51, Grid(bounds=[(-1.0, 1.0)], counts=[21]))
    assert len(points) == 11
    assert points.min() >= 0.0


def test_single_point_grid(oracle_service, ex52):
    points = oracle_service.brute_force_nondominated(ex52, Grid(bounds=[(0.5, 0.5)], counts=[1]))
    np.testing.assert_allclose(points, [[0.5]])


def test_nondominated_points_are_mutually_nondominated(oracle_service, disk2d):
    points = oracle_service.brute_force_nondominated(disk2d, Grid(bounds=[(-1.0, 1.0)] * 2, counts=[41, 41]))
    values = oracle_service.objective_values(disk2d, points)
    for value in values:
        better = np.all(values <= value, axis=1) & np.any(values < value, axis=1)
        assert not np.any(better)
    assert np.all(points <= 0.0 + 1e-12)


def test_grid_over_cap_is_rejected(oracle_service, disk2d):
    with pytest.raises(ConfigurationError):
        oracle_service.brute_force_nondominated(disk2d, Grid(bounds=[(-1.0, 1.0)] * 2, counts=[2000, 2000]))


def test_single_point_dimension_needs_equal_bounds(oracle_service, ex52):
    with pytest.raises(ConfigurationError):
        oracle_service.feasible_grid(ex52, Grid(bounds=[(0.0, 1.0)], counts=[1]))


def test_grid_dimension_must_match_problem(oracle_service, disk2d):
    with pytest.raises(InputError):
        oracle_service.feasible_grid(disk2d, ex52_grid())


@pytest.mark.parametrize("t,expected", [
    (0.5, Classification.APPROX_PARETO),
    (2.0, Classification.DOMINATED),
    (-1.0, Classification.DOMINATED),
])
def test_ex52_classification(oracle_service, ex52, t, expected):
    assert oracle_service.classify_point(ex52, [t], ex52_grid(), 1e-3) == expected


def test_weakly_pareto_point_is_flagged(oracle_service, flat_problem):
    grid = Grid(bounds=[(0.0, 1.0)], counts=[101])
    assert oracle_service.classify_point(flat_problem, [0.5], grid, 1e-3) == Classification.APPROX_WEAK_PARETO_ONLY
    assert oracle_service.classify_point(flat_problem, [0.0], grid, 1e-3) == Classification.APPROX_PARETO


def test_zero_tolerance_never_marks_pareto_points_dominated(oracle_service, ex52):
    candidates = [[t] for t in (0.0, 0.123, 0.5, 0.777, 1.0)]
    results = oracle_service.classify_points(ex52, candidates, ex52_grid(), 0.0)
    assert Classification.DOMINATED not in results


def test_infeasible_candidate_is_rejected(oracle_service, ex52):
    with pytest.raises(PreconditionError):
        oracle_service.classify_point(ex52, [-3.0], ex52_grid(), 1e-3)


def test_weighting_unbounded_below_threshold(oracle_service, ex51):
    result = oracle_service.weighting_method_solve(ex51, [0.5, 0.5])
    assert result.outcome == WeightingOutcome.UNBOUNDED


def test_weighting_minimizer_above_threshold(oracle_service, ex51):
    result = oracle_service.weighting_method_solve(ex51, [0.95, 0.05])
    assert result.outcome == WeightingOutcome.MINIMIZER
    # 0.5 t + 1e-8 / t is minimal at sqrt(2e-8)
    assert result.x[0] == pytest.approx(np.sqrt(2e-8), rel=1e-2)


def test_weighting_on_disk_reaches_boundary(oracle_service, disk2d, recorder):
    result = oracle_service.weighting_method_solve(disk2d, [0.5, 0.5], callback=recorder)
    assert result.outcome == WeightingOutcome.MINIMIZER
    np.testing.assert_allclose(result.x, [-np.sqrt(0.5), -np.sqrt(0.5)], atol=1e-2)
    assert recorder.infeasible(disk2d) == []


def test_weighting_budget_is_reported(oracle_service, disk2d):
    result = oracle_service.weighting_method_solve(disk2d, [0.5, 0.5], budget=1)
    assert result.outcome == WeightingOutcome.BUDGET_EXHAUSTED
    assert result.iterations == 1


@pytest.mark.parametrize("budget", [0, -5])
def test_weighting_budget_must_be_positive(oracle_service, disk2d, budget):
    with pytest.raises(InputError):
        oracle_service.weighting_method_solve(disk2d, [0.5, 0.5], budget=budget)


@pytest.mark.parametrize("alpha", [[0.7, 0.7], [1.2, -0.2], [1.0]])
def test_weights_off_simplex_are_rejected(oracle_service, ex51, alpha):
    with pytest.raises(InputError):
        oracle_service.weighting_method_solve(ex51, alpha)


def test_failure_fraction_tracks_threshold(oracle_service):
    problem = registry_get("ex51", {"a": 99.0}).problem
    assert oracle_service.weighting_failure_fraction(problem, 101) == pytest.approx(0.99, abs=0.02)


def test_weighting_never_fails_on_disk(oracle_service, disk2d):
    assert oracle_service.weighting_failure_fraction(disk2d, 11) == 0.0


def test_weighting_sweep_needs_two_objectives(oracle_service):
    problem = Problem(n=1, m=3, p=1, objective=lambda x: np.array([x[0], -x[0], 2 * x[0]]),
                      constraints=lambda x: np.array([-x[0]]), strictly_feasible_start=[1.0])
    with pytest.raises(CapabilityError):
        oracle_service.weighting_sweep(problem, 11)


def test_weighting_sweep_needs_grid(oracle_service, ex51):
    with pytest.raises(InputError):
        oracle_service.weighting_sweep(ex51, 1)
