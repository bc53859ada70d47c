import numpy as np
import pytest
from pydantic import ValidationError

from app.models.problem_models import Box, Problem
from app.services.problem_registry import is_strictly_feasible, registry_get, registry_names
from app.utils.helpers import finite_difference_jacobian
from app.utils.validators import ConfigurationError, InputError, ProblemLookupError


def test_registry_lists_builtin_problems():
    assert registry_names() == ["disk2d", "ex51", "ex52"]


def test_ex51_objectives_follow_parameter():
    problem = registry_get("ex51", {"a": 4.0}).problem
    np.testing.assert_allclose(problem.f([2.0]), [2.0, -8.0])
    np.testing.assert_allclose(problem.g([2.0]), [-2.0])


def test_ex52_objectives():
    problem = registry_get("ex52").problem
    np.testing.assert_allclose(problem.f([0.5]), [1.25, 0.25])
    np.testing.assert_allclose(problem.f([-1.0]), [2.0, 4.0])


def test_unknown_name_lists_available_problems():
    with pytest.raises(ProblemLookupError) as excinfo:
        registry_get("zdt1")
    assert "ex52" in str(excinfo.value)
    assert isinstance(excinfo.value, LookupError)


def test_unknown_parameter_is_configuration_error():
    with pytest.raises(ConfigurationError):
        registry_get("ex52", {"a": 1.0})


def test_nonpositive_a_is_rejected():
    with pytest.raises(ConfigurationError):
        registry_get("ex51", {"a": 0.0})


@pytest.mark.parametrize("t,expected", [(1.0, True), (1e-9, True), (0.0, False), (-1.0, False)])
def test_ex51_strict_feasibility(ex51, t, expected):
    assert is_strictly_feasible(ex51, [t]) is expected


def test_disk_boundary_is_feasible_but_not_strictly(disk2d):
    assert not is_strictly_feasible(disk2d, [1.0, 0.0])
    assert disk2d.is_feasible([1.0, 0.0])
    assert not disk2d.is_feasible([1.0, 0.1])


def test_dimension_mismatch_is_input_error(disk2d):
    with pytest.raises(InputError):
        is_strictly_feasible(disk2d, [0.0])


def test_registry_starts_are_strictly_feasible():
    for name in registry_names():
        problem = registry_get(name).problem
        assert is_strictly_feasible(problem, problem.strictly_feasible_start)


def test_equality_constraints_are_rejected():
    with pytest.raises(ValidationError):
        Problem(n=1, m=1, p=1, objective=lambda x: x, constraints=lambda x: -x,
                equality_constraints=lambda x: x)


def test_infeasible_start_is_rejected():
    with pytest.raises(ValidationError):
        Problem(n=1, m=1, p=1, objective=lambda x: x, constraints=lambda x: -x,
                strictly_feasible_start=[-1.0])


def test_jacobians_fall_back_to_finite_differences(disk2d):
    numeric = Problem(n=2, m=2, p=1, objective=disk2d.objective, constraints=disk2d.constraints)
    x = np.array([0.3, -0.4])
    assert not numeric.has_analytic_jacobians
    np.testing.assert_allclose(numeric.jac_f(x), disk2d.jac_f(x), atol=1e-8)
    np.testing.assert_allclose(numeric.jac_g(x), disk2d.jac_g(x), atol=1e-8)


def test_box_interior_and_slacks():
    box = Box(lower=[0.2], upper=[0.8])
    assert box.contains_interior([0.5])
    assert not box.contains_interior([0.8])
    np.testing.assert_allclose(box.slacks([0.5]), [0.3, 0.3])


@pytest.mark.parametrize("name", registry_names())
def test_analytic_jacobians_match_finite_differences(name):
    problem = registry_get(name).problem
    assert problem.has_analytic_jacobians
    rng = np.random.default_rng(11)
    points = []
    while len(points) < 20:
        x = rng.uniform(-3.0, 3.0, size=problem.n)
        if is_strictly_feasible(problem, x):
            points.append(x)
    for x in points:
        np.testing.assert_allclose(problem.jac_f(x), finite_difference_jacobian(problem.f, x), rtol=1e-5, atol=1e-6)
        np.testing.assert_allclose(problem.jac_g(x), finite_difference_jacobian(problem.g, x), rtol=1e-5, atol=1e-6)


def test_finite_difference_step_must_be_positive(disk2d):
    with pytest.raises(InputError):
        finite_difference_jacobian(disk2d.f, [0.1, 0.2], h=0.0)
