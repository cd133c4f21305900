import numpy as np
import pytest

from wls.core.errors import ContractViolation
from wls.core.scale import ScaleMode
from wls.core.types import Dataset
from wls.objective.gradcheck import (
    check_derivatives,
    finite_difference_gradient,
    max_relative_error,
    near_branch_boundary,
)
from wls.objective.objective import ObjectiveContext
from wls.weightfn.weights import WeightParams, tail_constant

DEFAULT = WeightParams(k=5.0, c=100.0)


def _random_problem(seed: int) -> tuple[ObjectiveContext, np.ndarray]:
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 11))
    n = int(rng.integers(max(5, p + 1), 51))
    d = Dataset(x=rng.normal(size=(n, p - 1)), y=rng.normal(scale=3.0, size=n))
    ctx = ObjectiveContext(dataset=d, params=WeightParams(k=5.0, c=4.0), cstar=1.0)
    return ctx, rng.normal(size=p)


def test_intercept_only_hand_example() -> None:
    ctx = ObjectiveContext(dataset=Dataset.intercept_only([0.0]), params=DEFAULT, cstar=1.0)

    assert ctx.value([3.0]) == 9.0
    assert np.array_equal(ctx.gradient([3.0]), [6.0])
    assert np.array_equal(ctx.hessian([3.0]), [[2.0]])


def test_unit_weight_region_reduces_to_least_squares() -> None:
    rng = np.random.default_rng(2)
    d = Dataset(x=rng.normal(size=(25, 2)), y=rng.normal(size=25))
    ctx = ObjectiveContext(dataset=d, params=DEFAULT, cstar=1.0)
    beta = np.array([0.1, -0.2, 0.3])
    r = ctx.residuals(beta)
    design = d.design_matrix()

    assert np.all(r**2 <= DEFAULT.c)
    assert ctx.value(beta) == pytest.approx(float(r @ r), rel=1e-14)
    assert np.allclose(ctx.gradient(beta), -2.0 * design.T @ r, rtol=1e-13, atol=1e-13)
    assert np.allclose(ctx.hessian(beta), 2.0 * design.T @ design, rtol=1e-13)


def test_value_tends_to_n_times_tail_constant() -> None:
    d = Dataset.from_arrays([0.0, 1.0, 2.0, 3.0], [1.0, -1.0, 2.0, 0.5])
    ctx = ObjectiveContext(dataset=d, params=DEFAULT, cstar=1.0)

    far = ctx.value([1e7, 0.0])

    assert far == pytest.approx(4 * tail_constant(DEFAULT, 1.0), rel=1e-3)


def test_value_at_origin_is_bounded_by_sum_of_squares() -> None:
    y = np.array([0.5, 30.0, -40.0, 2.0, 100.0])
    ctx = ObjectiveContext(dataset=Dataset.intercept_only(y), params=DEFAULT, cstar=1.0)

    assert ctx.value([0.0]) <= float(y @ y)


def test_value_is_permutation_invariant() -> None:
    rng = np.random.default_rng(8)
    x = rng.normal(size=(30, 2))
    y = rng.normal(scale=20.0, size=30)
    order = rng.permutation(30)
    beta = rng.normal(size=3)
    ctx = ObjectiveContext(dataset=Dataset(x=x, y=y), params=DEFAULT, cstar=1.0)
    shuffled = ObjectiveContext(
        dataset=Dataset(x=x[order], y=y[order]), params=DEFAULT, cstar=1.0
    )

    assert shuffled.value(beta) == pytest.approx(ctx.value(beta), rel=1e-13)


def test_derivatives_match_finite_differences_on_random_problems() -> None:
    checked = 0
    mixed = 0
    for seed in range(100):
        ctx, beta = _random_problem(seed)
        if near_branch_boundary(ctx, beta):
            continue
        u = ctx.scaled_squares(beta)
        if np.any(u <= ctx.params.c) and np.any(u > ctx.params.c):
            mixed += 1
        check = check_derivatives(ctx, beta)
        assert check.gradient_error < 1e-6, f"seed {seed}: {check.gradient_error}"
        assert check.hessian_error < 1e-5, f"seed {seed}: {check.hessian_error}"
        checked += 1

    assert checked >= 80
    assert mixed >= 60


def test_finite_difference_gradient_of_quadratic() -> None:
    grad = finite_difference_gradient(lambda b: float(b @ b), np.array([1.0, -2.0]))

    assert max_relative_error([2.0, -4.0], grad) < 1e-8


def test_from_dataset_freezes_scale() -> None:
    d = Dataset.intercept_only([1.0, 2.0, 3.0])

    ctx = ObjectiveContext.from_dataset(d, DEFAULT, ScaleMode.median_y_squared())

    assert ctx.cstar == 4.0
    assert np.array_equal(ctx.weights([0.0]), np.ones(3))


def test_context_rejects_non_positive_scale() -> None:
    with pytest.raises(ContractViolation, match="c\\*"):
        ObjectiveContext(dataset=Dataset.intercept_only([1.0]), params=DEFAULT, cstar=0.0)
