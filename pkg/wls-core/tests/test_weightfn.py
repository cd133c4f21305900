import math
from collections.abc import Callable

import numpy as np
import pytest

from wls.core.errors import ContractViolation
from wls.weightfn.weights import (
    WeightParams,
    alpha_star,
    psi,
    tail_constant,
    weight,
    weight_d1,
    weight_d2,
)

DEFAULT = WeightParams(k=5.0, c=100.0)


def _central(func: Callable[[float], float], x: float, h: float) -> float:
    return (func(x + h) - func(x - h)) / (2.0 * h)


def test_weight_examples() -> None:
    assert weight(DEFAULT, 50.0) == 1.0
    assert weight(DEFAULT, 100.0) == 1.0
    expected = (math.exp(-1.25) - math.exp(-5.0)) / (1.0 - math.exp(-5.0))
    assert weight(DEFAULT, 200.0) == pytest.approx(expected, rel=1e-12)
    assert weight(DEFAULT, 200.0) == pytest.approx(0.28166, abs=1e-5)


def test_weight_is_even_and_bounded() -> None:
    grid = np.concatenate([np.linspace(0.0, 150.0, 50), np.geomspace(150.0, 1e12, 200)])

    values = weight(DEFAULT, grid)

    assert np.all(values > 0.0)
    assert np.all(values <= 1.0)
    assert np.array_equal(values, weight(DEFAULT, -grid))


def test_weight_d1_examples() -> None:
    assert weight_d1(DEFAULT, 50.0) == 0.0
    assert weight_d1(DEFAULT, 100.0 + 1e-9) == pytest.approx(0.0, abs=1e-11)
    analytic = weight_d1(DEFAULT, 200.0)
    numeric = _central(lambda x: weight(DEFAULT, x), 200.0, 1e-6)

    assert analytic == pytest.approx(-3.6057e-3, rel=1e-4)
    assert analytic == pytest.approx(numeric, rel=1e-6)


def test_weight_d2_examples() -> None:
    assert weight_d2(DEFAULT, 50.0) == 0.0
    assert weight_d2(DEFAULT, 100.0) == 0.0
    numeric = _central(lambda x: weight_d1(DEFAULT, x), 200.0, 1e-4)

    assert weight_d2(DEFAULT, 200.0) == pytest.approx(numeric, rel=1e-5)
    assert abs(weight_d2(DEFAULT, 1e9)) < 1e-20


def test_weight_d2_jumps_to_alpha_star_over_c_cubed_at_cutoff() -> None:
    right_limit = weight_d2(DEFAULT, 100.0 * (1.0 + 1e-12))

    assert right_limit == pytest.approx(alpha_star(DEFAULT) / 100.0**3, rel=1e-6)


def test_derivatives_match_finite_differences_on_outer_branch() -> None:
    rng = np.random.default_rng(11)
    points = rng.uniform(100.5, 1e4, size=200)

    for x in points:
        h = 1e-6 * x
        numeric_d1 = _central(lambda v: weight(DEFAULT, v), float(x), h)
        numeric_d2 = _central(lambda v: weight_d1(DEFAULT, v), float(x), h)
        assert weight_d1(DEFAULT, float(x)) == pytest.approx(numeric_d1, rel=1e-6)
        assert weight_d2(DEFAULT, float(x)) == pytest.approx(numeric_d2, rel=1e-5)


def test_weight_asymptotics() -> None:
    x = 1e6 * DEFAULT.c
    ratio = weight(DEFAULT, x) * math.expm1(DEFAULT.k) / (2.0 * DEFAULT.k * DEFAULT.c / x)

    assert ratio == pytest.approx(1.0, rel=1e-3)


def test_psi_examples() -> None:
    assert psi(DEFAULT, 1.0, 3.0) == 9.0
    assert psi(DEFAULT, 2.0, math.sqrt(200.0)) == pytest.approx(200.0)
    assert psi(DEFAULT, 1.0, 25.0) < psi(DEFAULT, 1.0, 20.0)


def test_tail_constant_examples() -> None:
    assert tail_constant(DEFAULT, 1.0) == pytest.approx(6.7837, abs=1e-4)
    assert tail_constant(DEFAULT, 4.0) == pytest.approx(4.0 * tail_constant(DEFAULT, 1.0))
    far = math.sqrt(1e6)
    assert psi(DEFAULT, 1.0, far) == pytest.approx(tail_constant(DEFAULT, 1.0), rel=1e-2)


def test_psi_is_strictly_decreasing_in_the_far_tail() -> None:
    r2 = np.geomspace(5.0 * DEFAULT.c, 1e8, 10_000)

    values = psi(DEFAULT, 1.0, np.sqrt(r2))

    assert np.all(np.diff(values) < 0.0)


def test_psi_rejects_non_positive_scale() -> None:
    with pytest.raises(ContractViolation, match="c\\* must be positive"):
        psi(DEFAULT, 0.0, 1.0)


def test_params_outside_suggested_range_warn() -> None:
    with pytest.warns(UserWarning, match="outside suggested"):
        WeightParams(k=20.0, c=100.0)
    with pytest.warns(UserWarning, match="outside suggested"):
        WeightParams(k=5.0, c=0.5)


def test_params_reject_non_positive_values() -> None:
    with pytest.raises(ValueError):
        WeightParams(k=0.0, c=100.0)
