import logging

import numpy as np
import pytest

from wls.core.design import check_general_position_hint, residuals
from wls.core.errors import ContractViolation, DegenerateScale
from wls.core.scale import ScaleMode, compute_cstar
from wls.core.types import Dataset


def test_dataset_reshapes_single_carrier_column() -> None:
    d = Dataset.from_arrays([0.0, 1.0, 2.0], [1.0, 2.0, 3.0])

    assert d.x.shape == (3, 1)
    assert (d.n, d.p) == (3, 2)
    assert not d.x.flags.writeable
    assert np.array_equal(d.design_matrix()[:, 0], np.ones(3))


def test_dataset_rejects_mismatch_and_non_finite_entries() -> None:
    with pytest.raises(ContractViolation, match="row count"):
        Dataset(x=np.zeros((3, 1)), y=np.zeros(2))
    with pytest.raises(ContractViolation, match="finite"):
        Dataset(x=np.zeros((2, 1)), y=np.array([0.0, np.nan]))


def test_intercept_only_dataset_has_p_one() -> None:
    d = Dataset.intercept_only([1.0, 2.0, 3.0])

    assert d.p == 1
    assert d.design_matrix().shape == (3, 1)


def test_replace_rows_overwrites_full_observations() -> None:
    d = Dataset.from_arrays([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
    moved = d.replace_rows([0, 2], np.array([9.0, -9.0]))

    assert np.array_equal(moved.x[:, 0], [9.0, 1.0, 9.0])
    assert np.array_equal(moved.y, [-9.0, 1.0, -9.0])
    assert np.array_equal(d.y, [0.0, 1.0, 2.0])


def test_residuals_examples() -> None:
    line = Dataset.from_arrays([0.0, 1.0], [0.0, 1.0])
    assert np.array_equal(residuals(line, [0.0, 1.0]), [0.0, 0.0])
    assert np.array_equal(residuals(line, [0.0, 0.0]), line.y)

    single = Dataset.from_arrays([2.0], [5.0])
    assert np.array_equal(residuals(single, [1.0, 1.0]), [2.0])


def test_residuals_reject_wrong_length() -> None:
    d = Dataset.from_arrays([0.0, 1.0], [0.0, 1.0])
    with pytest.raises(ContractViolation, match="length p=2"):
        residuals(d, [1.0, 2.0, 3.0])


def test_residuals_are_affine_in_coefficients() -> None:
    rng = np.random.default_rng(3)
    d = Dataset(x=rng.normal(size=(20, 3)), y=rng.normal(size=20))
    b1 = rng.normal(size=4)
    b2 = rng.normal(size=4)

    lhs = residuals(d, b1 + b2)
    rhs = residuals(d, b1) - d.design_matrix() @ b2
    assert np.allclose(lhs, rhs, rtol=0.0, atol=1e-12)


def test_median_y_squared_examples() -> None:
    mode = ScaleMode.median_y_squared()

    assert compute_cstar(Dataset.intercept_only([1.0, 2.0, 3.0]), mode) == 4.0
    assert compute_cstar(Dataset.intercept_only([1.0, 2.0, 3.0, 4.0]), mode) == 6.5
    with pytest.raises(DegenerateScale):
        compute_cstar(Dataset.intercept_only([0.0, 0.0, 0.0]), mode)


def test_median_y_squared_invariances() -> None:
    rng = np.random.default_rng(5)
    y = rng.normal(size=31)
    mode = ScaleMode.median_y_squared()
    base = compute_cstar(Dataset.intercept_only(y), mode)

    assert compute_cstar(Dataset.intercept_only(-y), mode) == base
    assert compute_cstar(Dataset.intercept_only(rng.permutation(y)), mode) == base
    assert compute_cstar(Dataset.intercept_only(3.0 * y), mode) == pytest.approx(9.0 * base)


def test_residual_scale_needs_reference_fit() -> None:
    d = Dataset.from_arrays([0.0, 1.0, 2.0], [1.0, 2.0, 4.0])
    mode = ScaleMode.median_initial_residual_squared()

    with pytest.raises(ContractViolation, match="reference fit"):
        compute_cstar(d, mode)
    assert compute_cstar(d, mode, [0.0, 0.0]) == 4.0
    with pytest.raises(DegenerateScale):
        compute_cstar(d, mode, [1.0, 1.0])


def test_scale_floor_logs_instead_of_failing(caplog: pytest.LogCaptureFixture) -> None:
    d = Dataset.intercept_only([0.0, 0.0, 0.0, 2.0])

    with caplog.at_level(logging.WARNING, logger="wls.core.scale"):
        cstar = compute_cstar(d, ScaleMode.median_y_squared(), floor=True)

    assert cstar == pytest.approx(1e-12 * 5.0)
    assert "scale_floor_applied" in caplog.text


def test_general_position_hint() -> None:
    flat = Dataset.from_arrays([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])
    spread = Dataset.from_arrays([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    duplicated = Dataset.from_arrays([1.0, 1.0], [2.0, 2.0])

    assert not check_general_position_hint(flat)
    assert "rank 1 < p=2" in check_general_position_hint(flat).diagnostic
    assert check_general_position_hint(spread)
    assert not check_general_position_hint(duplicated)
