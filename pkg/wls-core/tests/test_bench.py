import io
import math

import numpy as np
import pytest

from wls.bench.export import format_summary, write_deviations_csv, write_study_csv
from wls.bench.generators import clean_line_dataset, gen_contaminated
from wls.bench.metrics import emse, relative_efficiency, squared_deviations
from wls.bench.probes import breakdown_probe, equivariance_probe
from wls.bench.spec import FixedBeta, JointNormalShift, SimulationSpec
from wls.bench.study import run_stability, run_study
from wls.core.errors import ContractViolation
from wls.core.scale import ScaleMode
from wls.core.types import Dataset
from wls.solvers.config import FitConfig
from wls.solvers.registry import LeastSquares, WeightedLeastSquares
from wls.weightfn.weights import WeightParams

FAST = FitConfig(lts_starts=40)


def _rows(d: Dataset) -> np.ndarray:
    return np.column_stack([d.x, d.y])


def test_contamination_replaces_exactly_m_rows() -> None:
    spec = SimulationSpec(n=50, p=5, epsilon=0.1, replications=1, seed=4)

    z = _rows(gen_contaminated(spec, 0))

    point = np.array([3.0, 3.0, 3.0, 3.0, -3.0])
    assert spec.contamination_count == 5
    assert int(np.sum(np.all(z == point, axis=1))) == 5


def test_no_contamination_at_zero_epsilon() -> None:
    spec = SimulationSpec(n=50, p=5, epsilon=0.0, replications=1)

    z = _rows(gen_contaminated(spec, 0))

    assert not np.any(np.all(z == spec.replacement_point, axis=1))


def test_generator_is_deterministic_per_replicate() -> None:
    spec = SimulationSpec(n=30, p=3, epsilon=0.2, replications=2, seed=11)

    assert np.array_equal(_rows(gen_contaminated(spec, 1)), _rows(gen_contaminated(spec, 1)))
    assert not np.array_equal(_rows(gen_contaminated(spec, 0)), _rows(gen_contaminated(spec, 1)))


def test_generator_reproduces_equicorrelation() -> None:
    spec = SimulationSpec(n=5000, p=5, epsilon=0.0, rho=0.9, replications=1, seed=1)

    corr = np.corrcoef(_rows(gen_contaminated(spec, 0)), rowvar=False)

    off_diagonal = corr[~np.eye(5, dtype=bool)]
    assert np.all((off_diagonal > 0.88) & (off_diagonal < 0.92))


def test_joint_normal_target_defaults_to_zero() -> None:
    spec = SimulationSpec(n=50, p=5, rho=0.9)

    assert np.array_equal(spec.true_beta, np.zeros(5))


def test_joint_normal_population_target_is_opt_in() -> None:
    spec = SimulationSpec(n=50, p=5, rho=0.9, target="population")

    beta = spec.true_beta

    assert beta[0] == 0.0
    assert np.allclose(beta[1:], 0.9 / 3.7, rtol=1e-12)


def test_fixed_beta_scheme_uses_its_point() -> None:
    beta0 = (1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0, -1.0)
    spec = SimulationSpec(n=100, p=10, epsilon=0.3, scheme=FixedBeta(beta0=beta0), seed=2)

    z = _rows(gen_contaminated(spec, 0))

    assert np.array_equal(spec.true_beta, beta0)
    assert int(np.sum(np.all(z == 3.5, axis=1))) == 30


def test_shift_scheme_scatters_replaced_rows() -> None:
    spec = SimulationSpec(
        n=40, p=3, epsilon=0.25, scheme=JointNormalShift(center=(5.0, 5.0, -5.0), spread=0.1)
    )

    z = _rows(gen_contaminated(spec, 0))

    near = np.all(np.abs(z - np.array([5.0, 5.0, -5.0])) < 1.0, axis=1)
    assert int(np.sum(near)) == 10


def test_spec_validation() -> None:
    with pytest.raises(ValueError, match="rho"):
        SimulationSpec(n=10, p=5, rho=-0.5)
    with pytest.raises(ValueError, match="length"):
        SimulationSpec(n=10, p=3, scheme=FixedBeta(beta0=(1.0, 2.0)))
    with pytest.raises(ValueError):
        SimulationSpec(n=10, p=3, epsilon=0.5)


def test_emse_examples() -> None:
    assert emse([np.zeros(3), np.zeros(3)], np.zeros(3)) == 0.0
    assert emse([np.zeros(3), np.array([2.0, 0.0, 0.0])], np.zeros(3)) == 2.0
    assert emse([np.array([1.0, 1.0])], np.zeros(2)) == 2.0
    with pytest.raises(ContractViolation):
        emse([], np.zeros(2))


def test_emse_is_permutation_invariant() -> None:
    rng = np.random.default_rng(0)
    fits = list(rng.normal(size=(20, 4)))

    assert emse(fits[::-1], np.ones(4)) == pytest.approx(emse(fits, np.ones(4)), rel=1e-14)
    assert squared_deviations(fits, np.ones(4)).shape == (20,)


def test_relative_efficiency_examples() -> None:
    assert relative_efficiency(2.0, 1.0) == 2.0
    assert math.isnan(relative_efficiency(0.0, 0.0))
    assert relative_efficiency(0.0, 41.5) == 0.0
    with pytest.raises(ContractViolation):
        relative_efficiency(-1.0, 1.0)


def test_least_squares_is_self_relative() -> None:
    spec = SimulationSpec(n=30, p=3, epsilon=0.0, replications=10, seed=3)

    report = run_study(spec, ["ls"])

    assert report.get("ls").re == 1.0
    assert report.valid


def test_study_is_thread_count_independent() -> None:
    spec = SimulationSpec(n=30, p=3, epsilon=0.1, replications=8, seed=5)

    serial = run_study(spec, ["ls", "lts", "wls"], FAST)
    threaded = run_study(spec, ["ls", "lts", "wls"], FAST, threads=4)

    for name in ("ls", "lts", "wls"):
        assert serial.get(name).emse == threaded.get(name).emse
        assert serial.get(name).squared_deviations == threaded.get(name).squared_deviations


def test_wls_matches_ls_on_clean_gaussian_data() -> None:
    spec = SimulationSpec(n=50, p=5, epsilon=0.0, replications=100, seed=21)

    report = run_study(spec, ["ls", "wls"], FAST)

    ls, wls = report.get("ls").emse, report.get("wls").emse
    assert abs(wls - ls) / ls < 0.05


def test_study_reports_failures_as_invalid() -> None:
    class Failing:
        name = "broken"

        def fit(self, d: Dataset, seed: int | None = None) -> object:
            raise ContractViolation("always fails")

    spec = SimulationSpec(n=20, p=2, replications=4)

    report = run_study(spec, [LeastSquares(), Failing()])  # type: ignore[list-item]

    assert not report.valid
    assert report.get("broken").failures == 4
    assert math.isnan(report.get("broken").emse)
    assert report.get("ls").fits == 4


def test_stability_scores_deterministic_ls_as_zero() -> None:
    d = clean_line_dataset(40, 3, seed=2)

    report = run_stability(d, ["ls", "lts"], FAST, replications=5, seed=1)

    assert report.get("ls").emse == pytest.approx(0.0, abs=1e-20)
    assert report.get("lts").emse >= 0.0
    assert report.get("ls").fits == 5


def test_csv_export_layout() -> None:
    spec = SimulationSpec(n=20, p=2, epsilon=0.2, replications=3, seed=1)
    report = run_study(spec, ["ls", "lts"], FAST)
    buffer = io.StringIO()

    write_study_csv([report], buffer, timing=False)

    lines = buffer.getvalue().splitlines()
    assert lines[0] == "p,n,epsilon,estimator,emse,tt_seconds,re"
    assert len(lines) == 3
    assert lines[1].startswith("2,20,0.20000000000000001,ls,")
    assert lines[1].split(",")[5] == ""
    assert "p=2 n=20 eps=20%" in format_summary([report])


def test_deviation_export_has_one_row_per_fit() -> None:
    spec = SimulationSpec(n=20, p=2, replications=3, seed=1)
    report = run_study(spec, ["ls"])
    buffer = io.StringIO()

    write_deviations_csv([report], buffer)

    assert len(buffer.getvalue().splitlines()) == 1 + 3


def test_breakdown_probe_examples() -> None:
    d = clean_line_dataset(50, 5, seed=6)
    wls = WeightedLeastSquares(config=FAST.model_copy(update={"lts_starts": 200}))

    assert breakdown_probe(d, LeastSquares(), 0, 1e6) == 0.0
    assert breakdown_probe(d, LeastSquares(), 1, 1e6) > 1e3
    assert breakdown_probe(d, wls, (50 - 5) // 2, 1e6) < 10.0
    with pytest.raises(ContractViolation):
        breakdown_probe(d, LeastSquares(), 50, 1e6)


def test_least_squares_is_equivariant() -> None:
    d = clean_line_dataset(30, 3, seed=8)

    report = equivariance_probe(d, LeastSquares(), transforms=20)

    assert report.worst() < 1e-8


def test_wls_with_residual_scale_is_equivariant() -> None:
    d = clean_line_dataset(40, 3, seed=9)
    cfg = FAST.model_copy(
        update={"scale_mode": ScaleMode.median_initial_residual_squared()}
    )

    report = equivariance_probe(d, WeightedLeastSquares(config=cfg), transforms=20)

    assert report.regression < 1e-6
    assert report.scale < 1e-6
    assert report.affine < 1e-6


def test_wls_with_response_scale_is_scale_and_affine_equivariant() -> None:
    d = clean_line_dataset(40, 3, seed=10)

    report = equivariance_probe(
        d, WeightedLeastSquares(config=FAST), transforms=20, checks=("scale", "affine")
    )

    assert report.scale < 1e-6
    assert report.affine < 1e-6
    assert math.isnan(report.regression)


@pytest.mark.slow
def test_desk_scale_contaminated_cells() -> None:
    cfg = FitConfig(weight_params=WeightParams(k=5.0, c=10.0))
    specs = [
        SimulationSpec(n=50, p=5, epsilon=eps, replications=100, seed=2024)
        for eps in (0.0, 0.1, 0.2)
    ]

    clean, ten, twenty = (run_study(spec, ["lts", "wls", "ls"], cfg) for spec in specs)

    # scored against β₀ = 0
    assert clean.get("ls").emse == pytest.approx(0.3322, abs=5e-4)
    assert clean.get("lts").re < clean.get("wls").re
    assert ten.get("ls").emse > ten.get("wls").emse
    assert twenty.get("ls").emse == pytest.approx(2.1001, abs=5e-4)
    assert twenty.get("wls").emse == pytest.approx(0.7068, abs=5e-4)
    assert twenty.get("ls").emse / twenty.get("wls").emse > 2.5
