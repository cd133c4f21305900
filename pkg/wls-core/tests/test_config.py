from pathlib import Path

import pytest

from wls.core.config import Settings
from wls.solvers.config import FitConfig


def test_settings_resolve_relative_schema_path() -> None:
    settings = Settings(study_plan_schema_path="docs/contracts/study_plan.schema.json")

    assert Path(settings.study_plan_schema_path).exists()
    assert settings.study_plan_schema_path.endswith(
        "wls-core/docs/contracts/study_plan.schema.json"
    )


def test_settings_keep_absolute_paths(tmp_path: Path) -> None:
    schema = tmp_path / "plan.schema.json"
    schema.write_text("{}", encoding="utf-8")

    settings = Settings(study_plan_schema_path=str(schema))

    assert settings.study_plan_schema_path == str(schema)


def test_settings_read_prefixed_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("WLS_WEIGHT_C", "10")
    monkeypatch.setenv("WLS_LTS_STARTS", "25")
    monkeypatch.setenv("WLS_LOG_LEVEL", "DEBUG")

    settings = Settings()
    cfg = FitConfig.from_settings(settings)

    assert settings.log_level == "DEBUG"
    assert cfg.weight_params.c == 10.0
    assert cfg.lts_starts == 25


def test_settings_reject_unknown_log_level(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("WLS_LOG_LEVEL", "LOUD")
    with pytest.raises(ValueError):
        Settings()


def test_fit_config_overrides_win_over_settings() -> None:
    cfg = FitConfig.from_settings(Settings(), tolerance=1e-6, lts_starts=7)

    assert cfg.tolerance == 1e-6
    assert cfg.lts_starts == 7
    assert cfg.with_seed(9).rng_seed == 9


def test_given_initializer_requires_coefficients() -> None:
    with pytest.raises(ValueError, match="initial_beta"):
        FitConfig(initializer="given")
