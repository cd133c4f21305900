"""WLS runtime configuration definitions."""

from pathlib import Path
from typing import ClassVar

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime defaults loaded from env (``WLS_*``) and .env files."""

    app_name: str = "wls-python-core"
    log_level: str = Field(default="WARNING", pattern="^(DEBUG|INFO|WARNING|ERROR)$")

    weight_k: float = Field(default=5.0, gt=0.0)
    weight_c: float = Field(default=100.0, gt=0.0)
    tolerance: float = Field(default=1e-8, gt=0.0)
    max_outer_cycles: int = Field(default=50, ge=1)
    lts_starts: int = Field(default=200, ge=1)

    replications: int = Field(default=100, ge=1)
    threads: int = Field(default=1, ge=1)

    _core_root: ClassVar[Path] = Path(__file__).resolve().parents[3]
    _repo_root: ClassVar[Path] = Path(__file__).resolve().parents[4]
    study_plan_schema_path: str = str(_core_root / "docs/contracts/study_plan.schema.json")

    model_config = SettingsConfigDict(env_file=".env", env_prefix="WLS_")

    @classmethod
    def _resolve_contract_path(cls, configured_path: str) -> str:
        """Resolve a configurable schema path against the usual project roots.

        Relative values such as ``docs/contracts/study_plan.schema.json`` work
        from the repository root, from ``wls-core`` and from the current
        directory.
        """

        path = Path(configured_path)
        if path.is_absolute():
            return str(path)

        candidates = [
            Path.cwd() / path,
            cls._repo_root / path,
            cls._repo_root / "wls-core" / path,
            cls._core_root / path,
        ]

        for candidate in candidates:
            if candidate.exists():
                return str(candidate.resolve())

        return configured_path

    @model_validator(mode="after")
    def _normalize_paths(self) -> "Settings":
        self.study_plan_schema_path = self._resolve_contract_path(self.study_plan_schema_path)
        return self
