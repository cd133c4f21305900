"""Study plans: JSON documents describing a grid of simulation cells."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator
from pydantic import TypeAdapter, ValidationError

from wls.bench.spec import Scheme, SimulationSpec
from wls.core.config import Settings
from wls.core.errors import StudyPlanError
from wls.core.scale import ScaleMode
from wls.solvers.config import FitConfig
from wls.weightfn.weights import WeightParams

_SCHEME_ADAPTER: TypeAdapter[Scheme] = TypeAdapter(Scheme)


@dataclass(frozen=True, slots=True)
class StudyPlan:
    name: str
    estimators: tuple[str, ...]
    specs: tuple[SimulationSpec, ...]
    config: FitConfig


class StudyPlanLoader:
    """Validates plan documents against the study plan JSON Schema."""

    def __init__(self, schema_path: str | None = None) -> None:
        path = schema_path or Settings().study_plan_schema_path
        schema = json.loads(Path(path).read_text(encoding="utf-8"))
        self._validator = Draft202012Validator(schema)

    def validate(self, document: dict[str, Any]) -> None:
        errors = sorted(self._validator.iter_errors(document), key=str)
        if errors:
            details = "; ".join(err.message for err in errors)
            msg = f"Invalid study plan: {details}"
            raise StudyPlanError(msg)

    def build(self, document: dict[str, Any], settings: Settings | None = None) -> StudyPlan:
        """Validate ``document`` and expand its cells × epsilon list into specs."""
        self.validate(document)
        runtime = settings or Settings()
        replications = int(document.get("replications", runtime.replications))
        seed = int(document.get("seed", 0))
        rho = float(document.get("rho", 0.9))
        target = document.get("target", "zero")
        try:
            scheme = _SCHEME_ADAPTER.validate_python(
                document.get("scheme", {"kind": "joint_normal_replace"})
            )
            specs = tuple(
                SimulationSpec(
                    n=cell["n"],
                    p=cell["p"],
                    epsilon=epsilon,
                    rho=rho,
                    replications=replications,
                    scheme=scheme,
                    seed=seed,
                    target=target,
                )
                for cell in document["cells"]
                for epsilon in cell["epsilon"]
            )
            config = _fit_config(document, runtime)
        except ValidationError as exc:
            msg = f"Invalid study plan '{document['name']}': {exc}"
            raise StudyPlanError(msg) from exc
        return StudyPlan(
            name=str(document["name"]),
            estimators=tuple(document["estimators"]),
            specs=specs,
            config=config,
        )


def load_study_plan(
    path: str | Path,
    settings: Settings | None = None,
    *,
    schema_path: str | None = None,
) -> StudyPlan:
    """Read, validate and expand a plan file."""
    source = Path(path)
    try:
        document = json.loads(source.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        msg = f"cannot read study plan {source}: {exc}"
        raise StudyPlanError(msg) from exc
    if not isinstance(document, dict):
        msg = f"study plan {source} must contain a JSON object"
        raise StudyPlanError(msg)
    runtime = settings or Settings()
    loader = StudyPlanLoader(schema_path or runtime.study_plan_schema_path)
    return loader.build(document, runtime)


def _fit_config(document: dict[str, Any], settings: Settings) -> FitConfig:
    weight = document.get("weight", {})
    solver = document.get("solver", {})
    overrides: dict[str, object] = {
        "weight_params": WeightParams(
            k=weight.get("k", settings.weight_k),
            c=weight.get("c", settings.weight_c),
        ),
        "scale_mode": ScaleMode(
            kind=solver.get("scale_mode", "median_y_squared"),
            reference=solver.get("scale_reference", "initializer"),
        ),
    }
    for key in ("initializer", "tolerance", "max_outer_cycles", "lts_starts"):
        if key in solver:
            overrides[key] = solver[key]
    return FitConfig.from_settings(settings, **overrides)
