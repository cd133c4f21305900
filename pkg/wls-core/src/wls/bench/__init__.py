"""Monte-Carlo harness: contaminated generators, EMSE/TT/RE metrics and robustness probes."""

from wls.bench.export import (
    format_summary,
    write_deviations_csv,
    write_study_csv,
)
from wls.bench.generators import (
    clean_line_dataset,
    gen_contaminated,
    replicate_rng,
    replicate_seed,
)
from wls.bench.metrics import (
    EstimatorMetrics,
    MetricsReport,
    emse,
    relative_efficiency,
    squared_deviations,
)
from wls.bench.plan import StudyPlan, StudyPlanLoader, load_study_plan
from wls.bench.probes import EquivarianceReport, breakdown_probe, equivariance_probe
from wls.bench.spec import FixedBeta, JointNormalReplace, JointNormalShift, SimulationSpec
from wls.bench.study import run_grid, run_stability, run_study

__all__ = [
    "EquivarianceReport",
    "EstimatorMetrics",
    "FixedBeta",
    "JointNormalReplace",
    "JointNormalShift",
    "MetricsReport",
    "SimulationSpec",
    "StudyPlan",
    "StudyPlanLoader",
    "breakdown_probe",
    "clean_line_dataset",
    "emse",
    "equivariance_probe",
    "format_summary",
    "gen_contaminated",
    "load_study_plan",
    "relative_efficiency",
    "replicate_rng",
    "replicate_seed",
    "run_grid",
    "run_stability",
    "run_study",
    "squared_deviations",
    "write_deviations_csv",
    "write_study_csv",
]
