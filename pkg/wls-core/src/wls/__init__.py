"""Exponentially weighted least squares regression with LS/LTS baselines and benchmarks."""

from wls.core.types import Dataset
from wls.solvers.cgm import fit_wls
from wls.solvers.config import FitConfig
from wls.solvers.ls import fit_ls
from wls.solvers.lts import fit_lts
from wls.solvers.result import FitResult
from wls.weightfn.weights import WeightParams

__all__ = ["Dataset", "FitConfig", "FitResult", "WeightParams", "fit_ls", "fit_lts", "fit_wls"]
