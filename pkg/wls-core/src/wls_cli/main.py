from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from wls.bench.export import format_summary, write_deviations_csv, write_study_csv
from wls.bench.generators import clean_line_dataset
from wls.bench.metrics import MetricsReport
from wls.bench.plan import load_study_plan
from wls.bench.probes import breakdown_probe, equivariance_probe
from wls.bench.spec import (
    FixedBeta,
    JointNormalReplace,
    JointNormalShift,
    SimulationSpec,
)
from wls.bench.study import run_grid, run_stability
from wls.core.config import Settings
from wls.core.design import require_general_position, residuals
from wls.core.errors import WLSError
from wls.core.logs import configure_logging
from wls.core.scale import ScaleKind, ScaleMode
from wls.core.types import Dataset
from wls.solvers.breakdown import rbp_theoretical
from wls.solvers.config import FitConfig, LineSearch
from wls.solvers.registry import default_registry
from wls.weightfn.weights import WeightParams, psi, tail_constant, weight, weight_d1, weight_d2
from wls_cli.csvio import read_dataset, write_residuals, write_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2

ESTIMATORS = ("ls", "lts", "wls")
SCALE_MODES: dict[str, ScaleKind] = {
    "median-y-squared": "median_y_squared",
    "median-residual-squared": "median_initial_residual_squared",
}


class InputError(Exception):
    """Flag combination that cannot be turned into a run."""


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        msg = f"expected a comma separated list of numbers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from exc


def _name_list(text: str) -> list[str]:
    names = [item.strip() for item in text.split(",") if item.strip()]
    unknown = [name for name in names if name not in ESTIMATORS]
    if unknown or not names:
        msg = f"estimators must be a comma separated subset of {','.join(ESTIMATORS)}"
        raise argparse.ArgumentTypeError(msg)
    return names


def _add_fit_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("estimator configuration")
    group.add_argument("--k", type=float, default=None, help="weight steepness (default 5)")
    group.add_argument("--c", type=float, default=None, help="weight cutoff (default 100)")
    group.add_argument("--scale-mode", choices=sorted(SCALE_MODES), default="median-y-squared")
    group.add_argument(
        "--scale-reference",
        choices=("initializer", "ls", "lts"),
        default="initializer",
        help="fit whose residuals define c* in median-residual-squared mode",
    )
    group.add_argument("--scale-floor", action="store_true", help="floor c* instead of failing")
    group.add_argument("--cutoff-quantile", type=float, default=None)
    group.add_argument("--tolerance", type=float, default=None)
    group.add_argument("--max-cycles", type=int, default=None)
    group.add_argument("--line-search", choices=("newton", "backtracking"), default="newton")
    group.add_argument("--initializer", choices=("lts", "ls"), default="lts")
    group.add_argument("--no-keep-best", action="store_true")
    group.add_argument("--lts-h", type=int, default=None)
    group.add_argument("--lts-starts", type=int, default=None)
    group.add_argument("--lts-workers", type=int, default=1)


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--csv", type=Path, default=None, help="data file; else a clean line")
    parser.add_argument("--n", type=int, default=50)
    parser.add_argument("--p", type=int, default=5)
    parser.add_argument("--noise", type=float, default=0.1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wls",
        description="Exponentially weighted least squares: fits, simulations and probes",
    )
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default=None,
        help="overrides WLS_LOG_LEVEL",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Fit an estimator to a CSV (last column is the response)")
    fit.add_argument("--csv", type=Path, required=True)
    fit.add_argument("--estimator", choices=ESTIMATORS, default="wls")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--residuals-out", type=Path, default=None)
    _add_fit_flags(fit)

    simulate = sub.add_parser("simulate", help="Run a Monte-Carlo study and write the CSV")
    simulate.add_argument("--plan", type=Path, default=None, help="JSON study plan")
    simulate.add_argument("--n", type=int, default=50)
    simulate.add_argument("--p", type=int, default=5)
    simulate.add_argument("--eps", type=_float_list, default=[0.0], help="e.g. 0,0.1,0.2")
    simulate.add_argument("--rho", type=float, default=0.9)
    simulate.add_argument(
        "--target",
        choices=("zero", "population"),
        default="zero",
        help="joint-normal β₀: zero or the population regression of y on x",
    )
    simulate.add_argument("--reps", type=int, default=None)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument(
        "--scheme",
        choices=("joint_normal_replace", "fixed_beta", "joint_normal_shift"),
        default="joint_normal_replace",
    )
    simulate.add_argument("--point", type=_float_list, default=None)
    simulate.add_argument("--beta0", type=_float_list, default=None)
    simulate.add_argument("--spread", type=float, default=0.5)
    simulate.add_argument("--estimators", type=_name_list, default=["lts", "wls", "ls"])
    simulate.add_argument("--out", type=Path, default=None, help="CSV path; stdout if omitted")
    simulate.add_argument("--deviations-out", type=Path, default=None)
    simulate.add_argument("--no-timing", action="store_true", help="blank tt_seconds")
    simulate.add_argument("--threads", type=int, default=None)
    _add_fit_flags(simulate)

    breakdown = sub.add_parser("breakdown", help="Adversarial replacement probe")
    _add_data_flags(breakdown)
    breakdown.add_argument("--estimator", choices=ESTIMATORS, default="wls")
    breakdown.add_argument("--m", type=int, default=None, help="default ⌊(n−p)/2⌋")
    breakdown.add_argument("--magnitude", type=float, default=1e6)
    breakdown.add_argument("--seed", type=int, default=0)
    _add_fit_flags(breakdown)

    equivariance = sub.add_parser("equivariance", help="Regression/scale/affine identities")
    _add_data_flags(equivariance)
    equivariance.add_argument("--estimator", choices=ESTIMATORS, default="wls")
    equivariance.add_argument("--transforms", type=int, default=20)
    equivariance.add_argument("--seed", type=int, default=0)
    equivariance.add_argument(
        "--checks",
        default="regression,scale,affine",
        help="comma separated subset of regression,scale,affine",
    )
    _add_fit_flags(equivariance)

    dump = sub.add_parser(
        "weights-dump", help="Tabulate r, u=r²/c*, w(u), w′(u), w″(u), ψ(r)"
    )
    dump.add_argument("--k", type=float, default=None, help="default WLS_WEIGHT_K")
    dump.add_argument("--c", type=float, default=None, help="default WLS_WEIGHT_C")
    dump.add_argument("--cstar", type=float, default=1.0)
    dump.add_argument("--r-min", type=float, default=0.0)
    dump.add_argument("--r-max", type=float, default=None, help="default 10·√(c·c*)")
    dump.add_argument("--count", type=int, default=201)
    dump.add_argument("--log-grid", action="store_true", help="geometric spacing (r-min > 0)")
    dump.add_argument("--out", type=Path, default=None)

    stability = sub.add_parser("stability", help="Refit one dataset under different seeds")
    stability.add_argument("--csv", type=Path, required=True)
    stability.add_argument("--estimators", type=_name_list, default=["lts", "wls", "ls"])
    stability.add_argument("--reps", type=int, default=None)
    stability.add_argument("--seed", type=int, default=0)
    stability.add_argument("--threads", type=int, default=None)
    stability.add_argument("--out", type=Path, default=None)
    stability.add_argument("--no-timing", action="store_true")
    _add_fit_flags(stability)

    return parser


def _fit_config(args: argparse.Namespace, settings: Settings, seed: int = 0) -> FitConfig:
    overrides: dict[str, Any] = {
        "scale_mode": ScaleMode(
            kind=SCALE_MODES[args.scale_mode],
            reference=args.scale_reference,
        ),
        "scale_floor": args.scale_floor,
        "cutoff_quantile": args.cutoff_quantile,
        "line_search": LineSearch(kind=args.line_search),
        "initializer": args.initializer,
        "keep_best_of_initializer": not args.no_keep_best,
        "rng_seed": seed,
        "lts_h": args.lts_h,
        "lts_workers": args.lts_workers,
    }
    if args.k is not None or args.c is not None:
        overrides["weight_params"] = WeightParams(
            k=settings.weight_k if args.k is None else args.k,
            c=settings.weight_c if args.c is None else args.c,
        )
    if args.tolerance is not None:
        overrides["tolerance"] = args.tolerance
    if args.max_cycles is not None:
        overrides["max_outer_cycles"] = args.max_cycles
    if args.lts_starts is not None:
        overrides["lts_starts"] = args.lts_starts
    return FitConfig.from_settings(settings, **overrides)


def _load_or_generate(args: argparse.Namespace) -> Dataset:
    if args.csv is not None:
        return read_dataset(args.csv)
    return clean_line_dataset(args.n, args.p, args.seed, noise=args.noise)


def _print_json(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2, default=_jsonable))


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    tolist = getattr(value, "tolist", None)
    return tolist() if callable(tolist) else str(value)


def cmd_fit(args: argparse.Namespace, settings: Settings) -> int:
    data = read_dataset(args.csv)
    require_general_position(data)
    cfg = _fit_config(args, settings, seed=args.seed)
    result = default_registry().get(args.estimator, cfg).fit(data)
    if args.residuals_out is not None:
        write_residuals(args.residuals_out, residuals(data, result.beta))
    _print_json({"n": data.n, "p": data.p, **result.summary()})
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _simulation_specs(args: argparse.Namespace, settings: Settings) -> list[SimulationSpec]:
    replications = args.reps or settings.replications
    scheme: JointNormalReplace | FixedBeta | JointNormalShift
    if args.scheme == "fixed_beta":
        if args.beta0 is None:
            msg = "--scheme fixed_beta requires --beta0"
            raise InputError(msg)
        point = None if args.point is None else tuple(args.point)
        scheme = FixedBeta(beta0=tuple(args.beta0), point=point)
    elif args.scheme == "joint_normal_shift":
        center = None if args.point is None else tuple(args.point)
        scheme = JointNormalShift(center=center, spread=args.spread)
    else:
        scheme = JointNormalReplace(point=None if args.point is None else tuple(args.point))
    return [
        SimulationSpec(
            n=args.n,
            p=args.p,
            epsilon=epsilon,
            rho=args.rho,
            replications=replications,
            scheme=scheme,
            seed=args.seed,
            target=args.target,
        )
        for epsilon in args.eps
    ]


def _emit_reports(
    reports: Sequence[MetricsReport],
    out: Path | None,
    *,
    timing: bool,
) -> None:
    if out is None:
        write_study_csv(reports, sys.stdout, timing=timing)
        return
    write_study_csv(reports, out, timing=timing)
    print(format_summary(reports))


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    threads = args.threads or settings.threads
    if args.plan is not None:
        plan = load_study_plan(args.plan, settings)
        specs = list(plan.specs)
        names = list(plan.estimators)
        cfg = plan.config
    else:
        specs = _simulation_specs(args, settings)
        names = list(args.estimators)
        cfg = _fit_config(args, settings)
    reports = run_grid(specs, names, cfg, threads=threads)
    _emit_reports(reports, args.out, timing=not args.no_timing)
    if args.deviations_out is not None:
        write_deviations_csv(reports, args.deviations_out)
    return EXIT_OK if all(report.valid for report in reports) else EXIT_NOT_CONVERGED


def cmd_breakdown(args: argparse.Namespace, settings: Settings) -> int:
    data = _load_or_generate(args)
    m = (data.n - data.p) // 2 if args.m is None else args.m
    estimator = default_registry().get(args.estimator, _fit_config(args, settings))
    deviation = breakdown_probe(data, estimator, m, args.magnitude, seed=args.seed)
    bound = rbp_theoretical(data.n, data.p) if data.n > data.p else None
    _print_json(
        {
            "estimator": args.estimator,
            "n": data.n,
            "p": data.p,
            "m": m,
            "magnitude": args.magnitude,
            "max_deviation": deviation,
            "rbp_theoretical": None if bound is None else str(bound),
        }
    )
    return EXIT_OK


def cmd_equivariance(args: argparse.Namespace, settings: Settings) -> int:
    data = _load_or_generate(args)
    checks = tuple(item.strip() for item in args.checks.split(",") if item.strip())
    estimator = default_registry().get(args.estimator, _fit_config(args, settings))
    report = equivariance_probe(
        data, estimator, transforms=args.transforms, seed=args.seed, checks=checks
    )
    _print_json({"estimator": args.estimator, "transforms": report.transforms, **report.as_dict()})
    return EXIT_OK


def cmd_weights_dump(args: argparse.Namespace, settings: Settings) -> int:
    params = WeightParams(
        k=settings.weight_k if args.k is None else args.k,
        c=settings.weight_c if args.c is None else args.c,
    )
    r_max = 10.0 * math.sqrt(params.c * args.cstar) if args.r_max is None else args.r_max
    if args.count < 2 or not args.r_min < r_max:
        msg = f"grid needs count >= 2 and r-min < r-max, got {args.count}, {args.r_min}, {r_max}"
        raise InputError(msg)
    if args.log_grid:
        if args.r_min <= 0.0:
            msg = "--log-grid needs r-min > 0"
            raise InputError(msg)
        r = np.geomspace(args.r_min, r_max, args.count)
    else:
        r = np.linspace(args.r_min, r_max, args.count)
    u = r**2 / args.cstar
    text = write_table(
        args.out,
        ("r", "u", "w", "w1", "w2", "psi"),
        (
            r,
            u,
            weight(params, u),
            weight_d1(params, u),
            weight_d2(params, u),
            psi(params, args.cstar, r),
        ),
    )
    if args.out is None:
        sys.stdout.write(text)
    else:
        _print_json(
            {
                "rows": args.count,
                "out": str(args.out),
                "tail_constant": tail_constant(params, args.cstar),
            }
        )
    return EXIT_OK


def cmd_stability(args: argparse.Namespace, settings: Settings) -> int:
    data = read_dataset(args.csv)
    report = run_stability(
        data,
        list(args.estimators),
        _fit_config(args, settings),
        replications=args.reps or settings.replications,
        seed=args.seed,
        threads=args.threads or settings.threads,
    )
    _emit_reports([report], args.out, timing=not args.no_timing)
    return EXIT_OK if report.valid else EXIT_NOT_CONVERGED


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT_ERROR

    try:
        settings = Settings()
        configure_logging(args.log_level or settings.log_level)
        if args.command == "fit":
            return cmd_fit(args, settings)
        if args.command == "simulate":
            return cmd_simulate(args, settings)
        if args.command == "breakdown":
            return cmd_breakdown(args, settings)
        if args.command == "equivariance":
            return cmd_equivariance(args, settings)
        if args.command == "weights-dump":
            return cmd_weights_dump(args, settings)
        if args.command == "stability":
            return cmd_stability(args, settings)
    except (InputError, WLSError, ValidationError, ValueError, OSError) as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
