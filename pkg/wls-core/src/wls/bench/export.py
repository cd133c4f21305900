"""Serialisation of study reports: CSV tables and a plain-text summary."""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import TextIO

from wls.bench.metrics import MetricsReport

STUDY_COLUMNS = ("p", "n", "epsilon", "estimator", "emse", "tt_seconds", "re")
DEVIATION_COLUMNS = ("p", "n", "epsilon", "estimator", "replicate", "squared_deviation")


def format_float(value: float) -> str:
    """Round-trippable text for a float; NaN and infinities as ``nan``/``inf``/``-inf``."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def study_rows(reports: Iterable[MetricsReport], *, timing: bool = True) -> list[list[str]]:
    rows = []
    for report in reports:
        for metrics in report.rows:
            rows.append(
                [
                    str(report.p),
                    str(report.n),
                    format_float(report.epsilon),
                    metrics.estimator,
                    format_float(metrics.emse),
                    format_float(metrics.total_time) if timing else "",
                    format_float(metrics.re),
                ]
            )
    return rows


def write_study_csv(
    reports: Sequence[MetricsReport],
    out: Path | TextIO,
    *,
    timing: bool = True,
) -> None:
    """One row per estimator per cell; ``timing=False`` blanks ``tt_seconds``."""
    _write(out, STUDY_COLUMNS, study_rows(reports, timing=timing))


def write_deviations_csv(reports: Sequence[MetricsReport], out: Path | TextIO) -> None:
    """Per-replicate squared deviations (plot data for boxplots of the fits)."""
    rows = []
    for report in reports:
        for metrics in report.rows:
            for rep, value in zip(metrics.replicates, metrics.squared_deviations, strict=True):
                rows.append(
                    [
                        str(report.p),
                        str(report.n),
                        format_float(report.epsilon),
                        metrics.estimator,
                        str(rep),
                        format_float(value),
                    ]
                )
    _write(out, DEVIATION_COLUMNS, rows)


def format_summary(reports: Sequence[MetricsReport]) -> str:
    """Human-readable table grouped by cell."""
    lines = []
    for report in reports:
        flag = "" if report.valid else "  [INVALID]"
        lines.append(
            f"p={report.p} n={report.n} eps={report.epsilon:.0%} R={report.replications}{flag}"
        )
        lines.append(f"  {'method':<8}{'EMSE':>14}{'TT(s)':>12}{'RE':>10}{'fail':>6}")
        for row in report.rows:
            lines.append(
                f"  {row.estimator:<8}{row.emse:>14.4f}{row.total_time:>12.3f}"
                f"{row.re:>10.4f}{row.failures:>6d}"
            )
        lines.extend(f"  note: {note}" for note in report.notes)
    return "\n".join(lines)


def _write(out: Path | TextIO, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    if isinstance(out, Path):
        with out.open("w", encoding="utf-8", newline="") as handle:
            _write_rows(handle, header, rows)
    else:
        _write_rows(out, header, rows)


def _write_rows(handle: TextIO, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
