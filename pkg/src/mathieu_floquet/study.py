"""Convergence sweeps over m and log-log rate fitting."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np
from scipy import stats

from . import hill, monodromy, wkb
from .core import (
    DEFAULT_GRID_LEN,
    QUANTITIES,
    ConvergenceReport,
    MathieuError,
    MathieuParams,
    SweepRecord,
    require_valid,
    validate,
)
from .monodromy import IntegratorConfig

ABEL_NOTE = (
    "lambda_min is taken as -gamma/m - lambda_max (exact Abel identity); its deviation "
    "from -gamma/m is therefore exactly |lambda_max| ~ m eps^2/(2 gamma^3), an O(m) quantity, "
    "not the exponent_max error"
)
NEEDS_WKB = ("periodic_max", "periodic_min")


class InsufficientPoints(MathieuError):
    pass


class AllPointsFailed(MathieuError):
    pass


def default_m_values(m_min: float = 0.005, m_max: float = 0.32, points: int = 16) -> tuple[float, ...]:
    """Log-spaced m values, descending."""
    return tuple(float(m) for m in np.geomspace(m_max, m_min, points))


@dataclass(frozen=True)
class SweepConfig:
    base: MathieuParams
    quantity: str = "exponent_max"
    m_values: tuple[float, ...] = field(default_factory=default_m_values)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    hill_tol: float = 1e-12
    out_format: str = "csv"
    grid_len: int = DEFAULT_GRID_LEN

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}")
        if self.out_format not in ("csv", "json"):
            raise ValueError("out_format must be 'csv' or 'json'")
        m_values = tuple(float(m) for m in self.m_values)
        if not m_values or any(not m > 0 for m in m_values):
            raise ValueError("m_values must be non-empty and positive")
        if len(set(m_values)) != len(m_values):
            raise ValueError("m_values must be distinct")
        object.__setattr__(self, "m_values", m_values)
        report = validate(self.base.with_m(1.0))
        if not report.ok:
            raise ValueError("invalid base parameters: " + ", ".join(report.violations))

    def echo(self) -> dict:
        base = self.base.as_dict()
        base.pop("m")
        return {
            "base": base,
            "quantity": self.quantity,
            "m_values": list(self.m_values),
            "integrator": asdict(self.integrator),
            "hill_tol": self.hill_tol,
            "grid_len": self.grid_len,
        }


class FitResult(NamedTuple):
    slope: float
    intercept: float
    r_squared: float
    used: int
    excluded: int


def fit_loglog(records: Iterable) -> FitResult:
    """Least squares of ln(error) on ln(m).

    Records are (m, error) pairs or :class:`SweepRecord`. Flagged records
    and non-positive or non-finite errors are excluded and counted.
    """
    xs, ys = [], []
    excluded = 0
    for rec in records:
        m, err = float(rec[0]), float(rec[1])
        flag = rec[2] if len(rec) > 2 else ""
        if flag or not (err > 0 and math.isfinite(err)) or not m > 0:
            excluded += 1
            continue
        xs.append(math.log(m))
        ys.append(math.log(err))
    if len(xs) < 3:
        raise InsufficientPoints(f"need at least 3 usable records, got {len(xs)}")
    fit = stats.linregress(xs, ys)
    r_squared = min(1.0, max(0.0, fit.rvalue**2))
    return FitResult(float(fit.slope), float(fit.intercept), float(r_squared), len(xs), excluded)


def point_error(params: MathieuParams, quantity: str, integrator: IntegratorConfig,
                hill_tol: float = 1e-12, grid_len: int = DEFAULT_GRID_LEN) -> tuple[float, str]:
    """Error of the asymptotic prediction at one parameter point.

    Returns ``(error, method_detail)``.
    """
    require_valid(params)
    lam_max_pred, lam_min_pred = wkb.wkb_exponents(params)
    if quantity == "exponent_max":
        res = monodromy.floquet(params, integrator)
        return abs(res.lambda_max - lam_max_pred), "monodromy"
    if quantity == "exponent_min":
        res = monodromy.floquet(params, integrator)
        lam_min = -params.gamma / params.m - res.lambda_max
        return abs(lam_min - lam_min_pred), "monodromy+abel"
    if quantity == "delta0_deficit":
        _, n, deficit = hill.delta0(params, hill_tol)
        return abs(deficit - hill.series_s_leading(params)), f"hill n={n}"
    if quantity == "truncated_det":
        return abs(hill.det_truncated_deficit(params, 1)), "det M3"
    if quantity in NEEDS_WKB:
        branch = quantity.split("_")[1]
        res = monodromy.floquet(params, integrator)
        part = monodromy.periodic_part(params, res, branch, grid_len, integrator)
        predicted = wkb.wkb_periodic_values(params, part.grid, branch)
        return part.sup_distance(predicted), f"monodromy {branch} grid={grid_len}"
    raise ValueError(f"unknown quantity {quantity!r}")


def _run_point(args) -> SweepRecord:
    params, quantity, integrator, hill_tol, grid_len = args
    if quantity in NEEDS_WKB and not validate(params).wkb_valid:
        return SweepRecord(params.m, math.nan, "wkb_invalid", "gamma^2/4 <= m|eps|")
    try:
        error, detail = point_error(params, quantity, integrator, hill_tol, grid_len)
    except MathieuError as exc:
        return SweepRecord(params.m, math.nan, type(exc).__name__, str(exc))
    return SweepRecord(params.m, error, "", detail)


def sweep(config: SweepConfig, workers: Optional[int] = None) -> ConvergenceReport:
    """Evaluate ``config.quantity`` at every m and fit the log-log slope.

    Points that fail (stiffness guard, no convergence, outside the WKB
    regime for periodic parts) are kept with a flag. ``workers > 1`` runs
    points in separate processes; output order is by m either way.
    """
    jobs = [(config.base.with_m(m), config.quantity, config.integrator, config.hill_tol,
             config.grid_len) for m in config.m_values]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_point, jobs))
    else:
        records = [_run_point(job) for job in jobs]
    records.sort(key=lambda r: r.m)
    if all(r.flag for r in records):
        raise AllPointsFailed("; ".join(f"m={r.m:g}: {r.flag}" for r in records))
    fit = fit_loglog(records)
    notes = (ABEL_NOTE,) if config.quantity == "exponent_min" else ()
    return ConvergenceReport(
        quantity=config.quantity,
        records=tuple(records),
        slope=fit.slope,
        intercept=fit.intercept,
        r_squared=fit.r_squared,
        excluded=fit.excluded,
        notes=notes,
        config=config.echo(),
    )


def _num(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def report_to_csv(report: ConvergenceReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "error", "flag", "method_detail"])
    for rec in report.records:
        writer.writerow([repr(rec.m), repr(rec.error) if math.isfinite(rec.error) else "",
                         rec.flag, rec.method_detail])
    buf.write(f"# slope={report.slope!r}\n")
    buf.write(f"# intercept={report.intercept!r}\n")
    buf.write(f"# r_squared={report.r_squared!r}\n")
    buf.write(f"# excluded={report.excluded}\n")
    for note in report.notes:
        buf.write(f"# note={note}\n")
    buf.write("# config=" + json.dumps(report.config, sort_keys=True) + "\n")
    return buf.getvalue()


def report_to_json(report: ConvergenceReport) -> str:
    payload = {
        "config": report.config,
        "records": [{"m": r.m, "error": _num(r.error), "flag": r.flag} for r in report.records],
        "fit": {"slope": report.slope, "intercept": report.intercept, "r_squared": report.r_squared},
        "quantity": report.quantity,
        "excluded": report.excluded,
        "notes": list(report.notes),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_report(report: ConvergenceReport, path, out_format: str = "csv") -> None:
    text = report_to_csv(report) if out_format == "csv" else report_to_json(report)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def matched_ratios(numerator: ConvergenceReport, denominator: ConvergenceReport) -> list[tuple[float, float]]:
    """(m, error_num / error_den) at every m where both reports have a usable record."""
    den = {r.m: r.error for r in denominator.valid_records()}
    return [(r.m, r.error / den[r.m]) for r in numerator.valid_records() if r.m in den]


def raw_deficit_records(base: MathieuParams, m_values: Sequence[float],
                        hill_tol: float = 1e-12) -> list[tuple[float, float]]:
    """(m, 1 - Delta(0)) pairs, for comparing against the truncated deficit."""
    return sorted((m, hill.delta0(base.with_m(m), hill_tol)[2]) for m in m_values)
