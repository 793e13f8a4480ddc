"""Command line front end.

    mathieu-floquet exponents --m 0.1 --method all
    mathieu-floquet sweep --quantity exponent-max --out report.csv

Exit codes: 0 success, 1 computation error, 2 usage or parameter error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import hill, monodromy, study, wkb
from .core import MathieuError, MathieuParams, validate
from .monodromy import IntegratorConfig


class UsageError(Exception):
    pass


def _params_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--m", type=float, default=0.1, help="mass (default 0.1)")
    parent.add_argument("--gamma", type=float, default=1.0, help="damping (default 1)")
    parent.add_argument("--epsilon", type=float, default=1.0, help="drive amplitude (default 1)")
    parent.add_argument("--omega", type=float, default=1.0, help="drive angular frequency (default 1)")
    parent.add_argument("--json", action="store_true", help="machine-readable output")
    parent.add_argument("--rel-tol", type=float, default=1e-12, help="integrator relative tolerance")
    parent.add_argument("--hill-tol", type=float, default=1e-12, help="Delta(0) convergence tolerance")
    parent.add_argument("--stiff", action="store_true", help="use fixed-step implicit midpoint")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _params_parent()
    parser = argparse.ArgumentParser(
        prog="mathieu-floquet",
        description="Floquet exponents and periodic parts of m x'' + gamma x' - eps cos(omega t) x = 0",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = sub.choices

    p = sub.add_parser("exponents", parents=[parent], help="compare lambda_max/lambda_min across methods")
    p.add_argument("--method", choices=["monodromy", "hill", "wkb", "all"], default="all")

    sub.add_parser("hill", parents=[parent], help="Delta(0), truncation and Hill exponents")
    sub.add_parser("wkb", parents=[parent], help="WKB predictions and error envelope at t = T")

    p = sub.add_parser("periodic", parents=[parent], help="numerical vs WKB periodic part")
    p.add_argument("--branch", choices=["max", "min"], default="max")
    p.add_argument("--grid-len", type=int, default=256)

    p = sub.add_parser("sweep", parents=[parent], help="convergence sweep over m (--m ignored)")
    p.add_argument("--quantity", choices=[q.replace("_", "-") for q in _SWEEP_QUANTITIES],
                   default="exponent-max")
    p.add_argument("--m-min", type=float, default=0.005)
    p.add_argument("--m-max", type=float, default=0.32)
    p.add_argument("--points", type=int, default=16)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    return parser


_SWEEP_QUANTITIES = {
    "exponent_max": "exponent_max",
    "exponent_min": "exponent_min",
    "delta0": "delta0_deficit",
    "periodic_max": "periodic_max",
    "periodic_min": "periodic_min",
    "truncated_det": "truncated_det",
}


def _params(args) -> MathieuParams:
    params = MathieuParams(args.m, args.gamma, args.epsilon, args.omega)
    if args.command == "sweep":
        params = params.with_m(1.0)
    report = validate(params)
    if not report.ok:
        raise UsageError("invalid parameters: " + ", ".join(report.violations))
    return params


def _emit(args, rows: dict) -> None:
    if args.json:
        print(json.dumps(rows, sort_keys=True, default=_jsonable))
        return
    width = max(len(k) for k in rows)
    for key, value in rows.items():
        text = f"{value:.12g}" if isinstance(value, float) else str(value)
        print(f"{key:<{width}}  {text}")


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    raise TypeError(type(value))


def _cmd_exponents(args, params, cfg) -> None:
    rows = {}
    methods = ["monodromy", "hill", "wkb"] if args.method == "all" else [args.method]
    if "monodromy" in methods:
        res = monodromy.floquet(params, cfg)
        rows.update(monodromy_lambda_max=res.lambda_max, monodromy_lambda_min=res.lambda_min,
                    abel_residual=res.abel_residual)
    if "hill" in methods:
        res = hill.hill_exponents(params, args.hill_tol)
        rows.update(hill_lambda_max=res.lambda_max_hill, hill_lambda_min=res.lambda_min_hill,
                    hill_path=res.path)
    if "wkb" in methods:
        lam_max, lam_min = wkb.wkb_exponents(params)
        rows.update(wkb_lambda_max=lam_max, wkb_lambda_min=lam_min)
    for a in methods:
        for b in methods:
            if a < b:
                rows[f"delta_max_{a}_{b}"] = rows[f"{a}_lambda_max"] - rows[f"{b}_lambda_max"]
    _emit(args, rows)


def _cmd_hill(args, params, cfg) -> None:
    res = hill.hill_exponents(params, args.hill_tol)
    _emit(args, {
        "delta0": res.delta0,
        "deficit": res.deficit,
        "deficit_leading": hill.series_s_leading(params),
        "truncation_n": res.truncation_n,
        "det_M3": hill.det_truncated(params, 1),
        "c_exponent": res.c_exponent,
        "lambda_max_hill": res.lambda_max_hill,
        "lambda_min_hill": res.lambda_min_hill,
        "path": res.path,
    })


def _cmd_wkb(args, params, cfg) -> None:
    lam_max, lam_min = wkb.wkb_exponents(params)
    env = wkb.olver_error_envelope(params, params.period)
    period = params.period
    _emit(args, {
        "lambda_max_pred": lam_max,
        "lambda_min_pred": lam_min,
        "phase_quadrature_T": wkb.phase_integral(params, period, "quadrature"),
        "phase_taylor_T": wkb.phase_integral(params, period, "taylor"),
        "F1_T": env.f1,
        "eps_bound_1_as_printed": env.eps_bound_1,
        "eps_bound_1_alt": env.eps_bound_1_alt,
        "delta_bound_T": env.delta_bound,
    })


def _cmd_periodic(args, params, cfg) -> None:
    res = monodromy.floquet(params, cfg)
    part = monodromy.periodic_part(params, res, args.branch, args.grid_len, cfg)
    predicted = wkb.wkb_periodic_values(params, part.grid, args.branch)
    rows = {
        "branch": args.branch,
        "sup_error": part.sup_distance(predicted),
        "m_over_omega": params.m / params.omega,
        "normalization": part.normalization,
        "periodicity_residual": part.periodicity_residual,
    }
    if args.json:
        rows.update(grid=part.grid, values=part.values, predicted=predicted)
    _emit(args, rows)


def _cmd_sweep(args, params, cfg) -> None:
    if args.points < 3 or not 0 < args.m_min < args.m_max:
        raise UsageError("need --points >= 3 and 0 < --m-min < --m-max")
    out_format = "json" if args.json else args.format
    config = study.SweepConfig(
        base=params,
        quantity=_SWEEP_QUANTITIES[args.quantity.replace("-", "_")],
        m_values=study.default_m_values(args.m_min, args.m_max, args.points),
        integrator=cfg,
        hill_tol=args.hill_tol,
        out_format=out_format,
    )
    report = study.sweep(config, workers=args.workers)
    text = study.report_to_csv(report) if out_format == "csv" else study.report_to_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"slope={report.slope:.4f} r_squared={report.r_squared:.5f} -> {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


COMMANDS = {
    "exponents": _cmd_exponents,
    "hill": _cmd_hill,
    "wkb": _cmd_wkb,
    "periodic": _cmd_periodic,
    "sweep": _cmd_sweep,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params = _params(args)
        if not (args.rel_tol > 0 and args.hill_tol > 0 and math.isfinite(args.rel_tol)):
            raise UsageError("tolerances must be positive")
        cfg = IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.rel_tol * 1e-2, stiff=args.stiff)
        COMMANDS[args.command](args, params, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.subcommands[args.command].print_help(sys.stderr)
        return 2
    except (MathieuError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
