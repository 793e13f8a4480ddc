"""First-order WKB approximation of the damped Mathieu equation.

With x = v exp(-gamma t / 2m) the equation becomes v'' = u^2 f(t) v with
u = 1/m and f(t) = gamma^2/4 + m eps cos(omega t). For small m, f has no
zeros and the two WKB solutions are f^{-1/4} exp(+-u int_0^t sqrt f).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .core import DEFAULT_GRID_LEN, MathieuParams, PeriodicPart, period_grid, require_valid

PHASE_METHODS = ("quadrature", "taylor")


def _sqrt_f(params: MathieuParams):
    g2, me, w = params.gamma**2 / 4.0, params.m * params.epsilon, params.omega
    return lambda s: math.sqrt(g2 + me * math.cos(w * s))


def _taylor_phase(params: MathieuParams, t):
    m, g, e, w = params.m, params.gamma, params.epsilon, params.omega
    t = np.asarray(t, dtype=float)
    return (g * t / 2 + m * e * np.sin(w * t) / (g * w)
            - (m * m * e * e / (2 * g**3)) * (t + np.sin(2 * w * t) / (2 * w))) / m


def phase_integral(params: MathieuParams, t, method: str = "quadrature"):
    """(1/m) int_0^t sqrt(gamma^2/4 + m eps cos(omega s)) ds.

    ``method="taylor"`` uses the expansion of the square root through
    second order in m eps cos; the two agree to O(m^2) per unit time.
    ``t`` may be a scalar or an increasing array of non-negative times.
    """
    require_valid(params, wkb=True)
    if method not in PHASE_METHODS:
        raise ValueError(f"method must be one of {PHASE_METHODS}")
    times = np.asarray(t, dtype=float)
    if np.any(times < 0):
        raise ValueError("t must be non-negative")
    if method == "taylor":
        out = _taylor_phase(params, times)
        return float(out) if out.ndim == 0 else out

    integrand = _sqrt_f(params)
    flat = np.atleast_1d(times).ravel()
    order = np.argsort(flat, kind="stable")
    # integrate piecewise between consecutive times, at most a quarter period per piece
    pieces = []
    start = 0.0
    quarter = params.period / 4
    for stop in flat[order]:
        total = 0.0
        knots = np.linspace(start, stop, max(1, math.ceil((stop - start) / quarter)) + 1)
        for a, b in zip(knots[:-1], knots[1:]):
            total += quad(integrand, a, b, epsabs=0.0, epsrel=1e-13, limit=200)[0]
        pieces.append(total)
        start = stop
    out = np.empty_like(flat)
    out[order] = np.cumsum(pieces) / params.m
    return out.reshape(times.shape) if times.ndim else float(out[0])


def wkb_fundamental(params: MathieuParams, grid, branch: str = "grow",
                    phase_method: str = "quadrature") -> np.ndarray:
    """WKB solutions of the original equation, normalized to C = 1.

    grow:  f^{-1/4} exp(+phase - gamma t / 2m)
    decay: f^{-1/4} exp(-phase - gamma t / 2m)
    """
    require_valid(params, wkb=True)
    if branch not in ("grow", "decay"):
        raise ValueError("branch must be 'grow' or 'decay'")
    grid = np.asarray(grid, dtype=float)
    phase = phase_integral(params, grid, phase_method)
    sign = 1.0 if branch == "grow" else -1.0
    log_value = -0.25 * np.log(params.f(grid)) + sign * phase - params.gamma * grid / (2 * params.m)
    return np.exp(log_value)


def wkb_exponents(params: MathieuParams) -> tuple[float, float]:
    """Predicted characteristic exponents (-m eps^2 / (2 gamma^3), -gamma / m)."""
    require_valid(params)
    return (-params.m * params.epsilon**2 / (2 * params.gamma**3), -params.gamma / params.m)


def wkb_periodic_values(params: MathieuParams, grid, branch: str = "max") -> np.ndarray:
    require_valid(params, wkb=True)
    if branch not in ("max", "min"):
        raise ValueError("branch must be 'max' or 'min'")
    grid = np.asarray(grid, dtype=float)
    sign = 1.0 if branch == "max" else -1.0
    exponent = sign * params.epsilon * np.sin(params.omega * grid) / (params.gamma * params.omega)
    return params.f(grid) ** -0.25 * np.exp(exponent)


def wkb_periodic(params: MathieuParams, grid=None, branch: str = "max") -> PeriodicPart:
    """Predicted periodic part f(t)^{-1/4} exp(+-eps sin(omega t) / (gamma omega))."""
    if grid is None:
        grid = period_grid(params)
    return PeriodicPart(np.asarray(grid, float), wkb_periodic_values(params, grid, branch), 1.0, branch)


@dataclass(frozen=True)
class WkbPrediction:
    lambda_max_pred: float
    lambda_min_pred: float
    p_max_pred: PeriodicPart
    p_min_pred: PeriodicPart
    phase_method: str


def wkb_prediction(params: MathieuParams, grid_len: int = DEFAULT_GRID_LEN,
                   phase_method: str = "taylor") -> WkbPrediction:
    require_valid(params, wkb=True)
    grid = period_grid(params, grid_len)
    lam_max, lam_min = wkb_exponents(params)
    return WkbPrediction(lam_max, lam_min, wkb_periodic(params, grid, "max"),
                         wkb_periodic(params, grid, "min"), phase_method)


def inv_quarter_root_f(params: MathieuParams, t):
    """g = f^{-1/4} and its first two time derivatives."""
    m, e, w = params.m, params.epsilon, params.omega
    f = params.f(t)
    df = -m * e * w * np.sin(w * t)
    d2f = -m * e * w * w * np.cos(w * t)
    g = f**-0.25
    dg = -0.25 * f**-1.25 * df
    d2g = (5.0 / 16.0) * f**-2.25 * df**2 - 0.25 * f**-1.25 * d2f
    return g, dg, d2g


def _variation(params: MathieuParams, a: float, b: float) -> float:
    if b <= a:
        return 0.0

    def integrand(s):
        g, _, d2g = inv_quarter_root_f(params, s)
        return g * abs(d2g)

    # |g''| has kinks where g'' changes sign; short pieces keep quad from straddling many
    knots = np.arange(a, b, params.period / 8)
    knots = np.append(knots, b)
    return math.fsum(quad(integrand, lo, hi, epsabs=1e-300, epsrel=1e-12, limit=200)[0]
                     for lo, hi in zip(knots[:-1], knots[1:]))


@dataclass(frozen=True)
class ErrorEnvelope:
    """Error-control integrals and the bounds built from them.

    ``eps_bound_*`` evaluate e^{F}/(2u) - 1 literally; for small m this is
    negative and therefore not a usable bound. ``eps_bound_*_alt`` give the
    conventional e^{F/u} - 1. ``delta_bound`` is e^{5 |eps| omega m^2 t / (2 gamma^3)} - 1.
    """

    t: float
    f1: float
    f2: float
    eps_bound_1: float
    eps_bound_2: float
    eps_bound_1_alt: float
    eps_bound_2_alt: float
    delta_bound: float


def olver_error_envelope(params: MathieuParams, t: float,
                         horizon: Optional[float] = None) -> ErrorEnvelope:
    require_valid(params, wkb=True)
    horizon = params.period if horizon is None else float(horizon)
    if not 0 <= t <= horizon:
        raise ValueError("need 0 <= t <= horizon")
    u = 1.0 / params.m
    f1 = _variation(params, 0.0, t)
    f2 = _variation(params, t, horizon)
    delta = math.expm1(5 * abs(params.epsilon) * params.omega * params.m**2 * t / (2 * params.gamma**3))
    return ErrorEnvelope(
        t=float(t),
        f1=f1,
        f2=f2,
        eps_bound_1=math.exp(f1) / (2 * u) - 1,
        eps_bound_2=math.exp(f2) / (2 * u) - 1,
        eps_bound_1_alt=math.expm1(f1 / u),
        eps_bound_2_alt=math.expm1(f2 / u),
        delta_bound=delta,
    )
