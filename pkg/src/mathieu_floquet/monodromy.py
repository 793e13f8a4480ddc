"""Direct integration of the damped Mathieu equation over one period.

This is the numerical ground truth the asymptotic methods are checked
against. The monodromy matrix is assembled from short segments so that its
determinant, which is ``exp(-gamma T / m)`` and underflows or cancels badly
when formed from the final 2x2 entries, can be measured as a sum of
segment log-determinants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.integrate import DOP853, OdeSolution
from scipy.interpolate import CubicHermiteSpline

from .core import (
    DEFAULT_GRID_LEN,
    FloquetResult,
    MathieuError,
    MathieuParams,
    PeriodicPart,
    TurningPoint,
    period_grid,
    require_valid,
)

STIFF_RATIO = 1e4
# each monodromy segment loses at most this much log-determinant
SEGMENT_LOG_DECAY = 2.0
PERIODICITY_TOL = 1e-6


class StepUnderflow(MathieuError):
    pass


class StiffnessRefused(StepUnderflow):
    """gamma / (m omega) exceeds the explicit-integrator envelope."""


class MaxStepsExceeded(MathieuError):
    pass


class ComplexMultipliers(MathieuError):
    pass


class NegativeMultiplier(MathieuError):
    pass


class NonPeriodic(MathieuError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances for the explicit 8(5,3) Dormand-Prince integrator.

    ``stiff=True`` switches to fixed-step implicit midpoint with
    ``stiff_steps`` steps per period; this is second order only.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_steps: int = 10**7
    min_step: float = 1e-13
    stiff: bool = False
    stiff_steps: int = 2**15

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.min_step > 0):
            raise ValueError("rel_tol, abs_tol and min_step must be positive")
        if self.max_steps < 1 or self.stiff_steps < 1:
            raise ValueError("max_steps and stiff_steps must be positive")

    def scaled(self, factor: float) -> "IntegratorConfig":
        return replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)


@dataclass(frozen=True)
class StateTrajectory:
    """Accepted integrator steps plus a dense interpolant.

    ``states`` has shape (len(times), 2) holding (x, x').
    """

    times: np.ndarray
    states: np.ndarray
    dense: Callable[[np.ndarray], np.ndarray]

    def __call__(self, t):
        return self.dense(t)


class _LinearSystem(NamedTuple):
    """y'' = a(t) y + b y' written as a first-order system."""

    a: Callable[[float], float]
    b: float

    def rhs(self, t, y):
        y = y.reshape(2, -1)
        out = np.empty_like(y)
        out[0] = y[1]
        out[1] = self.a(t) * y[0] + self.b * y[1]
        return out.ravel()

    def matrix(self, t) -> np.ndarray:
        return np.array([[0.0, 1.0], [self.a(t), self.b]])


def _mathieu_system(params: MathieuParams) -> _LinearSystem:
    m, eps, omega = params.m, params.epsilon, params.omega
    return _LinearSystem(lambda t: eps * math.cos(omega * t) / m, -params.gamma / m)


def _periodic_system(params: MathieuParams, lam: float) -> _LinearSystem:
    # x = P e^{lam t} gives m P'' + (gamma + 2 m lam) P' + (m lam^2 + gamma lam - eps cos) P = 0
    m, gamma, eps, omega = params.m, params.gamma, params.epsilon, params.omega
    shift = lam * (gamma + m * lam)
    return _LinearSystem(
        lambda t: (eps * math.cos(omega * t) - shift) / m,
        -(gamma + 2.0 * m * lam) / m,
    )


def _check_stiffness(params: MathieuParams, cfg: IntegratorConfig) -> None:
    ratio = params.gamma / (params.m * params.omega)
    if ratio > STIFF_RATIO and not cfg.stiff:
        raise StiffnessRefused(
            f"gamma/(m omega) = {ratio:.3g} > {STIFF_RATIO:g}; pass IntegratorConfig(stiff=True)"
        )


def _explicit(system, t0, y0, t1, cfg, dense=True):
    solver = DOP853(system.rhs, t0, np.asarray(y0, float), t1,
                    rtol=cfg.rel_tol, atol=cfg.abs_tol)
    ts, ys, interpolants = [t0], [solver.y.copy()], []
    steps = 0
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise StepUnderflow(message)
        steps += 1
        if steps > cfg.max_steps:
            raise MaxStepsExceeded(f"more than {cfg.max_steps} steps on [{t0}, {t1}]")
        if solver.status == "running" and solver.step_size < cfg.min_step:
            raise StepUnderflow(f"step {solver.step_size:.3e} < min_step {cfg.min_step:.3e} at t={solver.t:.6g}")
        ts.append(solver.t)
        ys.append(solver.y.copy())
        if dense:
            interpolants.append(solver.dense_output())
    ts = np.array(ts)
    ys = np.array(ys)
    sol = OdeSolution(ts, interpolants) if dense else None
    return ts, ys, sol


def _midpoint(system, t0, y0, t1, n_steps):
    """Fixed-step implicit midpoint; returns (times, states, dense, log|det| of the map)."""
    h = (t1 - t0) / n_steps
    eye = np.eye(2)
    y = np.asarray(y0, float).reshape(2, -1)
    ts = t0 + h * np.arange(n_steps + 1)
    ys = np.empty((n_steps + 1,) + y.shape)
    ys[0] = y
    log_dets = []
    for k in range(n_steps):
        a = system.matrix(ts[k] + 0.5 * h)
        lhs = eye - 0.5 * h * a
        rhs_mat = eye + 0.5 * h * a
        y = np.linalg.solve(lhs, rhs_mat @ y)
        ys[k + 1] = y
        log_dets.append(math.log(abs(np.linalg.det(rhs_mat))) - math.log(abs(np.linalg.det(lhs))))
    flat = ys.reshape(n_steps + 1, -1)
    derivs = np.array([system.rhs(t, row) for t, row in zip(ts, flat)])
    if h < 0:
        ts, flat, derivs = ts[::-1], flat[::-1], derivs[::-1]
    spline = CubicHermiteSpline(ts, flat, derivs, axis=0)
    return ts, flat, (lambda t: spline(t).T), math.fsum(log_dets)


def _solve(system, t0, y0, t1, cfg, params):
    if cfg.stiff:
        n = max(1, math.ceil(cfg.stiff_steps * abs(t1 - t0) / params.period))
        ts, ys, dense, _ = _midpoint(system, t0, y0, t1, n)
        return ts, ys, dense
    return _explicit(system, t0, y0, t1, cfg)


def integrate(params: MathieuParams, initial, t_end: float,
              cfg: Optional[IntegratorConfig] = None) -> StateTrajectory:
    """Integrate the equation from ``initial = (x0, x0')`` over [0, t_end]."""
    cfg = cfg or IntegratorConfig()
    require_valid(params)
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    _check_stiffness(params, cfg)
    ts, ys, dense = _solve(_mathieu_system(params), 0.0, initial, t_end, cfg, params)
    return StateTrajectory(ts, ys, dense)


class Monodromy(NamedTuple):
    matrix: np.ndarray
    log_det: Optional[float]
    segments: int


def monodromy(params: MathieuParams, cfg: Optional[IntegratorConfig] = None) -> Monodromy:
    """Monodromy matrix and its measured log-determinant.

    Column j is the state at T of the solution started from the j-th basis
    vector. ``log_det`` is None in stiff mode, where implicit midpoint does
    not reproduce the contraction of the determinant.
    """
    cfg = cfg or IntegratorConfig()
    require_valid(params)
    _check_stiffness(params, cfg)
    system = _mathieu_system(params)
    period = params.period
    if cfg.stiff:
        n = cfg.stiff_steps
        _, ys, _, _ = _midpoint(system, 0.0, np.eye(2), period, n)
        return Monodromy(ys[-1].reshape(2, 2), None, 1)

    n_seg = max(1, math.ceil(params.gamma * period / (params.m * SEGMENT_LOG_DECAY)))
    edges = np.linspace(0.0, period, n_seg + 1)
    total = np.eye(2)
    log_dets = []
    for t0, t1 in zip(edges[:-1], edges[1:]):
        _, ys, _ = _explicit(system, t0, np.eye(2).ravel(), t1, cfg, dense=False)
        phi = ys[-1].reshape(2, 2)
        det = phi[0, 0] * phi[1, 1] - phi[0, 1] * phi[1, 0]
        if not det > 0:
            raise StepUnderflow(f"segment transition determinant {det:.3e} is not positive")
        log_dets.append(math.log(det))
        total = phi @ total
    return Monodromy(total, math.fsum(log_dets), n_seg)


def monodromy_matrix(params: MathieuParams, cfg: Optional[IntegratorConfig] = None) -> np.ndarray:
    return monodromy(params, cfg).matrix


def floquet_exponents(mono, params: MathieuParams, log_det: Optional[float] = None,
                      allow_negative: bool = False) -> FloquetResult:
    """Multipliers and characteristic exponents of a 2x2 monodromy matrix.

    The small multiplier is det / rho_1 with det taken from ``log_det``
    when given. Without it, det(mono) formed from the entries is useless
    for small m (it cancels to roundoff), so the Abel identity value
    ``-gamma T / m`` is used instead and only the residual is measured.

    Negative multipliers (exponents with imaginary part omega/2) raise
    NegativeMultiplier unless ``allow_negative`` is set, in which case the
    multipliers keep their sign and the exponents are ln|rho| / T.
    """
    mono = np.asarray(mono, dtype=float)
    period = params.period
    abel_log = -params.gamma * period / params.m
    if log_det is None:
        naive = mono[0, 0] * mono[1, 1] - mono[0, 1] * mono[1, 0]
        measured = math.log(naive) if naive > 0 else math.nan
        used = abel_log
    else:
        measured = used = float(log_det)

    trace = mono[0, 0] + mono[1, 1]
    det = math.exp(used)
    disc = trace * trace - 4.0 * det
    if disc < 0:
        raise ComplexMultipliers(f"discriminant {disc:.3e} < 0: multipliers are complex")
    if trace <= 0 and not allow_negative:
        raise NegativeMultiplier(f"trace {trace:.6g} <= 0: negative multipliers (d = omega/2 branch)")
    if disc == 0:
        raise ComplexMultipliers("repeated multiplier; Floquet exponents are not distinct")
    sign = 1.0 if trace > 0 else -1.0
    rho1 = 0.5 * (abs(trace) + math.sqrt(disc))
    log_rho1 = math.log(rho1)
    log_rho2 = used - log_rho1
    gap = measured - abel_log
    if not math.isfinite(gap):
        residual = math.nan
    else:
        residual = math.inf if gap > 700 else abs(math.expm1(gap))
    return FloquetResult(
        monodromy=mono,
        multipliers=(float(sign * rho1), float(sign * math.exp(log_rho2))),
        log_multipliers=(log_rho1, log_rho2),
        lambda_max=log_rho1 / period,
        lambda_min=log_rho2 / period,
        period=period,
        abel_residual=residual,
        log_det=used,
    )


def floquet(params: MathieuParams, cfg: Optional[IntegratorConfig] = None,
            allow_negative: bool = False) -> FloquetResult:
    mono = monodromy(params, cfg)
    return floquet_exponents(mono.matrix, params, mono.log_det, allow_negative)


def eigenvector(mono, rho: float) -> np.ndarray:
    """Unit eigenvector of a 2x2 matrix for eigenvalue ``rho``, x-component >= 0."""
    mono = np.asarray(mono, dtype=float)
    first = np.array([mono[0, 1], rho - mono[0, 0]])
    second = np.array([rho - mono[1, 1], mono[1, 0]])
    v = first if np.hypot(*first) >= np.hypot(*second) else second
    norm = np.hypot(*v)
    if norm == 0:
        # scalar multiple of the identity: every vector is an eigenvector
        return np.array([1.0, 0.0])
    v = v / norm
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = -v
    return v


def periodic_part(params: MathieuParams, result: FloquetResult, branch: str = "max",
                  grid_len: int = DEFAULT_GRID_LEN,
                  cfg: Optional[IntegratorConfig] = None) -> PeriodicPart:
    """Sample the periodic factor P of the Floquet solution P(t) e^{lambda t}.

    The max branch integrates x forward from the dominant eigenvector and
    strips e^{lambda_max t}. The min branch integrates the equation for P
    itself backward from T: in reverse time the dominant mode decays, so
    contamination of the eigenvector dies out instead of growing like
    e^{gamma T / m}.

    P is scaled so that P(0) = (gamma^2/4 + m eps)^{-1/4}.
    """
    cfg = cfg or IntegratorConfig()
    require_valid(params)
    if branch not in ("max", "min"):
        raise ValueError(f"branch must be 'max' or 'min', got {branch!r}")
    f0 = params.gamma**2 / 4.0 + params.m * params.epsilon
    if not f0 > 0:
        raise TurningPoint("gamma^2/4 + m eps <= 0; normalization undefined")
    _check_stiffness(params, cfg)
    if result.multipliers[0] <= 0:
        raise NegativeMultiplier("periodic parts need positive multipliers")
    grid = period_grid(params, grid_len)
    period = params.period

    if branch == "max":
        v = eigenvector(result.monodromy, result.multipliers[0])
        traj = integrate(params, v, period, cfg)
        values = traj(grid)[0] * np.exp(-result.lambda_max * grid)
    else:
        lam = result.lambda_min
        v = eigenvector(result.monodromy, math.exp(result.log_multipliers[1]))
        start = np.array([v[0], v[1] - lam * v[0]])
        start /= np.hypot(*start)
        _, _, dense = _solve(_periodic_system(params, lam), period, start, 0.0, cfg, params)
        values = dense(grid)[0]

    scale = f0**-0.25 / values[0]
    values = values * scale
    mismatch = abs(values[-1] - values[0])
    if mismatch > PERIODICITY_TOL * np.max(np.abs(values)):
        raise NonPeriodic(f"|P(T) - P(0)| = {mismatch:.3e} exceeds tolerance")
    return PeriodicPart(grid, values, float(scale), branch)
