"""Parameter and result types shared by the monodromy, Hill and WKB solvers.

The damped Mathieu equation studied throughout the package is

    m x'' + gamma x' - epsilon cos(omega t) x = 0,

with period ``T = 2 pi / omega``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

DEFAULT_GRID_LEN = 256
QUANTITIES = (
    "exponent_max",
    "exponent_min",
    "delta0_deficit",
    "periodic_max",
    "periodic_min",
    "truncated_det",
)


class MathieuError(Exception):
    """Base class for computation errors raised by this package."""


class InvalidParams(MathieuError, ValueError):
    pass


class TurningPoint(MathieuError):
    """f(t) = gamma^2/4 + m eps cos(omega t) is not positive on the period."""


@dataclass(frozen=True)
class MathieuParams:
    """Physical parameters of the damped Mathieu equation.

    Construction never raises, so that :func:`validate` can report on
    arbitrary inputs. Use :func:`require_valid` at the top of computations.
    """

    m: float
    gamma: float
    epsilon: float
    omega: float

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def wkb_valid(self) -> bool:
        return self.gamma**2 / 4.0 > self.m * abs(self.epsilon)

    def f(self, t):
        """gamma^2/4 + m eps cos(omega t), the WKB coefficient function."""
        return self.gamma**2 / 4.0 + self.m * self.epsilon * np.cos(self.omega * t)

    def with_m(self, m: float) -> "MathieuParams":
        return MathieuParams(m, self.gamma, self.epsilon, self.omega)

    def with_epsilon(self, epsilon: float) -> "MathieuParams":
        return MathieuParams(self.m, self.gamma, epsilon, self.omega)

    def as_dict(self) -> dict:
        return {"m": self.m, "gamma": self.gamma, "epsilon": self.epsilon, "omega": self.omega}


class ValidityReport(NamedTuple):
    ok: bool
    wkb_valid: bool
    violations: tuple[str, ...]


def validate(params: MathieuParams) -> ValidityReport:
    """Check the parameter invariants.

    ``ok`` is true iff the hard invariants (finite values, m > 0, gamma > 0,
    omega > 0) hold. ``wkb_valid`` is reported separately because several
    methods (monodromy, Hill) do not need it.
    """
    violations = []
    values = params.as_dict()
    for name, value in values.items():
        if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
            violations.append(f"{name} finite")
    for name in ("m", "gamma", "omega"):
        value = values[name]
        if f"{name} finite" not in violations and not value > 0:
            violations.append(f"{name} > 0")
    wkb = not violations and params.wkb_valid
    return ValidityReport(not violations, bool(wkb), tuple(violations))


def require_valid(params: MathieuParams, wkb: bool = False) -> None:
    report = validate(params)
    if not report.ok:
        raise InvalidParams("invalid parameters: " + ", ".join(report.violations))
    if wkb and not report.wkb_valid:
        raise TurningPoint(
            f"gamma^2/4 = {params.gamma**2 / 4:g} <= m|eps| = {params.m * abs(params.epsilon):g}; "
            "f(t) has a turning point"
        )


def period_grid(params: MathieuParams, grid_len: int = DEFAULT_GRID_LEN) -> np.ndarray:
    """Uniform grid of ``grid_len`` samples covering [0, T] inclusive."""
    if grid_len < 2:
        raise ValueError("grid_len must be at least 2")
    return np.linspace(0.0, params.period, grid_len)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FloquetResult:
    """Floquet data extracted from a monodromy matrix.

    ``log_det`` is the logarithm of det(monodromy) as actually measured
    (product of short-segment transition determinants). The small
    multiplier underflows to 0.0 once gamma T / m exceeds ~745;
    ``log_multipliers`` stays finite.
    """

    monodromy: np.ndarray
    multipliers: tuple[float, float]
    log_multipliers: tuple[float, float]
    lambda_max: float
    lambda_min: float
    period: float
    abel_residual: float
    log_det: float

    def __post_init__(self):
        object.__setattr__(self, "monodromy", _frozen(self.monodromy))


@dataclass(frozen=True)
class PeriodicPart:
    grid: np.ndarray
    values: np.ndarray
    normalization: float
    branch: str

    def __post_init__(self):
        if self.branch not in ("max", "min"):
            raise ValueError(f"branch must be 'max' or 'min', got {self.branch!r}")
        grid = _frozen(self.grid)
        values = _frozen(self.values)
        if grid.shape != values.shape or grid.ndim != 1:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def periodicity_residual(self) -> float:
        return float(abs(self.values[-1] - self.values[0]))

    def sup_distance(self, other: "PeriodicPart | np.ndarray") -> float:
        other_values = other.values if isinstance(other, PeriodicPart) else np.asarray(other)
        return float(np.max(np.abs(self.values - other_values)))


@dataclass(frozen=True)
class HillResult:
    delta0: float
    deficit: float
    truncation_n: int
    c_exponent: float
    lambda_max_hill: float
    lambda_min_hill: float
    path: str = "direct"


class SweepRecord(NamedTuple):
    m: float
    error: float
    flag: str = ""
    method_detail: str = ""


@dataclass(frozen=True)
class ConvergenceReport:
    quantity: str
    records: tuple[SweepRecord, ...]
    slope: float
    intercept: float
    r_squared: float
    excluded: int = 0
    notes: tuple[str, ...] = ()
    config: dict = field(default_factory=dict)

    def valid_records(self) -> list[SweepRecord]:
        return [r for r in self.records if not r.flag and r.error > 0]
