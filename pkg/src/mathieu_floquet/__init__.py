"""Floquet decomposition of the damped Mathieu equation.

Three independent routes to the characteristic exponents and periodic parts
of ``m x'' + gamma x' - eps cos(omega t) x = 0``:

* :mod:`~mathieu_floquet.monodromy` integrates one period numerically,
* :mod:`~mathieu_floquet.hill` evaluates the infinite Hill determinant,
* :mod:`~mathieu_floquet.wkb` gives the first-order small-m asymptotics,

and :mod:`~mathieu_floquet.study` measures how fast the asymptotics converge.
"""
from .core import (
    ConvergenceReport,
    FloquetResult,
    HillResult,
    MathieuError,
    MathieuParams,
    PeriodicPart,
    SweepRecord,
    ValidityReport,
    period_grid,
    validate,
)
from .hill import delta0, det_truncated, det_truncated_direct, exponent_from_delta, hill_exponents
from .monodromy import (
    IntegratorConfig,
    floquet,
    floquet_exponents,
    integrate,
    monodromy_matrix,
    periodic_part,
)
from .study import SweepConfig, fit_loglog, sweep
from .wkb import phase_integral, wkb_exponents, wkb_fundamental, wkb_periodic

__version__ = "0.1.0"
