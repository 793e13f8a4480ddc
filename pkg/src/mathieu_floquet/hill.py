"""Infinite Hill determinant for the damped Mathieu equation.

After the substitution x = v exp(-gamma t / 2m) the equation reads
v'' + (G0 + G1 e^{i omega t} + G1 e^{-i omega t}) v = 0 with
G0 = -(gamma/2m)^2 and G1 = -eps/2m. At mu = 0 the normalized Hill matrix
is tridiagonal with unit diagonal and row r carrying c_|r| on both
off-diagonals, where

    c_n = (eps/2m) / ((n omega)^2 + (gamma/2m)^2).

Its centered (2n+1) x (2n+1) sections M_{2n+1} converge to Delta(0), which
fixes the characteristic exponents through

    cosh(2 pi c / omega) = 1 - Delta(0) + Delta(0) cosh(pi gamma / (omega m)).

Everything near 1 is carried as a deficit 1 - det to keep the O(m)
signal at small m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .core import HillResult, MathieuError, MathieuParams, require_valid

COSH_OVERFLOW = 700.0
MAX_TRUNCATION = 10**6
DIRECT_MAX_N = 2000


class SingularTruncation(MathieuError):
    pass


class NoConvergence(MathieuError):
    pass


class DomainError(MathieuError, ValueError):
    pass


class HillCoefficients(NamedTuple):
    g0: float
    g1: float


def hill_coefficients(params: MathieuParams) -> HillCoefficients:
    return HillCoefficients(-(params.gamma / (2 * params.m)) ** 2, -params.epsilon / (2 * params.m))


def c_n(params: MathieuParams, n):
    """Off-diagonal entry G1 / rho_n(0) of the normalized Hill matrix.

    Accepts a scalar or an array of non-negative integers.
    """
    n = np.asarray(n, dtype=float)
    half_rate = params.gamma / (2 * params.m)
    value = (params.epsilon / (2 * params.m)) / ((n * params.omega) ** 2 + half_rate**2)
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class DeterminantTable:
    """Determinants of the centered sections M_3, M_5, ..., M_{2n+1}.

    Built outward: with a_k = c_k c_{k+1}, A_k = det M_{2k+1} and B_k the
    determinant of rows -k+1..k,

        E_k     = A_k - a_k B_k          (rows -k..k+1)
        F_k     = B_k - a_k A_{k-1}      (rows -k+1..k+1)
        A_{k+1} = E_k - a_k F_k
        B_{k+1} = E_k

    which follows from expanding along the new last row, then the new first
    row, and using the persymmetry r -> -r of the matrix.
    ``deficits[k-1]`` is 1 - det M_{2k+1} accumulated as a compensated sum
    of the increments.
    """

    n: int
    c: np.ndarray
    det_values: np.ndarray
    deficits: np.ndarray
    f_values: np.ndarray

    @property
    def product_factors(self) -> np.ndarray:
        """prod_{i=1}^{k-1} (1 - c_i c_{i+1}) for k = 1..n."""
        a = self.c[1:-1] * self.c[2:]
        return np.concatenate(([1.0], np.cumprod(1.0 - a)))[: self.n]

    def factored_recurrence(self) -> np.ndarray:
        """Right-hand side (f_{2k-1} - f_{2k-3} c_k c_{k-1}) prod(1 - c_i c_{i+1}).

        Evaluated from this table's own f values, for k = 3..n. Compare with
        ``det_values[2:]`` to see how far the factored form is from the
        actual determinants.
        """
        k = np.arange(3, self.n + 1)
        f = self.f_values
        return (f[k - 1] - f[k - 2] * self.c[k] * self.c[k - 1]) * self.product_factors[k - 1]


def determinant_table(params: MathieuParams, n: int) -> DeterminantTable:
    require_valid(params)
    if n < 1:
        raise ValueError("n must be >= 1")
    c = c_n(params, np.arange(n + 1))
    a = (c[:-1] * c[1:]).tolist()
    A_prev, A, B = 0.0, 1.0, 1.0
    alpha_terms = []
    det_values = np.empty(n)
    deficits = np.empty(n)
    for k in range(n):
        ak = a[k]
        E = A - ak * B
        F = B - ak * A_prev
        # 1 - A_{k+1} = (1 - A_k) + a_k (B_k + F_k)
        alpha_terms.append(ak * (B + F))
        A_prev, A, B = A, E - ak * F, E
        deficits[k] = math.fsum(alpha_terms)
        det_values[k] = A
    # f_{2k-1} := det(M_{2k-1}) / prod_{i=1}^{k-1}(1 - c_i c_{i+1}), k = 1..n
    pair = c[1:-1] * c[2:]
    prods = np.concatenate(([1.0], np.cumprod(1.0 - pair)))[:n]
    prev_dets = np.concatenate(([1.0], det_values[:-1]))
    return DeterminantTable(n, c, det_values, deficits, prev_dets / prods)


def _deficit(params: MathieuParams, n: int) -> float:
    """1 - det M_{2n+1} without storing the table."""
    c = c_n(params, np.arange(n + 1))
    a = (c[:-1] * c[1:]).tolist()
    A_prev, A, B = 0.0, 1.0, 1.0
    terms = []
    for ak in a:
        E = A - ak * B
        F = B - ak * A_prev
        terms.append(ak * (B + F))
        A_prev, A, B = A, E - ak * F, E
    return math.fsum(terms)


def det_truncated(params: MathieuParams, n: int) -> float:
    """det M_{2n+1} by the outward recurrence (see :class:`DeterminantTable`)."""
    require_valid(params)
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 - _deficit(params, n)


def det_truncated_deficit(params: MathieuParams, n: int) -> float:
    require_valid(params)
    if n < 1:
        raise ValueError("n must be >= 1")
    return _deficit(params, n)


def hill_matrix(params: MathieuParams, n: int) -> np.ndarray:
    """Explicit (2n+1) x (2n+1) centered section of the Hill matrix at mu = 0."""
    r = np.arange(-n, n + 1)
    c = c_n(params, np.abs(r))
    mat = np.eye(2 * n + 1)
    idx = np.arange(2 * n)
    mat[idx, idx + 1] = c[:-1]
    mat[idx + 1, idx] = c[1:]
    return mat


def det_truncated_direct(params: MathieuParams, n: int) -> float:
    """Dense LU determinant of the centered section, used as an oracle."""
    require_valid(params)
    if not 1 <= n <= DIRECT_MAX_N:
        raise ValueError(f"n must be in [1, {DIRECT_MAX_N}]")
    lu, piv = scipy.linalg.lu_factor(hill_matrix(params, n), check_finite=True)
    diag = np.diag(lu)
    if np.any(diag == 0):
        raise SingularTruncation(f"zero pivot in the {2 * n + 1}x{2 * n + 1} section")
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    sign = -1.0 if swaps % 2 else 1.0
    return sign * float(np.prod(diag))


def initial_truncation(params: MathieuParams) -> int:
    return max(1, math.ceil(8 * params.gamma / (2 * params.m * params.omega)))


def delta0(params: MathieuParams, tol: float = 1e-12) -> tuple[float, int, float]:
    """Delta(0) as the limit of det M_{2n+1}.

    Doubles n from ``initial_truncation`` until two successive determinants
    agree to ``tol`` relative. Returns ``(delta0, n, deficit)`` where
    ``deficit = 1 - delta0`` is kept at full relative precision.
    """
    require_valid(params)
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = initial_truncation(params)
    previous = _deficit(params, n)
    while True:
        n *= 2
        if n > MAX_TRUNCATION:
            raise NoConvergence(f"Delta(0) not converged to {tol:g} by n = {MAX_TRUNCATION}")
        deficit = _deficit(params, n)
        value = 1.0 - deficit
        if abs(deficit - previous) < tol * abs(value):
            return value, n, deficit
        previous = deficit


def series_s_bruteforce(params: MathieuParams, terms: int) -> float:
    """Partial sum 2 sum_{n=0}^{terms-1} c_n c_{n+1}."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    c = c_n(params, np.arange(terms + 1))
    return 2.0 * math.fsum((c[:-1] * c[1:]).tolist())


def inverse_square_series(a: float) -> float:
    """Closed form of sum_{n=0}^inf 1 / (n^2 + a)^2 for a > 0.

    Obtained by differentiating sum_{n>=0} 1/(n^2 + a)
    = 1/(2a) + pi coth(pi sqrt a) / (2 sqrt a) with respect to a.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    s = math.sqrt(a)
    x = math.pi * s
    coth = 1.0 / math.tanh(x)
    csch2 = 0.0 if x > 350 else 1.0 / math.sinh(x) ** 2
    return 0.5 / a**2 + math.pi * coth / (4 * a * s) + math.pi**2 * csch2 / (4 * a)


def squeeze_parameter(params: MathieuParams) -> float:
    """a = gamma^2 / (4 m^2 omega^2), so that c_n = eps / (2 m omega^2 (n^2 + a))."""
    return params.gamma**2 / (4 * params.m**2 * params.omega**2)


def series_s_closed(params: MathieuParams) -> float:
    """Closed form of the upper bound 2 sum_{n>=0} c_n^2 on S."""
    require_valid(params)
    scale = params.epsilon**2 / (2 * params.m**2 * params.omega**4)
    return scale * inverse_square_series(squeeze_parameter(params))


class SeriesBounds(NamedTuple):
    lower: float
    upper: float


def series_s_bounds(params: MathieuParams) -> SeriesBounds:
    """(2 sum c_{n+1}^2, 2 sum c_n^2), which bracket S because c_n decreases in |.|."""
    upper = series_s_closed(params)
    return SeriesBounds(upper - 2.0 * c_n(params, 0) ** 2, upper)


def series_s_leading(params: MathieuParams) -> float:
    """m pi eps^2 / (gamma^3 omega), the common leading order of S and 1 - Delta(0)."""
    return params.m * math.pi * params.epsilon**2 / (params.gamma**3 * params.omega)


class HillExponents(NamedTuple):
    c: float
    lambda_max: float
    lambda_min: float
    path: str


def exponent_from_delta(params: MathieuParams, delta0: float, path: str = "auto",
                        deficit: float | None = None) -> HillExponents:
    """Characteristic exponents from Delta(0).

    ``path="direct"`` solves the cosh relation exactly. It is evaluated
    after dividing through by e^{x}, x = pi gamma / (omega m), so that the
    subtraction c - gamma/2m never happens explicitly.
    ``path="log"`` keeps only c = (omega/2pi) ln Delta(0) + gamma/2m and
    drops the exponentially small remainder, which is of relative size
    2 (1 - Delta) e^{-x} / Delta.
    ``"auto"`` picks direct for x <= 700 and log otherwise.

    ``deficit`` (1 - delta0) may be passed to avoid recomputing it by
    subtraction.
    """
    require_valid(params)
    if not 0 < delta0 <= 1:
        raise DomainError(f"Delta(0) = {delta0!r} outside (0, 1]")
    if deficit is None:
        deficit = 1.0 - delta0
    x = math.pi * params.gamma / (params.omega * params.m)
    if path == "auto":
        path = "direct" if x <= COSH_OVERFLOW else "log"
    scale = params.omega / (2 * math.pi)
    half_rate = params.gamma / (2 * params.m)

    if path == "direct":
        u = math.exp(-x)
        # e^{-x} (1 - Delta + Delta cosh x)
        scaled_rhs = u * deficit + 0.5 * delta0 * (1.0 + u * u)
        if scaled_rhs < u:
            raise DomainError("cosh argument < 1; no real exponent for this Delta(0)")
        lambda_max = scale * math.log(scaled_rhs + math.sqrt((scaled_rhs - u) * (scaled_rhs + u)))
    elif path == "log":
        lambda_max = scale * math.log1p(-deficit)
    else:
        raise ValueError(f"unknown path {path!r}")
    return HillExponents(lambda_max + half_rate, lambda_max, -2 * half_rate - lambda_max, path)


def hill_exponents(params: MathieuParams, tol: float = 1e-12, path: str = "auto") -> HillResult:
    value, n, deficit = delta0(params, tol)
    exps = exponent_from_delta(params, value, path, deficit=deficit)
    return HillResult(value, deficit, n, exps.c, exps.lambda_max, exps.lambda_min, exps.path)

