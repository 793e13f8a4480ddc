import math

import numpy as np
import pytest

from mathieu_floquet import MathieuParams, period_grid, phase_integral, wkb_exponents, wkb_fundamental, wkb_periodic
from mathieu_floquet import wkb
from mathieu_floquet.core import TurningPoint


@pytest.mark.parametrize("method", wkb.PHASE_METHODS)
def test_phase_without_drive(unit, method):
    p = unit.with_epsilon(0.0)
    t = np.array([0.0, 0.5, 3.0, 10.0])
    assert np.allclose(phase_integral(p, t, method), p.gamma * t / (2 * p.m), rtol=1e-13)
    assert phase_integral(p, 0.0, method) == 0.0


def test_phase_accepts_unsorted_times(unit):
    t = np.array([3.0, 1.0, 2.0])
    sorted_values = phase_integral(unit, np.sort(t))
    assert np.allclose(phase_integral(unit, t), sorted_values[[2, 0, 1]], rtol=1e-14)


@pytest.mark.parametrize("t,order", [(1.0, 1.9), (2 * math.pi, 2.9)])
def test_taylor_phase_error_order(t, order):
    gaps = []
    for m in (0.02, 0.01):
        p = MathieuParams(m, 1, 1, 1)
        gaps.append(abs(phase_integral(p, t, "quadrature") - phase_integral(p, t, "taylor")))
    assert math.log2(gaps[0] / gaps[1]) >= order


def test_turning_point_rejected():
    p = MathieuParams(0.3, 1, 1, 1)
    with pytest.raises(TurningPoint):
        phase_integral(p, 1.0)
    with pytest.raises(TurningPoint):
        wkb_periodic(p)
    assert wkb_exponents(p)[0] == pytest.approx(-0.15)


def test_exponent_predictions(unit):
    assert wkb_exponents(unit) == pytest.approx((-0.05, -10.0))
    assert wkb_exponents(unit.with_epsilon(0.0)) == (-0.0, -10.0)
    assert wkb_exponents(unit.with_epsilon(-1.0)) == wkb_exponents(unit)


def test_fundamental_without_drive(unit):
    p = unit.with_epsilon(0.0)
    t = np.linspace(0, 6, 7)
    assert np.allclose(wkb_fundamental(p, t, "grow"), 2 ** 0.5, rtol=1e-13)
    assert np.allclose(wkb_fundamental(p, t, "decay"), 2 ** 0.5 * np.exp(-p.gamma * t / p.m), rtol=1e-12)


def test_periodic_without_drive(unit):
    p = unit.with_epsilon(0.0)
    for branch in ("max", "min"):
        part = wkb_periodic(p, branch=branch)
        assert np.all(part.values == (p.gamma**2 / 4) ** -0.25)


def test_periodic_value_at_origin(unit):
    assert wkb_periodic(unit).values[0] == pytest.approx(0.35 ** -0.25, rel=1e-15)


def test_periodic_branch_product(unit):
    grid = period_grid(unit, 101)
    product = wkb_periodic(unit, grid, "max").values * wkb_periodic(unit, grid, "min").values
    assert np.allclose(product, unit.f(grid) ** -0.5, rtol=1e-12)


def test_epsilon_flip_is_half_period_shift(unit):
    grid = period_grid(unit, 64)
    flipped = wkb_periodic(unit.with_epsilon(-1.0), grid).values
    shifted = wkb.wkb_periodic_values(unit, grid + math.pi / unit.omega)
    assert np.allclose(flipped, shifted, rtol=1e-12)


def test_decomposition_exact_after_one_period(unit):
    period = unit.period
    grow = wkb_fundamental(unit, period, "grow", phase_method="taylor")
    lam = wkb_exponents(unit)[0]
    floquet_form = wkb.wkb_periodic_values(unit, period) * math.exp(lam * period)
    assert grow == pytest.approx(floquet_form, rel=1e-12)


def test_decomposition_pointwise_mismatch(unit):
    # inside the period the two forms differ by exp(-m eps^2 sin(2 omega t) / (4 gamma^3 omega))
    t = np.linspace(0, unit.period, 41)
    grow = wkb_fundamental(unit, t, "grow", phase_method="taylor")
    floquet_form = wkb.wkb_periodic_values(unit, t) * np.exp(wkb_exponents(unit)[0] * t)
    expected = -unit.m * np.sin(2 * t) / 4
    assert np.allclose(np.log(grow / floquet_form), expected, atol=1e-12)
    quad = wkb_fundamental(unit, t, "grow", phase_method="quadrature")
    assert np.max(np.abs(np.log(quad / floquet_form) - expected)) < 5 * unit.m**2


def test_inverse_quarter_root_derivatives(unit):
    t = np.linspace(0.1, 6.0, 25)
    h = 1e-5
    g, dg, d2g = wkb.inv_quarter_root_f(unit, t)
    fd1 = (wkb.inv_quarter_root_f(unit, t + h)[0] - wkb.inv_quarter_root_f(unit, t - h)[0]) / (2 * h)
    fd2 = (wkb.inv_quarter_root_f(unit, t + h)[1] - wkb.inv_quarter_root_f(unit, t - h)[1]) / (2 * h)
    scale = np.max(np.abs(d2g))
    assert np.allclose(dg, fd1, atol=1e-6 * np.max(np.abs(dg)))
    assert np.allclose(d2g, fd2, atol=1e-6 * scale)


def test_envelope_without_drive(unit):
    env = wkb.olver_error_envelope(unit.with_epsilon(0.0), 3.0)
    assert env.f1 == env.f2 == 0.0
    assert env.eps_bound_1_alt == env.eps_bound_2_alt == env.delta_bound == 0.0


def test_envelope_monotone_in_t(unit):
    times = np.linspace(0, unit.period, 9)
    envs = [wkb.olver_error_envelope(unit, t) for t in times]
    f1 = np.array([e.f1 for e in envs])
    f2 = np.array([e.f2 for e in envs])
    delta = np.array([e.delta_bound for e in envs])
    assert f1[0] == 0.0 and f2[-1] == 0.0
    assert np.all(np.diff(f1) > 0) and np.all(np.diff(f2) < 0)
    assert f1[-1] == pytest.approx(f2[0], rel=1e-10)
    assert delta[0] == 0.0 and np.all(np.diff(delta) > 0)


def test_envelope_reference_values():
    p = MathieuParams(0.05, 1, 1, 1)
    env = wkb.olver_error_envelope(p, p.period)
    assert env.delta_bound == pytest.approx(math.expm1(5 * 0.05**2 * math.pi), rel=1e-14)
    assert env.delta_bound == pytest.approx(0.0400512, rel=1e-5)
    assert env.eps_bound_1_alt >= 0
    # the literal e^F / (2u) - 1 form is negative here, so it bounds nothing
    assert env.eps_bound_1 < 0


def test_envelope_rejects_bad_time(unit):
    with pytest.raises(ValueError):
        wkb.olver_error_envelope(unit, -1.0)
    with pytest.raises(ValueError):
        wkb.olver_error_envelope(unit, 2 * unit.period)


def test_prediction_bundle(unit):
    pred = wkb.wkb_prediction(unit, 32)
    assert pred.lambda_max_pred == -0.05 and pred.lambda_min_pred == -10.0
    assert len(pred.p_max_pred.grid) == 32 and pred.p_min_pred.branch == "min"
