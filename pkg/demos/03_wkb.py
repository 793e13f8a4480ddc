"""
WKB asymptotics and their error envelope
========================================

With x = v e^{-gamma t / 2m}, v'' = f(t) v / m^2 and f = gamma^2/4 + m eps cos(omega t).
The two WKB solutions are f^{-1/4} exp(+-(1/m) int sqrt f).
"""
import numpy as np

from mathieu_floquet import MathieuParams, period_grid, phase_integral, wkb_exponents, wkb_fundamental
from mathieu_floquet import wkb

p = MathieuParams(m=0.05, gamma=1.0, epsilon=1.0, omega=1.0)
t = period_grid(p, 9)

quad = phase_integral(p, t, "quadrature")
taylor = phase_integral(p, t, "taylor")
print("phase (quadrature):", quad)
print("quadrature - taylor:", quad - taylor)

# %%
grow = wkb_fundamental(p, t, "grow")
lam_max, _ = wkb_exponents(p)
floquet_form = wkb.wkb_periodic_values(p, t) * np.exp(lam_max * t)
print("ln(grow / P e^{lambda t}):", np.log(grow / floquet_form))
print("-m eps^2 sin(2 omega t) / (4 gamma^3 omega):", -p.m * np.sin(2 * t) / 4)

# %%
# Error control: F1 grows, F2 shrinks along the period.
for s in t[::2]:
    env = wkb.olver_error_envelope(p, s)
    print(f"t={s:5.3f}  F1={env.f1:.4e}  F2={env.f2:.4e}  "
          f"e^(F1/u)-1={env.eps_bound_1_alt:.3e}  delta={env.delta_bound:.3e}")

# %%
# Outside gamma^2/4 > m |eps| f has zeros and the construction is refused.
try:
    phase_integral(p.with_m(0.3), 1.0)
except Exception as exc:
    print(type(exc).__name__, exc)
