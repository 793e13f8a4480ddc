"""
Floquet exponents from one period of integration
================================================

Integrate m x'' + gamma x' - eps cos(omega t) x = 0 over one period from the
two basis states, read off the multipliers, and compare with the small-m
prediction lambda_max ~ -m eps^2 / (2 gamma^3).
"""
import math

import numpy as np

from mathieu_floquet import MathieuParams, floquet, integrate, periodic_part, wkb_exponents, wkb_periodic

p = MathieuParams(m=0.1, gamma=1.0, epsilon=1.0, omega=1.0)

# a single trajectory; dense output gives x(t) anywhere in [0, T]
traj = integrate(p, [1.0, 0.0], p.period)
print("x(T), x'(T) from (1, 0):", traj.states[-1])
print("accepted steps:", len(traj.times) - 1)

# %%
# The monodromy matrix has det = exp(-gamma T / m), about 4e-28 here, so the
# small multiplier comes from the log-determinant rather than the entries.
res = floquet(p)
print("monodromy:\n", res.monodromy)
print("multipliers:", res.multipliers)
print("lambda_max, lambda_min:", res.lambda_max, res.lambda_min)
print("lambda_max + lambda_min + gamma/m:", res.lambda_max + res.lambda_min + p.gamma / p.m)

lam_pred = wkb_exponents(p)[0]
print(f"WKB lambda_max {lam_pred:.6f}, error {abs(res.lambda_max - lam_pred):.3e}")

# %%
# Shrinking m: the error falls off much faster than m^2.
for m in (0.2, 0.1, 0.05, 0.025, 0.0125):
    q = p.with_m(m)
    err = abs(floquet(q).lambda_max - wkb_exponents(q)[0])
    print(f"m={m:<7} error={err:.3e}  error/m^2={err / m**2:.4f}  error/m^3={err / m**3:.4f}")

# %%
# Periodic part of the slowly decaying solution against f^{-1/4} e^{eps sin / (gamma omega)}
part = periodic_part(p, res, "max", 9)
pred = wkb_periodic(p, part.grid, "max")
for t, num, wk in zip(part.grid, part.values, pred.values):
    print(f"t={t:6.3f}  P={num:.6f}  WKB={wk:.6f}")
print("sup distance / m:", part.sup_distance(pred) / p.m)

# %%
# m = 0.5 sits on the negative-multiplier branch: the exponents pick up i omega/2.
q = p.with_m(0.5)
neg = floquet(q, allow_negative=True)
print("m=0.5 multipliers:", neg.multipliers, " Re lambda:", neg.lambda_max, neg.lambda_min)
print("det check:", math.exp(neg.log_det + q.gamma * q.period / q.m) - 1)
