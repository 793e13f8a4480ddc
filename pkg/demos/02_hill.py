"""
The Hill determinant route
==========================

Delta(0) is the limit of centered tridiagonal determinants built from
c_n = (eps/2m) / ((n omega)^2 + (gamma/2m)^2). Its deficit 1 - Delta(0) is
about pi m eps^2 / (gamma^3 omega) for small m, and it fixes the exponents
through cosh(2 pi c / omega) = 1 - Delta + Delta cosh(pi gamma / (omega m)).
"""
import numpy as np

from mathieu_floquet import MathieuParams, floquet
from mathieu_floquet import hill

p = MathieuParams(m=0.1, gamma=1.0, epsilon=1.0, omega=1.0)

print("c_0..c_4:", hill.c_n(p, np.arange(5)))
table = hill.determinant_table(p, 6)
print("det M_3, M_5, ...:", table.det_values)
print("LU check det M_5:", hill.det_truncated_direct(p, 2))

# %%
# The factored product form is close, but not equal, to the determinants.
print("factored form / actual - 1:", table.factored_recurrence() / table.det_values[2:] - 1)

# %%
value, n, deficit = hill.delta0(p)
print(f"Delta(0) = {value:.15f}  (n = {n})")
print("deficit vs pi m:", deficit, np.pi * p.m)

# 1 - det M_3 is O(m^2) while 1 - Delta(0) is O(m): the first truncation misses the leading term
for m in (0.04, 0.02, 0.01):
    q = p.with_m(m)
    print(f"m={m:<5}  1-det M3={hill.det_truncated_deficit(q, 1):.3e}  1-Delta={hill.delta0(q)[2]:.3e}")

# %%
# S = 2 sum c_n c_{n+1} squeezed between two closed forms
for m in (0.01, 0.05, 0.1):
    q = p.with_m(m)
    lower, upper = hill.series_s_bounds(q)
    print(f"m={m:<5} {lower:.6e} <= {hill.series_s_bruteforce(q, 200_000):.6e} <= {upper:.6e}")

# %%
# Exponents: the direct path solves the cosh relation, the log path drops an e^{-pi/m} term.
for m in (0.1, 0.2, 0.3):
    q = p.with_m(m)
    mono = floquet(q).lambda_max
    direct = hill.hill_exponents(q, path="direct").lambda_max_hill
    log = hill.hill_exponents(q, path="log").lambda_max_hill
    print(f"m={m}: monodromy {mono:.12f}  direct {direct:.12f}  log {log:.12f}")
