"""
Convergence rates in m
======================

Sweep m over a log grid, measure the gap between the numerics and the
asymptotic prediction, and fit the log-log slope.
"""
import os

from mathieu_floquet import MathieuParams, SweepConfig, fit_loglog, sweep
from mathieu_floquet import study

base = MathieuParams(m=1.0, gamma=1.0, epsilon=1.0, omega=1.0)
workers = min(8, os.cpu_count() or 1)

for quantity in ("exponent_max", "exponent_min", "delta0_deficit", "truncated_det", "periodic_max"):
    report = sweep(SweepConfig(base, quantity), workers=workers)
    print(f"{quantity:<15} slope={report.slope:.3f}  r^2={report.r_squared:.4f}  excluded={report.excluded}")
    for note in report.notes:
        print("   note:", note)

# %%
raw = fit_loglog(study.raw_deficit_records(base, study.default_m_values()))
print(f"raw 1 - Delta(0) slope {raw.slope:.3f}")

# %%
report = sweep(SweepConfig(base, "exponent_max"), workers=workers)
print(study.report_to_csv(report))
