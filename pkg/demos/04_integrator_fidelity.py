"""Trusting the numbers: fixed-step RK4 fidelity checks.

Three quick experiments: the integrator reproduces a closed-form exponential
to its theoretical order, a disturbed grid run converges as the step halves,
and the undisturbed system sits exactly still (the initializer lands on the
true equilibrium, so nothing drifts).
"""

import math

import numpy as np

from vsgbess import (
    BaseQuantities,
    Event,
    GridParams,
    VsgParams,
    simulate,
    step_rk4,
)

# 1) dx/dt = -x against e^{-t}
print("closed-form check, dx/dt = -x over [0, 1]:")
prev = None
for n in (10, 20, 40):
    x, dt = (1.0,), 1.0 / n
    for k in range(n):
        x = step_rk4(x, k * dt, dt, lambda t, s: (-s[0],))
    err = abs(x[0] - math.exp(-1.0))
    note = "" if prev is None else f"  ({prev / err:5.1f}x smaller)"
    print(f"  n = {n:3d}: error = {err:.3e}{note}")
    prev = err

# 2) step refinement on a disturbed run
print("\nstep refinement, disturbed run (worst f_pcc gap between steps):")
event = [Event("load-step", -2.749 / 16.0, 1.0, 0.2)]
traces = {}
for dt in (8e-3, 4e-3, 2e-3, 1e-3):
    traces[dt] = simulate(VsgParams(), GridParams(), BaseQuantities(), event,
                          t_end=10.0, dt=dt)
pairs = [(8e-3, 4e-3), (4e-3, 2e-3), (2e-3, 1e-3)]
for a, b in pairs:
    gap = np.max(np.abs(traces[a].f_pcc - traces[b].f_pcc[::2]))
    print(f"  dt {a * 1e3:g} ms vs {b * 1e3:g} ms: {gap:.3e} Hz")

# 3) the equilibrium is a fixed point
quiet = simulate(VsgParams(), GridParams(), BaseQuantities(), [], 10.0, 1e-3)
print(f"\nundisturbed 10 s run: max|f - 60| = "
      f"{np.max(np.abs(quiet.f_pcc - 60.0)):.2e} Hz, "
      f"max|p_bess| = {np.max(np.abs(quiet.p_bess)):.2e} pu")
