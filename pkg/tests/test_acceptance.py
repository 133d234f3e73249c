"""Acceptance suite: the published orderings, limit checks and numeric gates.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion. The study matrices are simulated once at their production
settings (t_end = 40 s, dt = 1 ms) and shared across criteria.
"""

import itertools
import math
import time

import numpy as np
import pytest

from vsgbess import (
    BaseQuantities,
    Event,
    GridParams,
    VsgParams,
    simulate,
    step_rk4,
)
from vsgbess.cli import main
from vsgbess.scenarios import preset, run_sweep
from vsgbess.sizing import energy_split

TA_VALUES = (4.0, 10.0)
KD_VALUES = (400.0, 0.0)
KW_VALUES = (20.0, 40.0)
ROCOF_LIMIT = 0.5  # Hz/s


def report(criterion, ok, detail):
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def matrix():
    """All eight study rows keyed by (t_a, k_d, k_omega), plus the wall time."""
    t0 = time.perf_counter()
    rows = {}
    for name in ("table1", "table2"):
        result = run_sweep(preset(name))
        for row in result.rows:
            assert not row.error, row.error
            rows[(row.t_a, row.k_d, row.k_omega)] = row
    return rows, time.perf_counter() - t0


def test_criterion_1_inertia_lowers_rocof(matrix):
    rows, wall = matrix
    ok = True
    details = []
    for kd, kw in itertools.product(KD_VALUES, KW_VALUES):
        r4 = rows[(4.0, kd, kw)].rocof_max
        r10 = rows[(10.0, kd, kw)].rocof_max
        ok &= r10 < r4
        details.append(f"kd={kd:g},kw={kw:g}: {r4:.4f}->{r10:.4f}")
    report(1, ok and wall < 15.0,
           f"rocof drops from t_a=4 to t_a=10 in all cases "
           f"({'; '.join(details)}); 8 runs took {wall:.1f} s")


def test_criterion_2_damping_narrows_the_excursion(matrix):
    rows, _ = matrix
    ok = True
    worst = math.inf
    for ta, kw in itertools.product(TA_VALUES, KW_VALUES):
        damped = rows[(ta, 400.0, kw)]
        undamped = rows[(ta, 0.0, kw)]
        ok &= undamped.f_min < damped.f_min
        ok &= undamped.f_max > damped.f_max
        ok &= undamped.rocof_max > damped.rocof_max
        worst = min(worst, damped.f_min - undamped.f_min,
                    undamped.f_max - damped.f_max)
    report(2, ok, f"k_d=0 strictly widens (f_min, f_max) and raises rocof "
                  f"at every (t_a, k_omega); narrowest widening {worst:.4f} Hz")


def test_criterion_3_droop_shrinks_deviation_without_bigger_battery(matrix):
    rows, _ = matrix
    ok = True
    details = []
    for ta, kd in itertools.product(TA_VALUES, KD_VALUES):
        r20 = rows[(ta, kd, 20.0)]
        r40 = rows[(ta, kd, 40.0)]
        dev20 = max(r20.f_max - 60.0, 60.0 - r20.f_min)
        dev40 = max(r40.f_max - 60.0, 60.0 - r40.f_min)
        ok &= dev40 < dev20
        ok &= r40.discharge_peak <= r20.discharge_peak
        details.append(f"ta={ta:g},kd={kd:g}: dev {dev20:.4f}->{dev40:.4f}, "
                       f"dis {r20.discharge_peak:.4f}->{r40.discharge_peak:.4f}")
    report(3, ok, "k_omega 20->40 shrinks max|f-60| and does not raise the "
                  "discharge peak (" + "; ".join(details) + ")")


def test_criterion_4_more_inertia_needs_more_battery(matrix):
    rows, _ = matrix
    r4 = rows[(4.0, 400.0, 20.0)]
    r10 = rows[(10.0, 400.0, 20.0)]
    ok = r10.charge_peak >= r4.charge_peak and r10.power_range >= r4.power_range
    report(4, ok, f"charge {r4.charge_peak:.4f}->{r10.charge_peak:.4f}, "
                  f"range {r4.power_range:.4f}->{r10.power_range:.4f} "
                  f"non-decreasing from t_a=4 to t_a=10")


def test_criterion_5_compliance_split(matrix):
    rows, _ = matrix
    undamped = {k: r.rocof_max for k, r in rows.items() if k[1] == 0.0}
    damped_t10 = {k: r.rocof_max for k, r in rows.items()
                  if k[1] == 400.0 and k[0] == 10.0}
    violators = {k: v for k, v in undamped.items() if v > ROCOF_LIMIT}
    ok = bool(violators) and all(v <= ROCOF_LIMIT for v in damped_t10.values())
    report(5, ok, f"k_d=0 violations at {sorted(violators)} "
                  f"(max {max(undamped.values()):.4f} Hz/s); k_d=400/t_a=10 "
                  f"cases all within the limit "
                  f"(max {max(damped_t10.values()):.4f} Hz/s)")


def test_criterion_6_quadrature_oracle():
    from vsgbess.dynamics import Trace

    def mk(dt, p):
        p = np.asarray(p, dtype=float)
        z = np.zeros(len(p))
        return Trace(dt=dt, time=np.arange(len(p)) * dt, f_pcc=z + 60.0,
                     omega_vsg=z + 1.0, p_e=p + 1.0, p_m_star=z, p_d=z,
                     p_bess=p, p_pv=z + 1.0)

    def naive(trace, t0, t1):
        stored = delivered = 0.0
        t, p = trace.time, trace.p_bess
        for k in range(len(t) - 1):
            if t[k] < t0 or t[k + 1] > t1:
                continue
            seg = t[k + 1] - t[k]
            delivered += 0.5 * seg * (max(p[k], 0.0) + max(p[k + 1], 0.0))
            stored += 0.5 * seg * (max(-p[k], 0.0) + max(-p[k + 1], 0.0))
        return stored + delivered

    # trapezoidal pulse with grid-aligned ramps: exact area 0.4 pu*s
    dt = 1e-3
    t = np.arange(4001) * dt
    pulse = 0.4 * np.clip(np.minimum((t - 1.0) / 0.1, (2.1 - t) / 0.1), 0.0, 1.0)
    e_pulse = energy_split(mk(dt, pulse), 0.0, 4.0).e_batt
    ok = abs(e_pulse - 0.4) / 0.4 < 1e-6

    # sinusoid: independent same-grid oracle at 1 ms, closed form at 0.1 ms
    t = np.arange(1001) * dt
    tr = mk(dt, np.sin(2 * np.pi * t))
    e_sin = energy_split(tr, 0.0, 1.0).e_batt
    gap_oracle = abs(e_sin - naive(tr, 0.0, 1.0)) / e_sin
    ok &= gap_oracle < 1e-6

    tf = np.arange(10001) * 1e-4
    e_fine = energy_split(mk(1e-4, np.sin(2 * np.pi * tf)), 0.0, 1.0).e_batt
    gap_exact = abs(e_fine - 2.0 / math.pi) / (2.0 / math.pi)
    ok &= gap_exact < 1e-6

    # simulated traces: refinement difference bounded by 1.0 * dt^2
    ev = [Event("load-step", -2.749 / 16.0, 1.0, 0.2)]
    energies = {}
    for sim_dt in (1e-3, 2.5e-4):
        trace = simulate(VsgParams(), GridParams(), BaseQuantities(), ev,
                         t_end=20.0, dt=sim_dt)
        energies[sim_dt] = energy_split(trace, 1.0, 19.0).e_batt
    gap_sim = abs(energies[1e-3] - energies[2.5e-4])
    ok &= gap_sim <= 1.0 * 1e-3 ** 2
    report(6, ok, f"pulse rel err {abs(e_pulse - 0.4) / 0.4:.1e}, sinusoid vs "
                  f"oracle {gap_oracle:.1e} / vs closed form {gap_exact:.1e} "
                  f"(<1e-6); trace refinement gap {gap_sim:.1e} <= dt^2")


def test_criterion_7_integrator_convergence():
    ev = [Event("load-step", -2.749 / 16.0, 1.0, 0.2)]
    vsg = VsgParams(t_a=4.0, k_d=400.0, k_omega=20.0)
    extremes = {}
    for dt in (1e-3, 5e-4):
        trace = simulate(vsg, GridParams(), BaseQuantities(), ev,
                         t_end=40.0, dt=dt)
        extremes[dt] = (float(trace.f_pcc.min()), float(trace.f_pcc.max()))
    d_min = abs(extremes[1e-3][0] - extremes[5e-4][0])
    d_max = abs(extremes[1e-3][1] - extremes[5e-4][1])
    ok = d_min < 1e-4 and d_max < 1e-4

    # measured order on dx/dt = -x over [0, 1]
    def global_error(n):
        x, dt = (1.0,), 1.0 / n
        for k in range(n):
            x = step_rk4(x, k * dt, dt, lambda t, s: (-s[0],))
        return abs(x[0] - math.exp(-1.0))

    order = math.log2(global_error(10) / global_error(20))
    ok &= order >= 3.9
    report(7, ok, f"halving dt moved (f_min, f_max) by ({d_min:.1e}, "
                  f"{d_max:.1e}) Hz (<1e-4); measured RK4 order {order:.2f}")


def test_criterion_8_equilibrium_soundness():
    trace = simulate(VsgParams(), GridParams(), BaseQuantities(), [],
                     t_end=10.0, dt=1e-3)
    df = float(np.max(np.abs(trace.f_pcc - 60.0)))
    dp = float(np.max(np.abs(trace.p_bess)))
    report(8, df < 1e-9 and dp < 1e-9,
           f"undisturbed 10 s run: max|f-60| = {df:.2e} Hz, "
           f"max|p_bess| = {dp:.2e} pu (both < 1e-9)")


def test_criterion_9_determinism(tmp_path):
    out1, out2 = tmp_path / "first", tmp_path / "second"
    for out in (out1, out2):
        assert main(["sweep", "--preset", "table1", "--out", str(out)]) == 0
    files1 = sorted(p.name for p in out1.iterdir())
    files2 = sorted(p.name for p in out2.iterdir())
    ok = files1 == files2 and len(files1) == 5
    identical = all((out1 / n).read_bytes() == (out2 / n).read_bytes()
                    for n in files1)
    report(9, ok and identical,
           f"two table1 preset executions wrote byte-identical files "
           f"({', '.join(files1)})")
