"""ROCOF, extrema, battery peaks and settling time."""

import numpy as np
import pytest

from vsgbess import (
    BaseQuantities,
    Event,
    GridParams,
    VsgParams,
    battery_peaks,
    compute_metrics,
    extrema,
    rocof,
    settling_time,
    simulate,
)
from vsgbess.dynamics import Trace


def make_trace(dt, f_pcc=None, p_bess=None, n=None):
    """Synthetic trace; unspecified columns sit at their nominal values."""
    if n is None:
        n = len(f_pcc) if f_pcc is not None else len(p_bess)
    z = np.zeros(n)
    f = np.full(n, 60.0) if f_pcc is None else np.asarray(f_pcc, dtype=float)
    p = z if p_bess is None else np.asarray(p_bess, dtype=float)
    return Trace(dt=dt, time=np.arange(n) * dt, f_pcc=f, omega_vsg=f / 60.0,
                 p_e=p + 1.0, p_m_star=z, p_d=z, p_bess=p, p_pv=z + 1.0)


def simulated_trace():
    return simulate(VsgParams(t_a=4.0, k_d=400.0, k_omega=20.0), GridParams(),
                    BaseQuantities(), [Event("load-step", -2.749 / 16.0, 1.0, 0.2)],
                    t_end=10.0, dt=1e-3)


# -- rocof ----------------------------------------------------------------

def test_rocof_exact_on_linear_ramp():
    t = np.arange(0, 5.0, 1e-3)
    trace = make_trace(1e-3, f_pcc=60.0 - 0.5 * t)
    assert rocof(trace, window=0.1) == pytest.approx(0.5, rel=1e-12)


def test_rocof_zero_on_flat_signal():
    trace = make_trace(1e-3, n=2000)
    assert rocof(trace, window=0.1) == 0.0


def test_rocof_matches_dense_finite_difference_oracle():
    trace = simulated_trace()
    m = round(0.1 / trace.dt)
    f = trace.f_pcc
    oracle = max(abs(f[k + m] - f[k]) for k in range(len(f) - m)) / (m * trace.dt)
    assert abs(rocof(trace, 0.1) - oracle) < 1e-9


def test_rocof_window_of_one_step_is_max_first_difference():
    trace = simulated_trace()
    expected = float(np.max(np.abs(np.diff(trace.f_pcc))) / trace.dt)
    assert rocof(trace, window=trace.dt) == pytest.approx(expected, rel=1e-12)


def test_rocof_rejects_window_below_dt_or_short_trace():
    trace = make_trace(1e-3, n=50)
    with pytest.raises(ValueError):
        rocof(trace, window=1e-4)
    with pytest.raises(ValueError):
        rocof(trace, window=0.1)  # only 50 samples


# -- extrema / battery peaks ----------------------------------------------

def test_extrema_undisturbed():
    assert extrema(make_trace(1e-3, n=100)) == (60.0, 60.0)


def test_extrema_singleton_spike():
    f = np.full(200, 60.0)
    f[57] = 60.5
    assert extrema(make_trace(1e-3, f_pcc=f))[1] == 60.5


def test_extrema_empty_trace_is_an_error():
    with pytest.raises(ValueError):
        extrema(make_trace(1e-3, f_pcc=np.array([])))


def test_battery_peaks_zero_trace():
    assert battery_peaks(make_trace(1e-3, n=10)) == (0.0, 0.0)


def test_battery_peaks_square_wave():
    p = np.where(np.arange(100) < 50, -0.2, 0.3)
    assert battery_peaks(make_trace(1e-3, p_bess=p)) == (
        pytest.approx(0.2), pytest.approx(0.3))


# -- settling -------------------------------------------------------------

def test_settling_time_of_undisturbed_run_is_the_event_time():
    trace = make_trace(1e-3, n=3000)
    assert settling_time(trace, band=0.05, t_event=1.0) == 1.0


def test_settling_time_none_when_band_never_held():
    f = 60.0 + 0.2 * np.ones(1000)
    assert settling_time(make_trace(1e-3, f_pcc=f), band=0.05, t_event=0.1) is None


def test_settling_time_finds_reentry():
    f = np.full(4000, 60.0)
    f[1000:2500] = 60.3
    trace = make_trace(1e-3, f_pcc=f)
    assert settling_time(trace, band=0.05, t_event=1.0) == pytest.approx(2.5)


def test_metrics_shift_with_prepended_quiet_samples():
    trace = simulated_trace()
    shift = 500  # 0.5 s of nominal samples up front
    f = np.concatenate([np.full(shift, 60.0), trace.f_pcc])
    p = np.concatenate([np.zeros(shift), trace.p_bess])
    shifted = make_trace(trace.dt, f_pcc=f, p_bess=p)

    m0 = compute_metrics(trace, 0.1, 0.05, t_event=1.0)
    m1 = compute_metrics(shifted, 0.1, 0.05, t_event=1.5)
    assert m1.f_min == m0.f_min and m1.f_max == m0.f_max
    assert m1.rocof_max == m0.rocof_max
    assert m1.charge_peak == m0.charge_peak
    assert m1.discharge_peak == m0.discharge_peak
    assert m1.settling_time == pytest.approx(m0.settling_time + 0.5, abs=1e-12)


def test_metrics_are_pure():
    trace = simulated_trace()
    a = compute_metrics(trace, 0.1, 0.05, 1.0)
    b = compute_metrics(trace, 0.1, 0.05, 1.0)
    assert a == b


def test_power_range_is_sum_of_peaks():
    trace = simulated_trace()
    m = compute_metrics(trace, 0.1, 0.05, 1.0)
    assert m.power_range == m.charge_peak + m.discharge_peak
    assert m.f_min <= 60.0 <= m.f_max


def test_higher_droop_settles_no_later():
    # high-inertia damped case: k_omega = 40 returns to band first
    settle = {}
    for k_omega in (20.0, 40.0):
        trace = simulate(VsgParams(t_a=10.0, k_d=400.0, k_omega=k_omega),
                         GridParams(), BaseQuantities(),
                         [Event("load-step", -2.749 / 16.0, 1.0, 0.2)],
                         t_end=40.0, dt=1e-3)
        settle[k_omega] = settling_time(trace, band=0.05, t_event=1.0)
    assert settle[40.0] is not None and settle[20.0] is not None
    assert settle[40.0] <= settle[20.0]
