"""Continuous-time model of a PV/battery inverter run as a virtual synchronous
generator against an aggregate grid, integrated with fixed-step RK4.

The state is five scalars:

* ``omega_vsg``  -- VSG virtual-rotor speed [pu]
* ``delta``      -- VSG-to-grid relative angle [rad]
* ``omega_grid`` -- aggregate grid speed [pu]
* ``omega_pll``  -- PLL-tracked grid speed [pu], used only by the damping term
* ``p_gov``      -- governor output [pu on grid base]

The VSG swing balances the droop reference against the link power and the
damping power; the grid is a single-machine swing with first-order governor.
Timed power-imbalance events perturb the grid-side load or generation.

The trace's ``f_pcc`` column reports the VSG virtual-rotor speed in Hz: the
plant-side bus is angle-driven by the inverter, so the frequency seen at the
point of common coupling follows the virtual rotor during transients and
recovers the grid speed in steady state.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .perunit import (
    ValidationError,
    balanced_grid_generation,
    equilibrium_angle,
    validate,
)


class SimulationFault(RuntimeError):
    """The integrator produced a non-finite state."""


class SimState(NamedTuple):
    omega_vsg: float   # VSG speed [pu]
    delta: float       # relative angle theta_vsg - theta_grid [rad]
    omega_grid: float  # aggregate grid speed [pu]
    omega_pll: float   # PLL-tracked speed [pu]
    p_gov: float       # governor output [pu on grid base]


@dataclass(frozen=True)
class Event:
    """A timed power-imbalance contingency on the grid side.

    ``magnitude`` is signed and in pu on the grid base: a load-step of -0.17 pu
    models losing ~0.17 pu of load for ``duration`` seconds. ``duration`` may
    be ``math.inf`` for a sustained step.
    """

    kind: str          # "load-step" | "generation-step"
    magnitude: float   # signed [pu on grid base]
    t_start: float     # [s]
    duration: float    # [s], may be math.inf

    KINDS = ("load-step", "generation-step")

    def __post_init__(self):
        problems = []
        if self.kind not in self.KINDS:
            problems.append(f"kind must be one of {self.KINDS} (got {self.kind!r})")
        if not self.t_start >= 0:
            problems.append(f"t_start must be >= 0 (got {self.t_start!r})")
        if not self.duration > 0:
            problems.append(f"duration must be > 0 (got {self.duration!r})")
        if not math.isfinite(self.magnitude):
            problems.append(f"magnitude must be finite (got {self.magnitude!r})")
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class Trace:
    """Fixed-step time series from one simulation run.

    All columns are equal-length numpy arrays with ``time[k] = k*dt``. The
    battery column satisfies ``p_bess = p_e - p_pv`` at every sample
    (discharge-positive).
    """

    dt: float
    time: np.ndarray      # [s]
    f_pcc: np.ndarray     # [Hz]
    omega_vsg: np.ndarray  # [pu]
    p_e: np.ndarray       # link (inverter output) power [pu]
    p_m_star: np.ndarray  # droop reference power [pu]
    p_d: np.ndarray       # damping power [pu]
    p_bess: np.ndarray    # battery power, discharge-positive [pu]
    p_pv: np.ndarray      # PV output [pu]

    @property
    def n_steps(self):
        return len(self.time) - 1

    @property
    def t_end(self):
        return float(self.time[-1])


def electrical_power(delta, e_a, e_t, x_t):
    """Link power transfer (e_a*e_t/x_t)*sin(delta) [pu]."""
    if not x_t > 0:
        raise ValueError(f"x_t must be > 0 (got {x_t!r})")
    return (e_a * e_t / x_t) * math.sin(delta)


def droop_power(p_star, k_omega, omega_star, omega_vsg):
    """Droop-corrected power reference p_star + k_omega*(omega_star - omega_vsg) [pu]."""
    return p_star + k_omega * (omega_star - omega_vsg)


def damping_power(k_d, omega_vsg, omega_pll):
    """Damping power k_d*(omega_vsg - omega_pll) [pu]."""
    return k_d * (omega_vsg - omega_pll)


def bess_power(p_inverter, p_pv):
    """Battery share of the inverter output [pu]; positive = discharging."""
    return p_inverter - p_pv


def derivatives(state, vsg, grid, base, active_events=(), t=0.0,
                damping_outside_inertia=False, p_gen0=None):
    """Time derivative of ``state``.

    ``active_events`` is the set of events in force at time ``t``; load-steps
    add their magnitude to the grid load, generation-steps to grid generation.
    ``p_gen0`` overrides the auto-balanced initial grid generation; the
    default balances the network so the nominal state is a fixed point.

    ``damping_outside_inertia`` applies the damping power outside the 1/t_a
    factor instead of inside it (an alternative swing formulation kept for
    comparison).
    """
    omega_vsg, delta, omega_grid, omega_pll, p_gov = state
    if p_gen0 is None:
        p_gen0 = balanced_grid_generation(vsg, grid, base)

    p_e = electrical_power(delta, vsg.e_a, vsg.e_t, vsg.x_t)
    p_m_star = droop_power(vsg.p_star, vsg.k_omega, vsg.omega_star, omega_vsg)
    p_d = damping_power(vsg.k_d, omega_vsg, omega_pll)

    if damping_outside_inertia:
        d_omega_vsg = (p_m_star - p_e) / vsg.t_a - p_d
    else:
        d_omega_vsg = (p_m_star - p_e - p_d) / vsg.t_a

    p_load = grid.p_load0
    p_gen = p_gen0
    for ev in active_events:
        if ev.kind == "load-step":
            p_load += ev.magnitude
        else:
            p_gen += ev.magnitude

    rebase = base.s_base / grid.grid_base_mw
    d_omega_grid = (
        p_gen + p_gov + p_e * rebase - p_load - grid.d_grid * (omega_grid - 1.0)
    ) / (2.0 * grid.h_grid)
    d_delta = (omega_vsg - omega_grid) * base.omega_base
    d_omega_pll = (omega_grid - omega_pll) / vsg.t_pll
    d_p_gov = (-(omega_grid - 1.0) / grid.r_gov - p_gov) / grid.t_gov

    return SimState(d_omega_vsg, d_delta, d_omega_grid, d_omega_pll, d_p_gov)


def step_rk4(state, t, dt, deriv):
    """One classical 4th-order Runge-Kutta step of ``deriv(t, state)``.

    Works on any tuple of floats, so the integrator can be exercised on
    scalar test systems as well as on :class:`SimState`.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0 (got {dt!r})")
    half = 0.5 * dt
    k1 = deriv(t, state)
    k2 = deriv(t + half, tuple(s + half * k for s, k in zip(state, k1)))
    k3 = deriv(t + half, tuple(s + half * k for s, k in zip(state, k2)))
    k4 = deriv(t + dt, tuple(s + dt * k for s, k in zip(state, k3)))
    sixth = dt / 6.0
    out = tuple(
        s + sixth * (a + 2.0 * (b + c) + d)
        for s, a, b, c, d in zip(state, k1, k2, k3, k4)
    )
    return type(state)(*out) if isinstance(state, SimState) else out


def _event_windows(events, dt, n_steps):
    """Snap each event to step indices [k_on, k_off); placement error <= dt/2."""
    windows = []
    for ev in events:
        k_on = round(ev.t_start / dt)
        k_off = n_steps if math.isinf(ev.duration) else round((ev.t_start + ev.duration) / dt)
        k_on = max(0, min(k_on, n_steps))
        k_off = max(0, min(k_off, n_steps))
        if k_off > k_on:
            windows.append((k_on, k_off, ev))
    return windows


def simulate(vsg, grid, base, events=(), t_end=40.0, dt=1e-3,
             damping_outside_inertia=False):
    """Integrate the model from its equilibrium and return the full Trace.

    The run starts at the steady state (all speeds 1 pu, delta from the link
    equation, governor at zero, grid generation balanced), steps to ``t_end``
    with fixed-step RK4, and snaps every event on/off time to the nearest
    step boundary.

    Parameters
    ----------
    vsg, grid, base : parameter containers, validated on entry.
    events : iterable of Event
    t_end : simulated horizon [s]
    dt : step [s]; must satisfy dt <= t_pll/5 to sample the fastest mode
    damping_outside_inertia : use the alternative swing formulation

    Raises
    ------
    ValidationError, InfeasibleOperatingPoint, SimulationFault
    """
    validate(vsg, grid, base)

    problems = []
    if not t_end > 0:
        problems.append(f"t_end must be > 0 (got {t_end!r})")
    if not dt > 0:
        problems.append(f"dt must be > 0 (got {dt!r})")
    elif dt > vsg.t_pll / 5.0:
        problems.append(f"dt must be <= t_pll/5 = {vsg.t_pll / 5.0!r} (got {dt!r})")
    if problems:
        raise ValidationError(problems)

    delta0 = equilibrium_angle(vsg)
    p_gen0 = balanced_grid_generation(vsg, grid, base)
    state = SimState(1.0, delta0, 1.0, 1.0, 0.0)

    n = round(t_end / dt)
    windows = _event_windows(events, dt, n)

    omega_vsg = np.empty(n + 1)
    delta_col = np.empty(n + 1)
    omega_pll_col = np.empty(n + 1)

    def record(k, s):
        omega_vsg[k] = s.omega_vsg
        delta_col[k] = s.delta
        omega_pll_col[k] = s.omega_pll

    record(0, state)
    for k in range(n):
        active = tuple(ev for k_on, k_off, ev in windows if k_on <= k < k_off)

        def deriv(t, s, active=active):
            return derivatives(s, vsg, grid, base, active, t,
                               damping_outside_inertia, p_gen0)

        state = step_rk4(state, k * dt, dt, deriv)
        if not all(math.isfinite(x) for x in state):
            raise SimulationFault(
                f"non-finite state at step {k + 1} (t = {(k + 1) * dt:.6g} s)"
            )
        record(k + 1, state)

    time = np.arange(n + 1) * dt
    p_e = (vsg.e_a * vsg.e_t / vsg.x_t) * np.sin(delta_col)
    p_m_star = vsg.p_star + vsg.k_omega * (vsg.omega_star - omega_vsg)
    p_d = vsg.k_d * (omega_vsg - omega_pll_col)
    p_pv = np.full(n + 1, vsg.p_pv)
    p_bess = p_e - p_pv
    f_pcc = base.f_base * omega_vsg

    trace = Trace(dt=dt, time=time, f_pcc=f_pcc, omega_vsg=omega_vsg,
                  p_e=p_e, p_m_star=p_m_star, p_d=p_d, p_bess=p_bess, p_pv=p_pv)
    for col in (trace.time, trace.f_pcc, trace.omega_vsg, trace.p_e,
                trace.p_m_star, trace.p_d, trace.p_bess, trace.p_pv):
        col.flags.writeable = False
    return trace


__all__ = [
    "Event",
    "SimState",
    "SimulationFault",
    "Trace",
    "bess_power",
    "damping_power",
    "derivatives",
    "droop_power",
    "electrical_power",
    "simulate",
    "step_rk4",
]
