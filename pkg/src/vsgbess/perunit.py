"""Per-unit bases, parameter containers and validation.

All speeds are carried in per-unit of the nominal angular frequency; powers on
the inverter side are per-unit of ``s_base`` (the PV/inverter MW rating) and
powers on the grid side are per-unit of ``grid_base_mw``. Frequencies only
become Hz at the metrics boundary.
"""

import math
from dataclasses import dataclass, field


class ValidationError(ValueError):
    """One or more parameter invariants are violated.

    ``problems`` lists every violation, each naming the offending field and
    the bound it breaks.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InfeasibleOperatingPoint(ValueError):
    """No steady-state angle with |delta| < pi/2 exists for the requested setpoint."""


@dataclass(frozen=True)
class BaseQuantities:
    """Power and frequency bases shared by every module."""

    s_base: float = 2.75     # inverter/PV power base [MW]
    f_base: float = 60.0     # nominal frequency [Hz]
    omega_base: float = field(init=False)  # 2*pi*f_base [rad/s], derived

    def __post_init__(self):
        object.__setattr__(self, "omega_base", 2.0 * math.pi * self.f_base)


@dataclass(frozen=True)
class VsgParams:
    """Control constants of the virtual synchronous generator."""

    t_a: float = 4.0         # virtual inertia time constant [s]
    k_d: float = 400.0       # damping factor [pu power / pu speed]
    k_omega: float = 20.0    # droop gain [pu power / pu speed]
    p_star: float = 1.0      # external active power reference [pu]
    omega_star: float = 1.0  # reference VSG speed [pu]
    e_a: float = 1.0         # armature (internal) voltage [pu]
    e_t: float = 1.0         # terminal/grid voltage [pu]
    x_t: float = 0.6         # equivalent link reactance [pu]
    t_pll: float = 0.10      # PLL measurement filter time constant [s]
    p_pv: float = 1.0        # constant PV output [pu]


@dataclass(frozen=True)
class GridParams:
    """Aggregate-grid swing and governor constants.

    The values stand in for a small external network; they are calibration
    knobs, not published data. ``p_gen0=None`` means "balance the network at
    t=0", which is what the simulator enforces anyway.
    """

    h_grid: float = 9.0         # aggregate inertia constant [s] on grid base
    d_grid: float = 1.0         # load/machine damping [pu]
    r_gov: float = 0.03         # governor droop [pu]
    t_gov: float = 0.4          # governor time constant [s]
    p_load0: float = 1.0        # initial total load [pu] on grid base
    p_gen0: float | None = None  # initial grid generation [pu]; None = auto-balance
    grid_base_mw: float = 16.0  # grid-side power base [MW]


def to_per_unit(value_mw, base):
    """Convert a MW quantity to per-unit on ``base.s_base``."""
    if not math.isfinite(value_mw):
        raise ValidationError([f"value_mw must be finite (got {value_mw!r})"])
    return value_mw / base.s_base


def equilibrium_angle(vsg):
    """Steady-state link angle delta* with the VSG at its reference speed.

    Solves (e_a*e_t/x_t)*sin(delta) = p_star + k_omega*(omega_star - 1) on the
    stable branch |delta| < pi/2.
    """
    p_eq = vsg.p_star + vsg.k_omega * (vsg.omega_star - 1.0)
    p_max = vsg.e_a * vsg.e_t / vsg.x_t
    ratio = p_eq / p_max
    if not -1.0 < ratio < 1.0:
        raise InfeasibleOperatingPoint(
            f"setpoint {p_eq:.6g} pu exceeds the link limit {p_max:.6g} pu; "
            "no equilibrium with |delta| < pi/2"
        )
    return math.asin(ratio)


def _positive(name, value):
    return [] if value > 0 else [f"{name} must be > 0 (got {value!r})"]


def _non_negative(name, value):
    return [] if value >= 0 else [f"{name} must be >= 0 (got {value!r})"]


def validation_problems(vsg, grid, base):
    """Every violated invariant of a (vsg, grid, base) configuration."""
    problems = []
    problems += _positive("s_base", base.s_base)
    problems += _positive("f_base", base.f_base)

    problems += _positive("t_a", vsg.t_a)
    problems += _non_negative("k_d", vsg.k_d)
    problems += _non_negative("k_omega", vsg.k_omega)
    problems += _positive("x_t", vsg.x_t)
    problems += _positive("e_a", vsg.e_a)
    problems += _positive("e_t", vsg.e_t)
    problems += _positive("t_pll", vsg.t_pll)
    problems += _non_negative("p_pv", vsg.p_pv)

    problems += _positive("h_grid", grid.h_grid)
    problems += _non_negative("d_grid", grid.d_grid)
    problems += _positive("r_gov", grid.r_gov)
    problems += _positive("t_gov", grid.t_gov)
    problems += _positive("grid_base_mw", grid.grid_base_mw)

    finite_fields = [(vsg, ("t_a", "k_d", "k_omega", "p_star", "omega_star",
                            "e_a", "e_t", "x_t", "t_pll", "p_pv")),
                     (grid, ("h_grid", "d_grid", "r_gov", "t_gov", "p_load0",
                             "grid_base_mw")),
                     (base, ("s_base", "f_base"))]
    for obj, names in finite_fields:
        for name in names:
            v = getattr(obj, name)
            if not math.isfinite(v):
                problems.append(f"{name} must be finite (got {v!r})")
    if grid.p_gen0 is not None and not math.isfinite(grid.p_gen0):
        problems.append(f"p_gen0 must be finite (got {grid.p_gen0!r})")

    # t=0 balance: explicit p_gen0 must match the auto-balanced value.
    if not problems and grid.p_gen0 is not None:
        try:
            balanced = balanced_grid_generation(vsg, grid, base)
        except InfeasibleOperatingPoint:
            balanced = None
        if balanced is not None and abs(grid.p_gen0 - balanced) > 1e-9:
            problems.append(
                f"p_gen0 must balance the network at t=0: expected "
                f"{balanced!r}, got {grid.p_gen0!r}"
            )
    return problems


def balanced_grid_generation(vsg, grid, base):
    """Grid generation [pu on grid base] that balances the network at t=0."""
    delta0 = equilibrium_angle(vsg)
    p_e0 = (vsg.e_a * vsg.e_t / vsg.x_t) * math.sin(delta0)
    return grid.p_load0 - p_e0 * (base.s_base / grid.grid_base_mw)


def validate(vsg, grid, base):
    """Return (vsg, grid, base) unchanged if every invariant holds.

    Raises ValidationError listing all violations otherwise. Idempotent: a
    validated configuration passes through untouched.
    """
    problems = validation_problems(vsg, grid, base)
    if problems:
        raise ValidationError(problems)
    return vsg, grid, base


__all__ = [
    "BaseQuantities",
    "GridParams",
    "InfeasibleOperatingPoint",
    "ValidationError",
    "VsgParams",
    "balanced_grid_generation",
    "equilibrium_angle",
    "to_per_unit",
    "validate",
    "validation_problems",
]
