"""Battery power/energy rating from a trace.

Energies are trapezoidal integrals of battery power in pu*s on the inverter
base, split into stored (absorbed, negative samples) and delivered (supplied,
positive samples) parts. Each sample's trapezoid weight is routed by the sign
of the sample, so the split is exactly additive across sub-intervals cut at
any sample and scales exactly with the signal.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class EnergySplit(NamedTuple):
    ess_stored: float     # total absorbed energy [pu*s], >= 0
    ess_delivered: float  # total supplied energy [pu*s], >= 0
    e_batt: float         # ess_stored + ess_delivered [pu*s]


class FirstSwingEnergy(NamedTuple):
    energy: float    # |integral of p_bess| over the first lobe [pu*s]
    crossed: bool    # False when p_bess never crossed zero before trace end
    t_cross: float   # crossing time [s] (trace end when not crossed)


@dataclass(frozen=True)
class SizingReport:
    ess_stored: float        # [pu*s]
    ess_delivered: float     # [pu*s]
    e_batt: float            # [pu*s]
    e_first_swing: float     # [pu*s]
    power_rating: float      # max(charge_peak, discharge_peak) [pu]
    power_rating_mw: float   # [MW]
    energy_rating_mwh: float  # e_batt converted on s_base [MWh]
    ten_percent_rule_mw: float  # 0.1 * DG capacity [MW]
    rocof_compliant: bool    # rocof_max <= limit


def _interp(trace, t):
    """Linear interpolation of p_bess at time t."""
    return float(np.interp(t, trace.time, trace.p_bess))


def energy_split(trace, t0, t1):
    """Split the battery energy over [t0, t1] into stored/delivered parts.

    Trapezoidal integration on the sample grid with the boundary segments
    interpolated; node contributions are attributed by sample sign.
    """
    if not (t0 < t1):
        raise ValueError(f"need t0 < t1 (got {t0!r}, {t1!r})")
    if t0 < trace.time[0] - 1e-12 or t1 > trace.time[-1] + 1e-12:
        raise ValueError(
            f"[{t0!r}, {t1!r}] lies outside the trace "
            f"[{trace.time[0]!r}, {trace.time[-1]!r}]"
        )
    dt = trace.dt
    i0 = math.ceil(t0 / dt - 1e-9)
    i1 = math.floor(t1 / dt + 1e-9)

    times = [t0] if t0 < trace.time[i0] else []
    values = [_interp(trace, t0)] if times else []
    times += list(trace.time[i0:i1 + 1])
    values += list(trace.p_bess[i0:i1 + 1])
    if t1 > trace.time[i1]:
        times.append(t1)
        values.append(_interp(trace, t1))

    times = np.asarray(times)
    values = np.asarray(values)
    seg = np.diff(times)
    weights = np.zeros_like(times)
    weights[:-1] += 0.5 * seg
    weights[1:] += 0.5 * seg

    contrib = weights * values
    delivered = float(contrib[values > 0].sum())
    stored = float(-contrib[values < 0].sum())
    return EnergySplit(stored, delivered, stored + delivered)


def energy_to_first_zero_crossing(trace, t_event, atol=1e-12):
    """Battery energy from the event start to the first sign reversal.

    The lobe sign is taken from the first sample after ``t_event`` whose
    magnitude exceeds ``atol``; the crossing time is linearly interpolated
    between the bracketing samples (a sample exactly at zero is the
    crossing). With no crossing the integral runs to the trace end and the
    result is flagged.
    """
    if t_event < trace.time[0] - 1e-12 or t_event > trace.time[-1] + 1e-12:
        raise ValueError(f"t_event {t_event!r} outside the trace")
    p = trace.p_bess
    t = trace.time
    k0 = int(np.searchsorted(t, t_event))

    nonzero = np.where(np.abs(p[k0:]) > atol)[0]
    if len(nonzero) == 0:
        return FirstSwingEnergy(0.0, False, float(t[-1]))
    k_lobe = k0 + int(nonzero[0])
    sign = 1.0 if p[k_lobe] > 0 else -1.0

    flipped = np.where(sign * p[k_lobe + 1:] <= 0.0)[0]
    if len(flipped) == 0:
        e = energy_split(trace, t_event, float(t[-1]))
        return FirstSwingEnergy(e.e_batt, False, float(t[-1]))

    k_after = k_lobe + 1 + int(flipped[0])
    if p[k_after] == 0.0:
        t_cross = float(t[k_after])
    else:
        p_a, p_b = float(p[k_after - 1]), float(p[k_after])
        t_cross = float(t[k_after - 1]) + trace.dt * p_a / (p_a - p_b)
    e = energy_split(trace, t_event, t_cross)
    return FirstSwingEnergy(e.e_batt, True, t_cross)


def rocof_compliance(rocof_max, limit=0.5):
    """True iff the measured ROCOF does not exceed the limit (boundary passes)."""
    if not rocof_max >= 0:
        raise ValueError(f"rocof_max must be >= 0 (got {rocof_max!r})")
    return rocof_max <= limit


def build_report(metrics, trace, t_event, base, dg_capacity_mw,
                 horizon=30.0, rocof_limit=0.5):
    """Assemble the battery rating report for one run.

    Energies integrate over [t_event, t_event + horizon] clipped to the
    trace. The MWh rating converts the pu*s energy on ``base.s_base``; the
    10% heuristic is reported alongside for comparison.
    """
    t1 = min(t_event + horizon, float(trace.time[-1]))
    stored, delivered, e_batt = energy_split(trace, t_event, t1)
    first = energy_to_first_zero_crossing(trace, t_event)
    power_rating = max(metrics.charge_peak, metrics.discharge_peak)
    return SizingReport(
        ess_stored=stored,
        ess_delivered=delivered,
        e_batt=e_batt,
        e_first_swing=first.energy,
        power_rating=power_rating,
        power_rating_mw=power_rating * base.s_base,
        energy_rating_mwh=e_batt * base.s_base / 3600.0,
        ten_percent_rule_mw=0.1 * dg_capacity_mw,
        rocof_compliant=rocof_compliance(metrics.rocof_max, rocof_limit),
    )


__all__ = [
    "EnergySplit",
    "FirstSwingEnergy",
    "SizingReport",
    "build_report",
    "energy_split",
    "energy_to_first_zero_crossing",
    "rocof_compliance",
]
