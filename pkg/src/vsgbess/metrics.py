"""Frequency and battery-power metrics of a simulation trace.

All functions are pure: same trace in, bit-identical numbers out.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FrequencyMetrics:
    f_min: float            # [Hz]
    f_max: float            # [Hz]
    rocof_max: float        # max absolute windowed slope [Hz/s]
    settling_time: float | None  # [s], None if the band is never held
    charge_peak: float      # max battery absorption, reported positive [pu]
    discharge_peak: float   # max battery supply [pu]
    power_range: float      # charge_peak + discharge_peak [pu]


def rocof(trace, window=0.1):
    """Max absolute windowed frequency slope [Hz/s].

    The window is snapped to a whole number of steps; the slope over each
    placement is |f(t+w) - f(t)| / w with w the snapped width.
    """
    if not window >= trace.dt:
        raise ValueError(f"window must be >= dt = {trace.dt!r} (got {window!r})")
    m = round(window / trace.dt)
    f = trace.f_pcc
    if len(f) <= m:
        raise ValueError(
            f"trace too short for window: {len(f)} samples, need > {m}"
        )
    w = m * trace.dt
    return float(np.max(np.abs(f[m:] - f[:-m])) / w)


def extrema(trace):
    """Global (f_min, f_max) of the PCC frequency [Hz]."""
    if len(trace.f_pcc) == 0:
        raise ValueError("empty trace")
    return float(np.min(trace.f_pcc)), float(np.max(trace.f_pcc))


def battery_peaks(trace):
    """(charge_peak, discharge_peak) of battery power [pu], both >= 0."""
    if len(trace.p_bess) == 0:
        raise ValueError("empty trace")
    charge = max(0.0, -float(np.min(trace.p_bess)))
    discharge = max(0.0, float(np.max(trace.p_bess)))
    return charge, discharge


def settling_time(trace, band=0.05, t_event=0.0, f_nominal=60.0):
    """First time >= t_event from which |f - f_nominal| stays within band.

    Returns t_event itself when the trace is already inside the band from
    there on, and None when the band is never held to the end.
    """
    if not band > 0:
        raise ValueError(f"band must be > 0 (got {band!r})")
    k0 = int(np.searchsorted(trace.time, t_event))
    outside = np.abs(trace.f_pcc[k0:] - f_nominal) > band
    if not outside.any():
        return float(t_event)
    last_out = k0 + int(np.where(outside)[0][-1])
    if last_out + 1 >= len(trace.time):
        return None
    return float(trace.time[last_out + 1])


def compute_metrics(trace, rocof_window=0.1, band=0.05, t_event=0.0,
                    f_nominal=60.0):
    """Assemble the full FrequencyMetrics record for one trace."""
    f_min, f_max = extrema(trace)
    charge, discharge = battery_peaks(trace)
    return FrequencyMetrics(
        f_min=f_min,
        f_max=f_max,
        rocof_max=rocof(trace, rocof_window),
        settling_time=settling_time(trace, band, t_event, f_nominal),
        charge_peak=charge,
        discharge_peak=discharge,
        power_range=charge + discharge,
    )


__all__ = [
    "FrequencyMetrics",
    "battery_peaks",
    "compute_metrics",
    "extrema",
    "rocof",
    "settling_time",
]
