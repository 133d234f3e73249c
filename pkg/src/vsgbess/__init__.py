"""Reduced-order VSG frequency dynamics and battery-sizing toolkit."""

from .perunit import (
    BaseQuantities,
    GridParams,
    InfeasibleOperatingPoint,
    ValidationError,
    VsgParams,
    equilibrium_angle,
    to_per_unit,
    validate,
)
from .dynamics import (
    Event,
    SimState,
    SimulationFault,
    Trace,
    bess_power,
    damping_power,
    derivatives,
    droop_power,
    electrical_power,
    simulate,
    step_rk4,
)
from .metrics import (
    FrequencyMetrics,
    battery_peaks,
    compute_metrics,
    extrema,
    rocof,
    settling_time,
)
from .sizing import (
    EnergySplit,
    FirstSwingEnergy,
    SizingReport,
    build_report,
    energy_split,
    energy_to_first_zero_crossing,
    rocof_compliance,
)
from .scenarios import (
    Scenario,
    SweepResult,
    SweepRow,
    export,
    load_config,
    preset,
    run_sweep,
)

__version__ = "0.1.0"
