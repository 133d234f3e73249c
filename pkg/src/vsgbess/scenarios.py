"""Scenario configuration, the study-matrix sweep, and CSV/table export.

Two presets are compiled in so the standard contingency matrix runs with no
configuration: ``table1`` is the low-inertia matrix (t_a = 4 s) and
``table2`` the high-inertia one (t_a = 10 s), each crossing damping
k_d in {400, 0} with droop k_omega in {20, 40} under a 2.749 MW / 0.2 s
load-loss event.
"""

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .dynamics import Event, Trace, simulate
from .metrics import compute_metrics
from .perunit import (
    BaseQuantities,
    GridParams,
    ValidationError,
    VsgParams,
    validation_problems,
)
from .sizing import build_report

TRACE_HEADER = "time_s,f_pcc_hz,p_e_pu,p_bess_pu,p_m_star_pu,p_d_pu"
SUMMARY_HEADER = (
    "name,t_a_s,k_d_pu,k_omega_pu,f_min_hz,f_max_hz,rocof_max_hz_per_s,"
    "charge_peak_pu,discharge_peak_pu,power_range_pu,e_batt_pu_s,"
    "rocof_compliant,error"
)

DEFAULT_EVENT_MW = -2.749   # load lost during the contingency [MW]
DEFAULT_EVENT_START = 1.0   # [s]
DEFAULT_EVENT_DURATION = 0.2  # [s]


@dataclass(frozen=True)
class Scenario:
    """One fully-specified simulation case."""

    name: str
    vsg: VsgParams = VsgParams()
    grid: GridParams = GridParams()
    base: BaseQuantities = BaseQuantities()
    events: tuple = ()
    t_end: float = 40.0        # [s]
    dt: float = 1e-3           # [s]
    rocof_window: float = 0.1  # [s]


@dataclass(frozen=True)
class SweepRow:
    name: str
    t_a: float
    k_d: float
    k_omega: float
    f_min: float = math.nan
    f_max: float = math.nan
    rocof_max: float = math.nan
    charge_peak: float = math.nan
    discharge_peak: float = math.nan
    power_range: float = math.nan
    e_batt: float = math.nan
    compliant: bool | None = None
    error: str = ""


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    traces: dict = field(default_factory=dict)


def default_event(grid=GridParams()):
    """The preset contingency: a 2.749 MW load loss lasting 0.2 s."""
    return Event(
        kind="load-step",
        magnitude=DEFAULT_EVENT_MW / grid.grid_base_mw,
        t_start=DEFAULT_EVENT_START,
        duration=DEFAULT_EVENT_DURATION,
    )


def preset(name):
    """Built-in scenario matrices: 'table1' (t_a=4 s) or 'table2' (t_a=10 s)."""
    t_a = {"table1": 4.0, "table2": 10.0}.get(name)
    if t_a is None:
        raise ValidationError([f"unknown preset {name!r}; choose table1 or table2"])
    grid = GridParams()
    events = (default_event(grid),)
    scenarios = []
    for k_d in (400.0, 0.0):
        for k_omega in (20.0, 40.0):
            scenarios.append(Scenario(
                name=f"ta{t_a:g}-kd{k_d:g}-kw{k_omega:g}",
                vsg=VsgParams(t_a=t_a, k_d=k_d, k_omega=k_omega),
                grid=grid,
                events=events,
            ))
    return scenarios


def _build_event(spec, grid, where, problems):
    kind = spec.get("kind", "load-step")
    if "magnitude_mw" in spec and "magnitude" in spec:
        problems.append(f"{where}: give magnitude or magnitude_mw, not both")
        return None
    if "magnitude_mw" in spec:
        magnitude = spec["magnitude_mw"] / grid.grid_base_mw
    elif "magnitude" in spec:
        magnitude = spec["magnitude"]
    else:
        problems.append(f"{where}: an event needs magnitude or magnitude_mw")
        return None
    duration = spec.get("duration", DEFAULT_EVENT_DURATION)
    if duration is None:
        duration = math.inf
    try:
        return Event(
            kind=kind,
            magnitude=magnitude,
            t_start=spec.get("t_start", DEFAULT_EVENT_START),
            duration=duration,
        )
    except ValidationError as exc:
        problems.extend(f"{where}: {p}" for p in exc.problems)
        return None


_SCENARIO_KEYS = {"name", "vsg", "grid", "base", "events", "t_end", "dt",
                  "rocof_window"}


def _build_scenario(entry, defaults, where, problems):
    merged = dict(defaults)
    merged.update(entry)
    unknown = set(merged) - _SCENARIO_KEYS
    if unknown:
        problems.append(f"{where}: unknown fields {sorted(unknown)}")
    if "name" not in merged:
        problems.append(f"{where}: a scenario needs a name")
        return None

    def build(cls, key):
        kwargs = dict(defaults.get(key, {}))
        kwargs.update(entry.get(key, {}))
        try:
            return cls(**kwargs)
        except TypeError as exc:
            problems.append(f"{where}.{key}: {exc}")
            return None

    vsg = build(VsgParams, "vsg")
    grid = build(GridParams, "grid")
    base = build(BaseQuantities, "base")
    if vsg is None or grid is None or base is None:
        return None

    events = merged.get("events")
    if events is None:
        events = [default_event(grid)]
    else:
        events = [
            _build_event(ev, grid, f"{where}.events[{i}]", problems)
            for i, ev in enumerate(events)
        ]
        if any(ev is None for ev in events):
            return None

    scenario = Scenario(
        name=merged["name"],
        vsg=vsg,
        grid=grid,
        base=base,
        events=tuple(events),
        t_end=merged.get("t_end", 40.0),
        dt=merged.get("dt", 1e-3),
        rocof_window=merged.get("rocof_window", 0.1),
    )
    for p in validation_problems(vsg, grid, base):
        problems.append(f"{where}: {p}")
    if not scenario.t_end > 0:
        problems.append(f"{where}: t_end must be > 0 (got {scenario.t_end!r})")
    if not scenario.dt > 0:
        problems.append(f"{where}: dt must be > 0 (got {scenario.dt!r})")
    return scenario


def load_config(path):
    """Load one Scenario or a sweep of Scenarios from a JSON file.

    The file is either a single scenario object or
    ``{"defaults": {...}, "scenarios": [{...}, ...]}``; scenario entries
    override the defaults block field by field. Validation problems across
    all scenarios are aggregated into one error.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(
                [f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"]
            ) from exc
    if not isinstance(doc, dict):
        raise ValidationError([f"{path}: top level must be an object"])

    problems = []
    if "scenarios" in doc:
        defaults = doc.get("defaults", {})
        entries = doc["scenarios"]
        if not isinstance(entries, list) or not entries:
            raise ValidationError([f"{path}: scenarios must be a non-empty list"])
        scenarios = [
            _build_scenario(e, defaults, f"{path}:scenarios[{i}]", problems)
            for i, e in enumerate(entries)
        ]
        names = [s.name for s in scenarios if s is not None]
        if len(set(names)) != len(names):
            problems.append(f"{path}: scenario names must be unique")
    else:
        scenarios = [_build_scenario(doc, {}, path, problems)]
    if problems:
        raise ValidationError(problems)
    return scenarios


def run_scenario(scenario, sizing_horizon=30.0, settle_band=0.05,
                 rocof_limit=0.5, damping_outside_inertia=False,
                 dg_capacity_mw=None):
    """Simulate one scenario; returns (trace, metrics, report).

    ``dg_capacity_mw`` feeds the 10% sizing heuristic; by default it is the
    PV plant rating p_pv * s_base.
    """
    trace = simulate(scenario.vsg, scenario.grid, scenario.base,
                     scenario.events, scenario.t_end, scenario.dt,
                     damping_outside_inertia)
    t_event = min((ev.t_start for ev in scenario.events), default=0.0)
    metrics = compute_metrics(trace, scenario.rocof_window, settle_band,
                              t_event, scenario.base.f_base)
    if dg_capacity_mw is None:
        dg_capacity_mw = scenario.vsg.p_pv * scenario.base.s_base
    report = build_report(metrics, trace, t_event, scenario.base,
                          dg_capacity_mw=dg_capacity_mw,
                          horizon=sizing_horizon, rocof_limit=rocof_limit)
    return trace, metrics, report


def run_sweep(scenarios, sizing_horizon=30.0, settle_band=0.05,
              rocof_limit=0.5, damping_outside_inertia=False):
    """Run every scenario and assemble the summary rows in input order.

    A failing scenario is recorded in its row's ``error`` field without
    aborting the rest of the sweep.
    """
    scenarios = list(scenarios)
    if not scenarios:
        raise ValueError("empty scenario list")
    names = [sc.name for sc in scenarios]
    if len(set(names)) != len(names):
        raise ValueError("scenario names must be unique within a sweep")
    rows = []
    traces = {}
    for sc in scenarios:
        try:
            trace, metrics, report = run_scenario(
                sc, sizing_horizon, settle_band, rocof_limit,
                damping_outside_inertia)
        except Exception as exc:
            rows.append(SweepRow(name=sc.name, t_a=sc.vsg.t_a, k_d=sc.vsg.k_d,
                                 k_omega=sc.vsg.k_omega, error=str(exc)))
            continue
        traces[sc.name] = trace
        rows.append(SweepRow(
            name=sc.name, t_a=sc.vsg.t_a, k_d=sc.vsg.k_d,
            k_omega=sc.vsg.k_omega, f_min=metrics.f_min, f_max=metrics.f_max,
            rocof_max=metrics.rocof_max, charge_peak=metrics.charge_peak,
            discharge_peak=metrics.discharge_peak,
            power_range=metrics.power_range, e_batt=report.e_batt,
            compliant=report.rocof_compliant,
        ))
    return SweepResult(rows=tuple(rows), traces=traces)


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_trace_csv(trace, path):
    """One line per sample with full round-trip precision."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TRACE_HEADER + "\n")
        for k in range(len(trace.time)):
            fh.write(",".join((
                repr(float(trace.time[k])),
                repr(float(trace.f_pcc[k])),
                repr(float(trace.p_e[k])),
                repr(float(trace.p_bess[k])),
                repr(float(trace.p_m_star[k])),
                repr(float(trace.p_d[k])),
            )) + "\n")


def read_trace_csv(path, f_base=60.0):
    """Rebuild a Trace from a CSV written by write_trace_csv.

    The PV column is recovered from p_e - p_bess and the rotor speed from
    f_pcc / f_base.
    """
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    if data.ndim == 1:
        data = data.reshape(1, -1)
    if data.shape[0] < 2:
        raise ValidationError([f"{path}: need at least two samples"])
    time, f_pcc, p_e, p_bess, p_m_star, p_d = (data[:, i] for i in range(6))
    dt = float(time[1] - time[0])
    return Trace(dt=dt, time=time, f_pcc=f_pcc, omega_vsg=f_pcc / f_base,
                 p_e=p_e, p_m_star=p_m_star, p_d=p_d, p_bess=p_bess,
                 p_pv=p_e - p_bess)


def _summary_row_values(row):
    return (
        row.name, _fmt(row.t_a), _fmt(row.k_d), _fmt(row.k_omega),
        _fmt(row.f_min), _fmt(row.f_max), _fmt(row.rocof_max),
        _fmt(row.charge_peak), _fmt(row.discharge_peak),
        _fmt(row.power_range), _fmt(row.e_batt),
        "" if row.compliant is None else str(row.compliant), row.error,
    )


def _write_summary_csv(result, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for row in result.rows:
            fh.write(",".join(_summary_row_values(row)) + "\n")


def format_summary_table(result):
    """Aligned text table mirroring the study-matrix columns."""
    headers = ("name", "t_a", "k_d", "k_omega", "f_min", "f_max", "rocof",
               "charge", "discharge", "range", "e_batt", "ok")
    lines = [headers]
    for r in result.rows:
        if r.error:
            lines.append((r.name, f"{r.t_a:g}", f"{r.k_d:g}", f"{r.k_omega:g}",
                          "error: " + r.error, "", "", "", "", "", "", ""))
            continue
        lines.append((
            r.name, f"{r.t_a:g}", f"{r.k_d:g}", f"{r.k_omega:g}",
            f"{r.f_min:.4f}", f"{r.f_max:.4f}", f"{r.rocof_max:.4f}",
            f"{r.charge_peak:.4f}", f"{r.discharge_peak:.4f}",
            f"{r.power_range:.4f}", f"{r.e_batt:.5f}",
            "yes" if r.compliant else "NO",
        ))
    widths = [max(len(line[i]) for line in lines) for i in range(len(headers))]
    out = []
    for line in lines:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
    return "\n".join(out) + "\n"


def export(result, traces, fmt="csv", out_dir="."):
    """Write the sweep summary plus one trace CSV per scenario.

    Returns the list of paths written. ``fmt`` picks the summary flavor:
    ``csv`` or an aligned text ``table``.
    """
    if fmt not in ("csv", "table"):
        raise ValidationError([f"format must be csv or table (got {fmt!r})"])
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if fmt == "csv":
        summary = os.path.join(out_dir, "summary.csv")
        _write_summary_csv(result, summary)
    else:
        summary = os.path.join(out_dir, "summary.txt")
        with open(summary, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_summary_table(result))
    written.append(summary)
    for name, trace in traces.items():
        path = os.path.join(out_dir, f"trace_{name}.csv")
        write_trace_csv(trace, path)
        written.append(path)
    return written


__all__ = [
    "SUMMARY_HEADER",
    "TRACE_HEADER",
    "Scenario",
    "SweepResult",
    "SweepRow",
    "default_event",
    "export",
    "format_summary_table",
    "load_config",
    "preset",
    "read_trace_csv",
    "run_scenario",
    "run_sweep",
    "write_trace_csv",
]
