"""Command-line front end.

Subcommands
-----------
run    simulate one scenario from a config file and report its metrics
sweep  run a preset matrix (table1/table2) or every scenario in a config file
report recompute metrics and sizing from a stored trace CSV

Exit codes: 0 success, 1 validation error, 2 simulation fault, 3 I/O error.
"""

import argparse
import sys
from dataclasses import replace

from .dynamics import SimulationFault
from .metrics import compute_metrics
from .perunit import BaseQuantities, ValidationError
from .scenarios import (
    SweepResult,
    SweepRow,
    export,
    format_summary_table,
    load_config,
    preset,
    read_trace_csv,
    run_scenario,
    run_sweep,
)
from .sizing import build_report

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SIMULATION = 2
EXIT_IO = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_common(p):
    p.add_argument("--dt", type=float, default=None, help="integration step [s]")
    p.add_argument("--t-end", type=float, default=None, help="simulated horizon [s]")
    p.add_argument("--rocof-window", type=float, default=None,
                   help="ROCOF measurement window [s] (default 0.1)")
    p.add_argument("--sizing-horizon", type=float, default=30.0,
                   help="energy integration horizon after the event [s]")
    p.add_argument("--damping-outside-inertia", action="store_true",
                   help="apply damping power outside the 1/t_a factor "
                        "(alternative swing formulation)")


def build_parser():
    parser = _Parser(prog="vsgbess",
                     description="VSG frequency dynamics and battery sizing")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario from a config file")
    p_run.add_argument("--config", required=True, help="JSON scenario file")
    p_run.add_argument("--scenario", default=None,
                       help="scenario name when the file defines several")
    p_run.add_argument("--out", default=None,
                       help="directory for the trace CSV (skip to print only)")
    p_run.add_argument("--format", choices=("csv", "table"), default="table",
                       help="summary flavor when --out is given")
    _add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="run a preset or config-file sweep")
    src = p_sweep.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("table1", "table2"),
                     help="built-in study matrix")
    src.add_argument("--config", help="JSON sweep file")
    p_sweep.add_argument("--out", default=".",
                         help="output directory (default: current)")
    p_sweep.add_argument("--format", choices=("csv", "table"), default="csv")
    _add_common(p_sweep)

    p_rep = sub.add_parser("report",
                           help="recompute metrics/sizing from a trace CSV")
    p_rep.add_argument("--trace", required=True, help="trace CSV path")
    p_rep.add_argument("--t-event", type=float, default=1.0,
                       help="event start time [s] (default 1.0)")
    p_rep.add_argument("--rocof-window", type=float, default=0.1)
    p_rep.add_argument("--sizing-horizon", type=float, default=30.0)
    p_rep.add_argument("--s-base-mw", type=float, default=2.75,
                       help="inverter power base [MW]")
    p_rep.add_argument("--f-base-hz", type=float, default=60.0)
    p_rep.add_argument("--dg-capacity-mw", type=float, default=2.75,
                       help="DG capacity for the 10%% heuristic [MW]")
    return parser


def _apply_overrides(scenario, args):
    changes = {}
    if args.dt is not None:
        changes["dt"] = args.dt
    if args.t_end is not None:
        changes["t_end"] = args.t_end
    if args.rocof_window is not None:
        changes["rocof_window"] = args.rocof_window
    return replace(scenario, **changes) if changes else scenario


def _print_metrics(metrics, report):
    print(f"f_min               {metrics.f_min:.6f} Hz")
    print(f"f_max               {metrics.f_max:.6f} Hz")
    print(f"rocof_max           {metrics.rocof_max:.6f} Hz/s")
    if metrics.settling_time is None:
        print("settling_time       never")
    else:
        print(f"settling_time       {metrics.settling_time:.3f} s")
    print(f"charge_peak         {metrics.charge_peak:.6f} pu")
    print(f"discharge_peak      {metrics.discharge_peak:.6f} pu")
    print(f"power_range         {metrics.power_range:.6f} pu")
    print(f"ess_stored          {report.ess_stored:.6f} pu*s")
    print(f"ess_delivered       {report.ess_delivered:.6f} pu*s")
    print(f"e_batt              {report.e_batt:.6f} pu*s")
    print(f"e_first_swing       {report.e_first_swing:.6f} pu*s")
    print(f"power_rating        {report.power_rating:.6f} pu "
          f"({report.power_rating_mw:.4f} MW)")
    print(f"energy_rating       {report.energy_rating_mwh:.6f} MWh")
    print(f"10% heuristic       {report.ten_percent_rule_mw:.4f} MW")
    print(f"rocof_compliant     {report.rocof_compliant}")


def _cmd_run(args):
    scenarios = load_config(args.config)
    if args.scenario is not None:
        scenarios = [s for s in scenarios if s.name == args.scenario]
        if not scenarios:
            raise ValidationError([f"no scenario named {args.scenario!r}"])
    if len(scenarios) != 1:
        raise ValidationError(
            ["config defines several scenarios; pick one with --scenario"])
    scenario = _apply_overrides(scenarios[0], args)
    trace, metrics, report = run_scenario(
        scenario, sizing_horizon=args.sizing_horizon,
        damping_outside_inertia=args.damping_outside_inertia)
    print(f"scenario {scenario.name}: {trace.n_steps} steps at dt={trace.dt:g} s")
    _print_metrics(metrics, report)
    if args.out is not None:
        row = SweepRow(name=scenario.name, t_a=scenario.vsg.t_a,
                       k_d=scenario.vsg.k_d, k_omega=scenario.vsg.k_omega,
                       f_min=metrics.f_min, f_max=metrics.f_max,
                       rocof_max=metrics.rocof_max,
                       charge_peak=metrics.charge_peak,
                       discharge_peak=metrics.discharge_peak,
                       power_range=metrics.power_range,
                       e_batt=report.e_batt,
                       compliant=report.rocof_compliant)
        result = SweepResult(rows=(row,), traces={scenario.name: trace})
        written = export(result, result.traces, args.format, args.out)
        print("wrote " + ", ".join(written))
    return EXIT_OK


def _cmd_sweep(args):
    if args.preset:
        scenarios = preset(args.preset)
    else:
        scenarios = load_config(args.config)
    scenarios = [_apply_overrides(s, args) for s in scenarios]
    result = run_sweep(scenarios, sizing_horizon=args.sizing_horizon,
                       damping_outside_inertia=args.damping_outside_inertia)
    written = export(result, result.traces, args.format, args.out)
    print(format_summary_table(result), end="")
    print("wrote " + ", ".join(written))
    failed = [r for r in result.rows if r.error]
    if failed:
        for r in failed:
            print(f"scenario {r.name} failed: {r.error}", file=sys.stderr)
        return EXIT_SIMULATION
    return EXIT_OK


def _cmd_report(args):
    base = BaseQuantities(s_base=args.s_base_mw, f_base=args.f_base_hz)
    trace = read_trace_csv(args.trace, f_base=args.f_base_hz)
    metrics = compute_metrics(trace, args.rocof_window, t_event=args.t_event,
                              f_nominal=args.f_base_hz)
    report = build_report(metrics, trace, args.t_event, base,
                          dg_capacity_mw=args.dg_capacity_mw,
                          horizon=args.sizing_horizon)
    _print_metrics(metrics, report)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_report(args)
    except ValidationError as exc:
        for p in exc.problems:
            print(f"error: {p}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SimulationFault as exc:
        print(f"simulation fault: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
