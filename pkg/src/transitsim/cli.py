"""Command-line entry points.

Subcommands:
  validate              parse and validate an input directory
  simulate              multi-day run: day_report.csv + per-day arc loads
  experiment-capacity   probe one day, raise cap on trips with denied
                        boardings, rerun, and report both
  experiment-unlimited  rerun with unlimited capacity and export the
                        load difference against the capacitated baseline
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .bundle import (BundleError, load_bundle, load_config, sim_settings,
                     write_arc_loads, write_day_reports, write_diff_loads,
                     write_journeys)
from .demand import generate
from .engine import SimConfig, run_simulation
from .network import Network


def _common(sub):
    sub.add_argument("--input", required=True, help="input directory")
    sub.add_argument("--config", default=None, help="key=value config file")
    sub.add_argument("--days", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--threads", type=int, default=None)
    sub.add_argument("--out", default="out", help="output directory")
    sub.add_argument("--journeys", action="store_true",
                     help="also write journeys_dayN.csv")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transitsim")
    subs = p.add_subparsers(dest="command", required=True)
    for name in ("simulate", "experiment-capacity", "experiment-unlimited"):
        _common(subs.add_parser(name))
    subs.choices["experiment-capacity"].add_argument(
        "--cap-increase-pct", type=float, default=40.0)
    v = subs.add_parser("validate")
    v.add_argument("--input", required=True)
    v.add_argument("--config", default=None)
    return p


def _setup(args):
    cfg = load_config(args.config)
    for key in ("days", "seed", "threads"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    bundle = load_bundle(args.input, default_headway=cfg["default_headway"],
                         max_footpath=cfg["max_footpath"])
    prefs, choice = sim_settings(cfg)
    sim_cfg = SimConfig(t0=cfg["t0"], t1=cfg["t1"],
                        inject_end=cfg["inject_end"], days=cfg["days"],
                        seed=cfg["seed"], threads=cfg["threads"],
                        kappa=cfg["kappa"], lam_std=cfg["lam_std"],
                        delta_tau=cfg["delta_tau"], choice=choice,
                        prefs=prefs)
    passengers = generate(bundle.net, bundle.od,
                          (cfg["t0"], cfg["inject_end"]), cfg["seed"], prefs)
    return cfg, bundle, sim_cfg, passengers


def _emit(sim, net: Network, out: Path, with_journeys: bool,
          prefix: str = "") -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_day_reports(sim.day_reports, out / f"{prefix}day_report.csv")
    for i, loads in enumerate(sim.arc_load_history, start=1):
        onboard = sim.arc_onboard_history[i - 1]
        write_arc_loads(net, loads, onboard, out / f"{prefix}arc_loads_day{i}.csv")
    if with_journeys:
        for i, js in enumerate(sim.journey_log, start=1):
            write_journeys(js, out / f"{prefix}journeys_day{i}.csv")


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    try:
        bundle = load_bundle(args.input,
                             default_headway=cfg["default_headway"],
                             max_footpath=cfg["max_footpath"])
    except BundleError as exc:
        for v in exc.violations:
            print(v, file=sys.stderr)
        return 1
    net = bundle.net
    print(f"ok: {len(net.stops)} stops, {len(net.trips)} trips, "
          f"{sum(1 for k in net.arc_kind if k == 0)} driving arcs, "
          f"{len(bundle.od)} od pairs")
    return 0


def cmd_simulate(args) -> int:
    cfg, bundle, sim_cfg, passengers = _setup(args)
    sim = run_simulation(bundle.net, passengers, sim_cfg)
    _emit(sim, bundle.net, Path(args.out), args.journeys)
    if sim.unroutable:
        print(f"warning: {len(sim.unroutable)} unroutable passengers",
              file=sys.stderr)
    last = sim.day_reports[-1]
    print(f"day {last['day']}: mean perceived {last['mean_total']:.1f} s, "
          f"denied/passenger {last['denied_per_passenger']:.3f}")
    return 0


def cmd_experiment_capacity(args) -> int:
    cfg, bundle, sim_cfg, passengers = _setup(args)
    probe = run_simulation(bundle.net, passengers, replace(sim_cfg, days=1))
    denied_trips = {bundle.net.ev_trip[e] for e in probe.denies
                    if probe.denies[e] > 0}
    factor = 1.0 + args.cap_increase_pct / 100.0
    boosted = []
    for spec in bundle.trips:
        if bundle.net.trip_index[spec.id] in denied_trips:
            boosted.append(replace(spec, cap=int(round(spec.cap * factor))))
        else:
            boosted.append(spec)
    net2 = Network.build(bundle.stops, boosted, bundle.footpaths,
                         bundle.dependencies,
                         default_headway=cfg["default_headway"],
                         max_footpath=cfg["max_footpath"])
    sim = run_simulation(net2, passengers, sim_cfg)
    out = Path(args.out)
    _emit(probe, bundle.net, out, False, prefix="baseline_")
    _emit(sim, net2, out, args.journeys)
    changed = sum(1 for a, b in zip(bundle.trips, boosted) if a.cap != b.cap)
    print(f"raised cap on {changed} trips by {args.cap_increase_pct:.0f}%; "
          f"day-1 mean perceived {probe.day_reports[0]['mean_total']:.1f} -> "
          f"{sim.day_reports[0]['mean_total']:.1f}")
    return 0


def cmd_experiment_unlimited(args) -> int:
    cfg, bundle, sim_cfg, passengers = _setup(args)
    base = run_simulation(bundle.net, passengers, sim_cfg)
    big = 10 ** 9
    unlimited = [replace(spec, cap=big) for spec in bundle.trips]
    net2 = Network.build(bundle.stops, unlimited, bundle.footpaths,
                         bundle.dependencies,
                         default_headway=cfg["default_headway"],
                         max_footpath=cfg["max_footpath"])
    sim = run_simulation(net2, passengers, sim_cfg)
    out = Path(args.out)
    _emit(base, bundle.net, out, False, prefix="baseline_")
    _emit(sim, net2, out, args.journeys)
    write_diff_loads(bundle.net, base.arc_load_history[-1],
                     sim.arc_load_history[-1], out / "diff_loads.csv")
    peak = max(sim.arc_load_history[-1])
    print(f"unlimited-capacity peak load {peak:.2f} (seat-relative)")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "simulate": cmd_simulate,
        "experiment-capacity": cmd_experiment_capacity,
        "experiment-unlimited": cmd_experiment_unlimited,
    }
    try:
        return handlers[args.command](args)
    except BundleError as exc:
        for v in exc.violations:
            print(v, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
