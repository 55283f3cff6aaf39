"""CSV input bundles, flat key=value configs, and report writers.

Input directory layout:
  stops.csv          id,name,x,y,mct
  footpaths.csv      from,to,length_s
  trips.csv          trip,line,cap_sit,cap,door_capacity
  stop_times.csv     trip,seq,stop,arr_s,dep_s,min_drive_s,min_dwell_s
  dependencies.csv   from_trip,to_trip,min_turnaround_s
  od.csv             origin,dest,per_hour

Validation collects every violation (with file and line) instead of failing
on the first problem.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .choice import ChoiceParams
from .demand import CrowdingTable, OdEntry, PreferenceSet
from .network import (DependencyArc, Footpath, Network, NetworkError, Stop,
                      StopTime, TripSpec)


@dataclass
class Violation:
    file: str
    line: int           # 0 = whole-file problem
    message: str

    def __str__(self) -> str:
        where = f"{self.file}:{self.line}" if self.line else self.file
        return f"{where}: {self.message}"


class BundleError(Exception):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("\n".join(str(v) for v in violations))


@dataclass
class NetworkBundle:
    net: Network
    od: list[OdEntry]
    stops: list[Stop] = field(default_factory=list)
    trips: list[TripSpec] = field(default_factory=list)
    footpaths: list[Footpath] = field(default_factory=list)
    dependencies: list[DependencyArc] = field(default_factory=list)


SCHEMAS = {
    "stops.csv": ["id", "name", "x", "y", "mct"],
    "footpaths.csv": ["from", "to", "length_s"],
    "trips.csv": ["trip", "line", "cap_sit", "cap", "door_capacity"],
    "stop_times.csv": ["trip", "seq", "stop", "arr_s", "dep_s",
                       "min_drive_s", "min_dwell_s"],
    "dependencies.csv": ["from_trip", "to_trip", "min_turnaround_s"],
    "od.csv": ["origin", "dest", "per_hour"],
}


def _read_rows(path: Path, name: str, errors: list[Violation]):
    f = path / name
    if not f.exists():
        errors.append(Violation(name, 0, "missing file"))
        return []
    with f.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            errors.append(Violation(name, 0, "empty file"))
            return []
        header = [h.strip() for h in header]
        if header != SCHEMAS[name]:
            errors.append(Violation(
                name, 1, f"bad header {header}, expected {SCHEMAS[name]}"))
            return []
        rows = []
        for i, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                errors.append(Violation(name, i, f"expected "
                                        f"{len(header)} columns, got {len(row)}"))
                continue
            rows.append((i, [c.strip() for c in row]))
        return rows


def _num(value: str, kind, name: str, line: int, col: str,
         errors: list[Violation], optional: bool = False):
    if optional and value == "":
        return None
    try:
        return kind(value)
    except ValueError:
        errors.append(Violation(name, line, f"column {col}: "
                                f"cannot parse {value!r} as {kind.__name__}"))
        return None


def load_bundle(path: str | Path, default_headway: int = 3600,
                max_footpath: int = 1800) -> NetworkBundle:
    """Parse and validate an input directory; raises BundleError listing
    every violation found."""
    path = Path(path)
    errors: list[Violation] = []

    stops: list[Stop] = []
    for i, row in _read_rows(path, "stops.csv", errors):
        x = _num(row[2], float, "stops.csv", i, "x", errors)
        y = _num(row[3], float, "stops.csv", i, "y", errors)
        mct = _num(row[4], int, "stops.csv", i, "mct", errors)
        if None not in (x, y, mct):
            stops.append(Stop(row[0], row[1], x, y, mct))
    stop_ids = {s.id for s in stops}

    footpaths: list[Footpath] = []
    for i, row in _read_rows(path, "footpaths.csv", errors):
        length = _num(row[2], int, "footpaths.csv", i, "length_s", errors)
        for col, sid in (("from", row[0]), ("to", row[1])):
            if sid not in stop_ids:
                errors.append(Violation("footpaths.csv", i,
                                        f"column {col}: unknown stop {sid!r}"))
                length = None
        if length is not None:
            footpaths.append(Footpath(row[0], row[1], length))

    trip_rows: dict[str, tuple[int, list[str]]] = {}
    for i, row in _read_rows(path, "trips.csv", errors):
        if row[0] in trip_rows:
            errors.append(Violation("trips.csv", i, f"duplicate trip {row[0]!r}"))
            continue
        trip_rows[row[0]] = (i, row)

    stop_times: dict[str, list[tuple[int, int, StopTime]]] = {}
    for i, row in _read_rows(path, "stop_times.csv", errors):
        trip_id, stop_id = row[0], row[2]
        if trip_id not in trip_rows:
            errors.append(Violation("stop_times.csv", i,
                                    f"unknown trip {trip_id!r}"))
            continue
        if stop_id not in stop_ids:
            errors.append(Violation("stop_times.csv", i,
                                    f"unknown stop {stop_id!r}"))
            continue
        seq = _num(row[1], int, "stop_times.csv", i, "seq", errors)
        arr = _num(row[3], int, "stop_times.csv", i, "arr_s", errors)
        dep = _num(row[4], int, "stop_times.csv", i, "dep_s", errors)
        mdr = _num(row[5], int, "stop_times.csv", i, "min_drive_s", errors, True)
        mdw = _num(row[6], int, "stop_times.csv", i, "min_dwell_s", errors, True)
        if None in (seq, arr, dep):
            continue
        stop_times.setdefault(trip_id, []).append(
            (seq, i, StopTime(stop_id, arr, dep, mdr, mdw)))

    trips: list[TripSpec] = []
    for trip_id, (line_no, row) in trip_rows.items():
        cap_sit = _num(row[2], int, "trips.csv", line_no, "cap_sit", errors)
        cap = _num(row[3], int, "trips.csv", line_no, "cap", errors)
        door = _num(row[4], float, "trips.csv", line_no, "door_capacity", errors)
        sts = stop_times.get(trip_id)
        if not sts:
            errors.append(Violation("trips.csv", line_no,
                                    f"trip {trip_id!r} has no stop_times"))
            continue
        sts.sort()
        seqs = [s[0] for s in sts]
        if seqs != list(range(len(seqs))):
            errors.append(Violation("stop_times.csv", sts[0][1],
                                    f"trip {trip_id!r}: seq must be 0..n-1, "
                                    f"got {seqs}"))
            continue
        if None in (cap_sit, cap, door):
            continue
        trips.append(TripSpec(trip_id, row[1], cap_sit, cap, door,
                              tuple(s[2] for s in sts)))

    deps: list[DependencyArc] = []
    for i, row in _read_rows(path, "dependencies.csv", errors):
        turn = _num(row[2], int, "dependencies.csv", i, "min_turnaround_s", errors)
        ok = turn is not None
        for col, tid in (("from_trip", row[0]), ("to_trip", row[1])):
            if tid not in trip_rows:
                errors.append(Violation("dependencies.csv", i,
                                        f"column {col}: unknown trip {tid!r}"))
                ok = False
        if ok:
            deps.append(DependencyArc(row[0], row[1], turn))

    od: list[OdEntry] = []
    for i, row in _read_rows(path, "od.csv", errors):
        rate = _num(row[2], float, "od.csv", i, "per_hour", errors)
        ok = rate is not None
        for col, sid in (("origin", row[0]), ("dest", row[1])):
            if sid not in stop_ids:
                errors.append(Violation("od.csv", i,
                                        f"column {col}: unknown stop {sid!r}"))
                ok = False
        if ok and row[0] == row[1]:
            errors.append(Violation("od.csv", i, "origin equals dest"))
            ok = False
        if ok and rate < 0:
            errors.append(Violation("od.csv", i, "negative rate"))
            ok = False
        if ok:
            od.append(OdEntry(row[0], row[1], rate))

    net = None
    if not errors:
        try:
            net = Network.build(stops, trips, footpaths, deps,
                                default_headway=default_headway,
                                max_footpath=max_footpath)
        except NetworkError as exc:
            for msg in exc.messages:
                errors.append(Violation("<network>", 0, msg))
    if errors:
        raise BundleError(errors)
    return NetworkBundle(net, od, stops, trips, footpaths, deps)


# ------------------------------------------------------------------ config

CONFIG_DEFAULTS = {
    "beta_wait": 1.0, "beta_walk": 1.5, "beta_transfer": 300.0,
    "beta_fail": 2.0, "epsilon": 0.2, "gamma": 300.0, "kappa": 0.5,
    "lam_std": 0.5, "delta_tau": 3600, "default_headway": 3600,
    "max_footpath": 1800, "t0": 0, "t1": 7200, "inject_end": 3600,
    "days": 30, "seed": 1, "threads": 1,
}


def load_config(path: str | Path | None) -> dict:
    """Flat key=value file over the standard defaults; '#' starts a comment."""
    cfg = dict(CONFIG_DEFAULTS)
    if path is None:
        return cfg
    for ln, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected key=value, got {raw!r}")
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in cfg:
            raise ValueError(f"{path}:{ln}: unknown key {key!r}")
        kind = type(CONFIG_DEFAULTS[key])
        cfg[key] = kind(val)
    return cfg


def sim_settings(cfg: dict):
    """Split a flat config into the engine's structured pieces."""
    prefs = PreferenceSet(beta_wait=cfg["beta_wait"], beta_walk=cfg["beta_walk"],
                          beta_transfer=cfg["beta_transfer"],
                          beta_fail=cfg["beta_fail"], crowding=CrowdingTable())
    choice = ChoiceParams(gamma=cfg["gamma"], epsilon=cfg["epsilon"])
    return prefs, choice


# ----------------------------------------------------------------- writers

def write_day_reports(reports: list[dict], path: Path) -> None:
    cols = ["day", "passengers", "mean_total", "mean_ivt", "mean_wait",
            "mean_walk", "mean_transfer", "mean_crowding",
            "mean_denied_surcharge", "mean_unfinished",
            "denied_per_passenger", "mean_standing_time", "finished_share"]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in reports:
            w.writerow([_fmt(r[c]) for c in cols])


def _fmt(v):
    return f"{v:.6f}" if isinstance(v, float) else v


def write_arc_loads(net: Network, loads: list[float], onboard: list[int],
                    path: Path) -> None:
    """Drive-arc loads, seat-relative (1.0 = all seats taken)."""
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trip", "from_seq", "to_seq", "from_stop", "to_stop",
                    "onboard", "load"])
        for trip in net.trips:
            for pos, a in enumerate(trip.drive_arcs):
                w.writerow([trip.id, pos, pos + 1,
                            net.stops[trip.stops[pos]].id,
                            net.stops[trip.stops[pos + 1]].id,
                            onboard[a], f"{loads[a]:.6f}"])


def write_diff_loads(net: Network, base: list[float], other: list[float],
                     path: Path) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trip", "from_seq", "to_seq", "from_stop", "to_stop",
                    "load_base", "load_other", "diff"])
        for trip in net.trips:
            for pos, a in enumerate(trip.drive_arcs):
                w.writerow([trip.id, pos, pos + 1,
                            net.stops[trip.stops[pos]].id,
                            net.stops[trip.stops[pos + 1]].id,
                            f"{base[a]:.6f}", f"{other[a]:.6f}",
                            f"{other[a] - base[a]:.6f}"])


def write_journeys(journeys: list[dict], path: Path) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["passenger", "origin", "dest", "start", "finished",
                    "total", "legs"])
        for j in journeys:
            legs = "|".join(":".join(str(x) for x in leg) for leg in j["legs"])
            w.writerow([j["passenger"], j["origin"], j["dest"], j["start"],
                        int(j["finished"]), f"{j['total']:.6f}", legs])
