#!/usr/bin/env python3
"""Generate a city-scale benchmark fixture.

Builds a grid network of roughly 250 stops served by 20 corridor lines
(10 horizontal, 10 vertical), about 200 trips and 2300 driving arcs, with
origin-destination demand of about 2000 passengers per hour concentrated
on 20 hub destinations.  Importable (``build_city``) for benchmarks, or run
as a script to write the CSV bundle to ``fixtures/city``.
"""
from __future__ import annotations

import csv
import os
import sys

import numpy as np

GRID = 16           # grid side length (stops at integer lattice points)
SPACING = 350.0     # metres between adjacent grid points
ROWS = [1, 2, 4, 5, 7, 8, 10, 11, 13, 14]   # rows carrying horizontal lines
COLS = [1, 2, 4, 5, 7, 8, 10, 11, 13, 14]   # columns carrying vertical lines
LINE_SPAN = 13      # stops per line
RUNS_PER_LINE = 10
HEADWAY = 480       # seconds between consecutive runs of a line
FIRST_DEP = 120
DRIVE_S = 90        # scheduled drive time between adjacent stops
DWELL_S = 30        # scheduled dwell at intermediate stops
MCT = 60
CAP_SIT = 40
CAP = 100
DOOR = 2.0
TOTAL_RATE = 2000.0  # passengers per hour across all OD pairs
N_DESTS = 20
N_OD = 100


def _stop_id(r: int, c: int) -> str:
    return f"s{r:02d}{c:02d}"


def build_city(seed: int = 7):
    """Return (stops, trips, stop_times, footpaths, dependencies, od) rows.

    Each element is a list of dict rows matching the CSV bundle schemas.
    """
    rng = np.random.default_rng(seed)

    stops = []
    served: set[str] = set()
    for r in range(GRID):
        for c in range(GRID):
            stops.append({
                "id": _stop_id(r, c), "name": f"Stop {r}/{c}",
                "x": c * SPACING, "y": r * SPACING, "mct": MCT,
            })

    # Corridor lines: horizontal lines run along a row, vertical along a
    # column, each covering LINE_SPAN consecutive grid points.  Start offsets
    # alternate so corridors overlap rather than stack on the same columns.
    line_paths: list[tuple[str, list[str]]] = []
    for i, r in enumerate(ROWS):
        c0 = 0 if i % 2 == 0 else GRID - LINE_SPAN
        path = [_stop_id(r, c0 + k) for k in range(LINE_SPAN)]
        line_paths.append((f"H{r:02d}", path))
    for i, c in enumerate(COLS):
        r0 = 0 if i % 2 == 0 else GRID - LINE_SPAN
        path = [_stop_id(r0 + k, c) for k in range(LINE_SPAN)]
        line_paths.append((f"V{c:02d}", path))
    for _, path in line_paths:
        served.update(path)

    trips = []
    stop_times = []
    for line, path in line_paths:
        for run in range(RUNS_PER_LINE):
            trip = f"{line}r{run:02d}"
            trips.append({"trip": trip, "line": line, "cap_sit": CAP_SIT,
                          "cap": CAP, "door_capacity": DOOR})
            t = FIRST_DEP + run * HEADWAY
            for seq, stop in enumerate(path):
                arr = t if seq > 0 else t
                last = seq == len(path) - 1
                dep = arr if last else arr + (DWELL_S if seq > 0 else 0)
                stop_times.append({
                    "trip": trip, "seq": seq, "stop": stop,
                    "arr_s": arr, "dep_s": dep,
                    "min_drive_s": DRIVE_S - 20 if seq > 0 else "",
                    "min_dwell_s": 10 if 0 < seq < len(path) - 1 else "",
                })
                t = dep + DRIVE_S

    # Footpaths between a sample of adjacent served stops (walkable shortcuts).
    footpaths = []
    served_rc = sorted((int(s[1:3]), int(s[3:5])) for s in served)
    served_set = set(served_rc)
    for r, c in served_rc:
        if (r, c + 1) in served_set and rng.random() < 0.25:
            length = int(SPACING * 1.3)
            footpaths.append({"from": _stop_id(r, c),
                              "to": _stop_id(r, c + 1), "length_s": length})
            footpaths.append({"from": _stop_id(r, c + 1),
                              "to": _stop_id(r, c), "length_s": length})

    # Demand: 20 hub destinations at corridor crossings, 100 OD pairs.
    crossings = [(r, c) for r in ROWS for c in COLS]
    hub_idx = rng.choice(len(crossings), size=N_DESTS, replace=False)
    hubs = [_stop_id(*crossings[i]) for i in sorted(hub_idx)]
    served_list = sorted(served)
    od = []
    rate = TOTAL_RATE / N_OD
    seen = set()
    while len(od) < N_OD:
        origin = served_list[rng.integers(len(served_list))]
        dest = hubs[rng.integers(len(hubs))]
        if origin == dest or (origin, dest) in seen:
            continue
        seen.add((origin, dest))
        od.append({"origin": origin, "dest": dest, "per_hour": rate})

    return stops, trips, stop_times, footpaths, [], od


def write_bundle(out_dir: str, seed: int = 7) -> None:
    stops, trips, stop_times, footpaths, deps, od = build_city(seed)
    os.makedirs(out_dir, exist_ok=True)

    def dump(name, header, rows):
        with open(os.path.join(out_dir, name), "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=header)
            w.writeheader()
            w.writerows(rows)

    dump("stops.csv", ["id", "name", "x", "y", "mct"], stops)
    dump("trips.csv", ["trip", "line", "cap_sit", "cap", "door_capacity"],
         trips)
    dump("stop_times.csv",
         ["trip", "seq", "stop", "arr_s", "dep_s", "min_drive_s",
          "min_dwell_s"], stop_times)
    dump("footpaths.csv", ["from", "to", "length_s"], footpaths)
    dump("dependencies.csv", ["from_trip", "to_trip", "min_turnaround_s"],
         deps)
    dump("od.csv", ["origin", "dest", "per_hour"], od)
    with open(os.path.join(out_dir, "config.cfg"), "w") as fh:
        fh.write("t0 = 0\nt1 = 10800\ninject_end = 3600\ndays = 30\n"
                 "epsilon = 0.2\ngamma = 300\nkappa = 0.5\n")


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        "fixtures", "city")
    write_bundle(out)
    print(f"wrote city fixture to {out}")
