"""Event-activity network: immutable timetable plus a mutable current-day time overlay.

Events (arrivals/departures) are the nodes, driving and dwelling activities the
arcs.  Transfers are implicit, defined by stops (minimum transfer time) and
directed footpaths.  All times are integer seconds.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field

ARRIVAL = 0
DEPARTURE = 1

DRIVING = 0
DWELLING = 1


class NetworkError(ValueError):
    """Raised when the timetable violates a structural invariant."""

    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


@dataclass(frozen=True)
class Stop:
    id: str
    name: str
    x: float
    y: float
    mct: int  # minimum transfer time, seconds


@dataclass(frozen=True)
class StopTime:
    """One visit of a trip at a stop.

    ``min_drive`` is the minimum in-vehicle time of the driving arc *from the
    previous stop*; ``min_dwell`` the minimum dwell time at this stop.  Both
    bound the catch-up potential under delays.
    """
    stop: str
    arr: int
    dep: int
    min_drive: int | None = None  # None: no catch-up potential (minimum = scheduled)
    min_dwell: int | None = None


@dataclass(frozen=True)
class TripSpec:
    id: str
    line: str
    cap_sit: int
    cap: int
    door_capacity: float  # passengers per second through the doors
    stop_times: tuple[StopTime, ...]


@dataclass(frozen=True)
class Footpath:
    frm: str
    to: str
    length: int  # walking time, seconds


@dataclass(frozen=True)
class DependencyArc:
    from_trip: str
    to_trip: str
    min_turnaround: int


@dataclass
class Trip:
    idx: int
    id: str
    line_idx: int
    cap_sit: int
    cap: int
    door_capacity: float
    stops: list[int]        # stop indices, in visit order
    events: list[int]       # dep0, arr1, dep1, ..., arr(n-1)
    drive_arcs: list[int]   # driving arc i covers stops i -> i+1
    dwell_arcs: list[int | None]  # dwelling arc at stop position i (None at ends)


class Network:
    """Validated timetable with per-day current times (``cur``).

    The static structure is immutable after :meth:`build`; only ``cur`` is
    mutated, and only by the single-threaded event loop.
    """

    def __init__(self):
        # stops
        self.stops: list[Stop] = []
        self.stop_index: dict[str, int] = {}
        # events (parallel arrays)
        self.ev_kind: list[int] = []
        self.ev_trip: list[int] = []
        self.ev_stop: list[int] = []
        self.ev_pos: list[int] = []   # stop position within the trip
        self.reg: list[int] = []      # scheduled times
        self.cur: list[int] = []      # current-day times
        # activities (parallel arrays)
        self.arc_kind: list[int] = []
        self.arc_from: list[int] = []
        self.arc_to: list[int] = []
        self.arc_trip: list[int] = []
        self.arc_ivt_min: list[int] = []
        # trips / lines
        self.trips: list[Trip] = []
        self.trip_index: dict[str, int] = {}
        self.lines: list[str] = []
        self.line_trips: list[list[int]] = []
        self.dependencies: list[tuple[int, int, int]] = []  # (trip, trip, min_turnaround)
        self.deps_from_trip: dict[int, list[tuple[int, int]]] = {}
        # footpaths (directed)
        self.foot_len: dict[tuple[int, int], int] = {}
        self.foot_out: list[list[tuple[int, int]]] = []  # per stop: (to_stop, length)
        self.foot_in: list[list[tuple[int, int]]] = []
        # per-stop departure events sorted by scheduled time
        self.stop_dep_times: list[list[int]] = []
        self.stop_dep_events: list[list[int]] = []
        self.arc_pos: list[int] = []
        self._headway: list[int] = []
        self.default_headway: int = 3600

    # ------------------------------------------------------------------ build

    @classmethod
    def build(cls, stops: list[Stop], trips: list[TripSpec],
              footpaths: list[Footpath] = (), dependencies: list[DependencyArc] = (),
              default_headway: int = 3600, max_footpath: int = 1800) -> "Network":
        net = cls()
        net.default_headway = default_headway
        errors: list[str] = []

        for s in stops:
            if s.id in net.stop_index:
                errors.append(f"stop {s.id}: duplicate id")
                continue
            if s.mct < 0:
                errors.append(f"stop {s.id}: mct must be >= 0")
            net.stop_index[s.id] = len(net.stops)
            net.stops.append(s)
        n_stops = len(net.stops)
        net.foot_out = [[] for _ in range(n_stops)]
        net.foot_in = [[] for _ in range(n_stops)]
        net.stop_dep_times = [[] for _ in range(n_stops)]
        net.stop_dep_events = [[] for _ in range(n_stops)]

        for fp in footpaths:
            if fp.frm not in net.stop_index or fp.to not in net.stop_index:
                errors.append(f"footpath {fp.frm}->{fp.to}: unknown stop")
                continue
            if fp.length < 0 or fp.length > max_footpath:
                errors.append(f"footpath {fp.frm}->{fp.to}: length {fp.length} outside [0, {max_footpath}]")
                continue
            a, b = net.stop_index[fp.frm], net.stop_index[fp.to]
            net.foot_len[(a, b)] = fp.length
            net.foot_out[a].append((b, fp.length))
            net.foot_in[b].append((a, fp.length))

        line_index: dict[str, int] = {}
        for spec in trips:
            if spec.id in net.trip_index:
                errors.append(f"trip {spec.id}: duplicate id")
                continue
            if not (spec.cap >= spec.cap_sit >= 0):
                errors.append(f"trip {spec.id}: need cap >= cap_sit >= 0")
            if spec.door_capacity <= 0:
                errors.append(f"trip {spec.id}: door_capacity must be > 0")
            if len(spec.stop_times) < 2:
                errors.append(f"trip {spec.id}: needs at least two stops")
                continue
            if any(st.stop not in net.stop_index for st in spec.stop_times):
                errors.append(f"trip {spec.id}: unknown stop")
                continue
            tid = len(net.trips)
            if spec.line not in line_index:
                line_index[spec.line] = len(net.lines)
                net.lines.append(spec.line)
                net.line_trips.append([])
            trip = Trip(idx=tid, id=spec.id, line_idx=line_index[spec.line],
                        cap_sit=spec.cap_sit, cap=spec.cap,
                        door_capacity=spec.door_capacity,
                        stops=[net.stop_index[st.stop] for st in spec.stop_times],
                        events=[], drive_arcs=[], dwell_arcs=[])
            sts = spec.stop_times
            n = len(sts)
            prev_time = None
            for i, st in enumerate(sts):
                if i > 0:
                    e = net._add_event(ARRIVAL, tid, trip.stops[i], i, st.arr)
                    trip.events.append(e)
                    if st.arr < prev_time:
                        errors.append(f"trip {spec.id}: times decrease at stop {st.stop}")
                    prev_time = st.arr
                if i < n - 1:
                    e = net._add_event(DEPARTURE, tid, trip.stops[i], i, st.dep)
                    trip.events.append(e)
                    if prev_time is not None and st.dep < prev_time:
                        errors.append(f"trip {spec.id}: times decrease at stop {st.stop}")
                    prev_time = st.dep
                    net.stop_dep_events[trip.stops[i]].append(e)
            # arcs: dep(i) -> arr(i+1) driving, arr(i) -> dep(i) dwelling
            for i in range(n - 1):
                dep_e = trip.events[2 * i]
                arr_e = trip.events[2 * i + 1]
                ivt = net.reg[arr_e] - net.reg[dep_e]
                ivt_min = ivt if sts[i + 1].min_drive is None else sts[i + 1].min_drive
                if not 0 <= ivt_min <= ivt:
                    errors.append(f"trip {spec.id}: min_drive outside [0, scheduled] into stop {sts[i+1].stop}")
                    ivt_min = ivt
                trip.drive_arcs.append(net._add_arc(DRIVING, dep_e, arr_e, tid, ivt_min))
            trip.dwell_arcs.append(None)
            for i in range(1, n - 1):
                arr_e = trip.events[2 * i - 1]
                dep_e = trip.events[2 * i]
                ivt = net.reg[dep_e] - net.reg[arr_e]
                ivt_min = ivt if sts[i].min_dwell is None else sts[i].min_dwell
                if not 0 <= ivt_min <= ivt:
                    errors.append(f"trip {spec.id}: min_dwell outside [0, scheduled] at stop {sts[i].stop}")
                    ivt_min = ivt
                trip.dwell_arcs.append(net._add_arc(DWELLING, arr_e, dep_e, tid, ivt_min))
            trip.dwell_arcs.append(None)
            net.trip_index[spec.id] = tid
            net.trips.append(trip)
            net.line_trips[trip.line_idx].append(tid)

        for dep in dependencies:
            if dep.from_trip not in net.trip_index or dep.to_trip not in net.trip_index:
                errors.append(f"dependency {dep.from_trip}->{dep.to_trip}: unknown trip")
                continue
            if dep.min_turnaround < 0:
                errors.append(f"dependency {dep.from_trip}->{dep.to_trip}: min_turnaround must be >= 0")
                continue
            a, b = net.trip_index[dep.from_trip], net.trip_index[dep.to_trip]
            net.dependencies.append((a, b, dep.min_turnaround))
            net.deps_from_trip.setdefault(a, []).append((b, dep.min_turnaround))

        # order trips within lines by first departure; check no overtaking
        for li, tids in enumerate(net.line_trips):
            tids.sort(key=lambda t: net.reg[net.trips[t].events[0]])
            ref = net.trips[tids[0]].stops
            for t in tids[1:]:
                if net.trips[t].stops != ref:
                    errors.append(f"line {net.lines[li]}: trips serve different stop sequences")
            for t1, t2 in zip(tids, tids[1:]):
                ev1, ev2 = net.trips[t1].events, net.trips[t2].events
                if len(ev1) == len(ev2):
                    for e1, e2 in zip(ev1, ev2):
                        if net.reg[e1] > net.reg[e2]:
                            errors.append(
                                f"line {net.lines[li]}: trip {net.trips[t2].id} overtaken by {net.trips[t1].id}")
                            break

        if errors:
            raise NetworkError(errors)

        for s in range(n_stops):
            order = sorted(range(len(net.stop_dep_events[s])),
                           key=lambda i: (net.reg[net.stop_dep_events[s][i]], net.stop_dep_events[s][i]))
            net.stop_dep_events[s] = [net.stop_dep_events[s][i] for i in order]
            net.stop_dep_times[s] = [net.reg[e] for e in net.stop_dep_events[s]]

        net.arc_pos = [0] * len(net.arc_kind)
        for trip in net.trips:
            for i, a in enumerate(trip.drive_arcs):
                net.arc_pos[a] = i
            for i, a in enumerate(trip.dwell_arcs):
                if a is not None:
                    net.arc_pos[a] = i

        net._compute_headways()
        return net

    def _add_event(self, kind, trip, stop, pos, time) -> int:
        e = len(self.ev_kind)
        self.ev_kind.append(kind)
        self.ev_trip.append(trip)
        self.ev_stop.append(stop)
        self.ev_pos.append(pos)
        self.reg.append(time)
        self.cur.append(time)
        return e

    def _add_arc(self, kind, frm, to, trip, ivt_min) -> int:
        a = len(self.arc_kind)
        self.arc_kind.append(kind)
        self.arc_from.append(frm)
        self.arc_to.append(to)
        self.arc_trip.append(trip)
        self.arc_ivt_min.append(ivt_min)
        return a

    def _compute_headways(self):
        self._headway = [self.default_headway] * len(self.ev_kind)
        for tids in self.line_trips:
            if len(tids) < 2:
                continue
            gaps = [self.reg[self.trips[t2].events[0]] - self.reg[self.trips[t1].events[0]]
                    for t1, t2 in zip(tids, tids[1:])]
            fallback = round(sum(gaps) / len(gaps))
            for pos, t in enumerate(tids):
                trip = self.trips[t]
                if pos + 1 < len(tids):
                    nxt = self.trips[tids[pos + 1]]
                    for e1, e2 in zip(trip.events, nxt.events):
                        self._headway[e1] = self.reg[e2] - self.reg[e1]
                else:
                    for e1 in trip.events:
                        self._headway[e1] = fallback

    # ---------------------------------------------------------------- queries

    @property
    def n_events(self) -> int:
        return len(self.ev_kind)

    @property
    def n_arcs(self) -> int:
        return len(self.arc_kind)

    def reset_day(self):
        """Restore current-day times to the schedule."""
        self.cur = list(self.reg)

    def headway(self, e: int) -> int:
        """Time until the corresponding event on the line's next trip.

        For the last trip of a line this falls back to the line's mean
        scheduled headway (the config default for single-trip lines).
        """
        return self._headway[e]

    def times(self, use_time: str) -> list[int]:
        if use_time == "reg":
            return self.reg
        if use_time == "cur":
            return self.cur
        raise ValueError(f"unknown time view {use_time!r}")

    def min_transfer_time(self, e_arr: int, e_dep: int) -> int | None:
        """mct for a same-stop transfer, footpath length across stops, None if impossible."""
        sa, sd = self.ev_stop[e_arr], self.ev_stop[e_dep]
        if sa == sd:
            return self.stops[sa].mct
        return self.foot_len.get((sa, sd))

    def transfer_valid(self, e_arr: int, e_dep: int, use_time: str = "reg") -> bool:
        """Same-stop rule (arrival + mct <= departure) or footpath rule."""
        if self.ev_kind[e_arr] != ARRIVAL or self.ev_kind[e_dep] != DEPARTURE:
            raise ValueError("transfer must go from an arrival to a departure event")
        if self.ev_trip[e_arr] == self.ev_trip[e_dep]:
            return False
        mt = self.min_transfer_time(e_arr, e_dep)
        if mt is None:
            return False
        tau = self.times(use_time)
        return tau[e_arr] + mt <= tau[e_dep]

    def transfer_times(self, e_arr: int, e_dep: int | None = None,
                       dest_stop: int | None = None, use_time: str = "reg") -> tuple[int, int]:
        """(walk, wait) of a transfer; the final transfer to the destination has wait 0."""
        sa = self.ev_stop[e_arr]
        if e_dep is None:
            if dest_stop is None:
                raise ValueError("need e_dep or dest_stop")
            walk = 0 if sa == dest_stop else self.foot_len[(sa, dest_stop)]
            return walk, 0
        if not self.transfer_valid(e_arr, e_dep, use_time):
            raise ValueError("transfer is not valid")
        tau = self.times(use_time)
        sd = self.ev_stop[e_dep]
        walk = 0 if sa == sd else self.foot_len[(sa, sd)]
        return walk, tau[e_dep] - tau[e_arr] - walk

    def dep_events_between(self, stop: int, lo: int, hi: int) -> list[int]:
        """Departure events at ``stop`` with scheduled time in [lo, hi]."""
        times = self.stop_dep_times[stop]
        i = bisect.bisect_left(times, lo)
        j = bisect.bisect_right(times, hi)
        return self.stop_dep_events[stop][i:j]

    def trip_of(self, e: int) -> Trip:
        return self.trips[self.ev_trip[e]]

    def drive_arc_ending_at(self, e_arr: int) -> int:
        trip = self.trip_of(e_arr)
        return trip.drive_arcs[self.ev_pos[e_arr] - 1]

    def drive_arc_leaving(self, e_dep: int) -> int:
        trip = self.trip_of(e_dep)
        return trip.drive_arcs[self.ev_pos[e_dep]]

    def euclid(self, s1: int, s2: int) -> float:
        a, b = self.stops[s1], self.stops[s2]
        return ((a.x - b.x) ** 2 + (a.y - b.y) ** 2) ** 0.5
