"""Independent reference implementations used as test oracles.

``brute_force_profile`` recomputes perceived travel times by forward
recursion over explicit journeys (board somewhere, ride to an exit,
transfer or walk), with its own seat-expectation and transfer enumeration
logic.  It shares no code with the production profile scan.

``random_network`` generates small random timetables for differential
testing.
"""
from __future__ import annotations

import math

import numpy as np

from transitsim.network import Footpath, Network, Stop, StopTime, TripSpec

INF = float("inf")


# ----------------------------------------------------------- random networks

def random_network(rng: np.random.Generator,
                   max_stops: int = 10, max_lines: int = 3,
                   max_trips: int = 20) -> Network:
    n_stops = int(rng.integers(4, max_stops + 1))
    stops = [Stop(id=f"s{i}", name=f"stop {i}",
                  x=float(rng.uniform(0, 5000)), y=float(rng.uniform(0, 5000)),
                  mct=int(rng.integers(10, 121)))
             for i in range(n_stops)]

    trips: list[TripSpec] = []
    n_lines = int(rng.integers(1, max_lines + 1))
    for li in range(n_lines):
        path_len = int(rng.integers(3, min(7, n_stops + 1)))
        path = list(rng.choice(n_stops, size=path_len, replace=False))
        drives = [int(rng.integers(60, 301)) for _ in range(path_len - 1)]
        dwells = [int(rng.integers(0, 61)) for _ in range(path_len)]
        runs = int(rng.integers(1, 5))
        headway = int(rng.integers(300, 1201))
        start0 = int(rng.integers(0, 1801))
        for run in range(runs):
            if len(trips) >= max_trips:
                break
            t = start0 + run * headway
            sts = []
            for k, s in enumerate(path):
                arr = t
                dep = arr if k in (0, path_len - 1) else arr + dwells[k]
                sts.append(StopTime(stop=f"s{s}", arr=arr, dep=dep,
                                    min_drive=None if k == 0 else max(0, drives[k - 1] - 30),
                                    min_dwell=None if k in (0, path_len - 1) else 0))
                if k < path_len - 1:
                    t = dep + drives[k]
            trips.append(TripSpec(id=f"l{li}r{run}", line=f"L{li}",
                                  cap_sit=int(rng.integers(1, 50)),
                                  cap=int(rng.integers(50, 120)),
                                  door_capacity=float(rng.uniform(0.5, 5.0)),
                                  stop_times=tuple(sts)))

    footpaths = []
    seen = set()
    for _ in range(int(rng.integers(0, n_stops))):
        a, b = rng.choice(n_stops, size=2, replace=False)
        if (a, b) in seen:
            continue
        seen.add((a, b))
        length = int(rng.integers(30, 601))
        footpaths.append(Footpath(frm=f"s{a}", to=f"s{b}", length=length))
        if rng.random() < 0.7 and (b, a) not in seen:
            seen.add((b, a))
            footpaths.append(Footpath(frm=f"s{b}", to=f"s{a}", length=length))

    return Network.build(stops, trips, footpaths)


class RandomView:
    """Arbitrary but deterministic expectations for differential tests.

    Loads vary per arc, denied-boarding probabilities per departure, and
    arrival times carry trip-monotone delays; transfer-miss probabilities
    are a fixed function of the event pair.
    """

    def __init__(self, net: Network, rng: np.random.Generator,
                 with_delays: bool = True):
        self.net = net
        self._load = rng.uniform(0.2, 2.5, size=net.n_arcs)
        self._pden = np.where(rng.random(net.n_events) < 0.3,
                              rng.uniform(0.05, 0.5, size=net.n_events), 0.0)
        self._time = [float(t) for t in net.reg]
        if with_delays:
            for trip in net.trips:
                d = 0.0
                for e in trip.events:
                    d = max(0.0, d + float(rng.uniform(-20, 40)))
                    self._time[e] = net.reg[e] + d

    def time(self, e: int) -> float:
        return self._time[e]

    def load(self, arc: int) -> float:
        return float(self._load[arc])

    def p_denied(self, e_dep: int) -> float:
        return float(self._pden[e_dep])

    def p_delay(self, e_arr: int, e_dep: int, min_time: int) -> float:
        return ((e_arr * 31 + e_dep * 17) % 5) / 20.0


# --------------------------------------------------------- brute-force oracle

def brute_force_profile(net: Network, prefs, dest: int, view,
                        spans: dict[int, tuple[int, int]] | None = None,
                        board_ok=None, exit_ok=None,
                        foot_blocked=frozenset(),
                        horizon: float | None = None):
    """Perceived travel time to ``dest`` for every event, by forward recursion.

    Returns (f_arr, f_dep): maps from arrival events to the minimal cost of
    alighting there, and from departure events to the minimal cost of being
    on board at that departure having boarded at its stop.
    """
    if spans is None:
        spans = {t.idx: (0, len(t.drive_arcs) - 1) for t in net.trips}
    if horizon is None:
        horizon = max(net.reg, default=0) + 1

    fac = prefs.crowding.factor
    memo_arr: dict[int, float] = {}
    memo_dep: dict[int, float] = {}

    def walk_dest(stop: int) -> float:
        if stop == dest:
            return 0.0
        length = net.foot_len.get((stop, dest))
        return INF if length is None else prefs.beta_walk * length

    def segment(t: int, i: int, j: int) -> float:
        """Ride trip t from stop position i to j, simulating the expected seat."""
        trip = net.trips[t]
        seated = False
        cost = 0.0
        for pos in range(i, j):
            if pos > i:
                d = trip.dwell_arcs[pos]
                dt = view.time(net.arc_to[d]) - view.time(net.arc_from[d])
                cost += fac(view.load(d), seated) * dt
            a = trip.drive_arcs[pos]
            if view.load(a) < 1.0:
                seated = True
            dt = view.time(net.arc_to[a]) - view.time(net.arc_from[a])
            cost += fac(view.load(a), seated) * dt
        return cost

    def value_dep(e_dep: int) -> float:
        if e_dep in memo_dep:
            return memo_dep[e_dep]
        memo_dep[e_dep] = INF  # cycle guard; schedules make the graph acyclic
        t = net.ev_trip[e_dep]
        i = net.ev_pos[e_dep]
        lo, hi = spans[t]
        trip = net.trips[t]
        best = INF
        for j in range(max(i + 1, lo + 1), hi + 2):
            e_arr = trip.events[2 * j - 1]
            if exit_ok is not None and e_arr not in exit_ok:
                continue
            va = value_arr(e_arr)
            if va < INF:
                best = min(best, segment(t, i, j) + va)
        memo_dep[e_dep] = best
        return best

    def transfers_from(e_arr: int):
        """All (e_dep, extra_cost, min_time) pairs reachable from an arrival."""
        t_a = view.time(e_arr)
        stop = net.ev_stop[e_arr]
        opts = [(stop, net.stops[stop].mct, prefs.beta_wait * net.stops[stop].mct, False)]
        for s2, length in net.foot_out[stop]:
            if (e_arr, s2) not in foot_blocked:
                opts.append((s2, length, prefs.beta_walk * length, True))
        for t, (lo, hi) in spans.items():
            if t == net.ev_trip[e_arr]:
                continue
            trip = net.trips[t]
            for pos in range(lo, hi + 1):
                e_dep = trip.events[2 * pos]
                if board_ok is not None and e_dep not in board_ok:
                    continue
                if net.reg[e_dep] > horizon:
                    continue
                for s2, min_t, extra, _walked in opts:
                    if net.ev_stop[e_dep] == s2 and net.reg[e_dep] >= t_a + min_t:
                        yield e_dep, extra, min_t

    def value_arr(e_arr: int) -> float:
        if e_arr in memo_arr:
            return memo_arr[e_arr]
        memo_arr[e_arr] = INF
        t_a = view.time(e_arr)
        best = walk_dest(net.ev_stop[e_arr])
        for e_dep, extra, min_t in transfers_from(e_arr):
            vd = value_dep(e_dep)
            if vd == INF:
                continue
            wait = (net.reg[e_dep] - min_t) - t_a
            pd = view.p_denied(e_dep)
            pdel = view.p_delay(e_arr, e_dep, min_t)
            pf = pd + pdel - pd * pdel
            cost = (vd + extra + prefs.beta_transfer + prefs.beta_wait * wait
                    + net.headway(e_dep) * prefs.beta_fail * pf)
            best = min(best, cost)
        memo_arr[e_arr] = best
        return best

    f_arr: dict[int, float] = {}
    f_dep: dict[int, float] = {}
    for t, (lo, hi) in spans.items():
        trip = net.trips[t]
        for pos in range(lo, hi + 1):
            e_dep = trip.events[2 * pos]
            e_arr = trip.events[2 * pos + 1]
            if exit_ok is None or e_arr in exit_ok:
                f_arr[e_arr] = value_arr(e_arr)
            if board_ok is None or e_dep in board_ok:
                f_dep[e_dep] = value_dep(e_dep)
    return f_arr, f_dep
