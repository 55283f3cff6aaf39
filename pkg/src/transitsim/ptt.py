"""Perceived travel times: component formulas, profile scan, incremental update.

For a passenger with a fixed destination, ``f(e)`` is the minimum expected
perceived travel time from event ``e`` to the destination.  The profile is
computed by scanning driving arcs in descending order of scheduled departure,
either over Pareto label sets (initial computation) or by a direct transfer
scan (full recompute / incremental update, which share one code path so that
an update is bit-identical to a recomputation).
"""
from __future__ import annotations

import bisect
import heapq
from dataclasses import dataclass

from .demand import PreferenceSet
from .network import ARRIVAL, DEPARTURE, DRIVING, Network

INF = float("inf")


# ------------------------------------------------------------------- views

class DefaultView:
    """Expected values before any experience: scheduled times, standard load,
    zero denied-boarding and delay probabilities."""

    def __init__(self, net: Network, lam_std: float = 0.5):
        self.net = net
        self.lam_std = lam_std

    def time(self, e: int) -> float:
        return self.net.reg[e]

    def load(self, arc: int) -> float:
        return self.lam_std

    def p_denied(self, e_dep: int) -> float:
        return 0.0

    def p_delay(self, e_arr: int, e_dep: int, min_time: int) -> float:
        return 0.0


# ---------------------------------------------------------------- formulas

def p_fail(p_denied: float, p_delay: float) -> float:
    """Probability that a transfer fails for either reason."""
    return p_denied + p_delay - p_denied * p_delay


def activity_cost(prefs: PreferenceSet, load: float, seated: bool, ivt: float) -> float:
    """Crowding-weighted in-vehicle time of one driving or dwelling arc."""
    return prefs.crowding.factor(load, seated) * ivt


def transfer_cost(prefs: PreferenceSet, headway: float, wait: float, walk: float,
                  p_fail_prob: float, between_trips: bool = True) -> float:
    """Perceived cost of a transfer.

    ``between_trips`` is False for the origin transfer, which carries no
    per-transfer penalty; the final transfer to the destination has wait 0.
    """
    cost = (headway * prefs.beta_fail * p_fail_prob
            + prefs.beta_wait * wait + prefs.beta_walk * walk)
    if between_trips:
        cost += prefs.beta_transfer
    return cost


def seat_expected_from(net: Network, view, trip_idx: int, i: int, j: int) -> int | None:
    """First drive-arc position m in [i, j) with expected load < 1, else None.

    A passenger boarding at position i expects to stand until the first arc
    with an expected load below one (a load of exactly 1 counts as no seat).
    """
    trip = net.trips[trip_idx]
    for m in range(i, j):
        if view.load(trip.drive_arcs[m]) < 1.0:
            return m
    return None


def segment_cost(net: Network, prefs: PreferenceSet, view, e_dep: int, e_arr: int) -> float:
    """Expected perceived travel time of the trip segment e_dep -> e_arr."""
    if net.ev_trip[e_dep] != net.ev_trip[e_arr]:
        raise ValueError("segment endpoints must share a trip")
    i, j = net.ev_pos[e_dep], net.ev_pos[e_arr]
    if j <= i:
        raise ValueError("segment must move forward along the trip")
    trip = net.trip_of(e_dep)
    seated = False
    cost = 0.0
    for pos in range(i, j):
        if pos > i:
            d = trip.dwell_arcs[pos]
            ivt_d = view.time(net.arc_to[d]) - view.time(net.arc_from[d])
            cost += activity_cost(prefs, view.load(d), seated, ivt_d)
        a = trip.drive_arcs[pos]
        if view.load(a) < 1.0:
            seated = True
        ivt_a = view.time(net.arc_to[a]) - view.time(net.arc_from[a])
        cost += activity_cost(prefs, view.load(a), seated, ivt_a)
    return cost


# -------------------------------------------------------------- Pareto sets

@dataclass(frozen=True)
class ParetoLabel:
    """(departure time, perceived travel time, first trip) of a partial journey.

    ``via`` is the stop where the journey actually boards; when the label sits
    in another stop's set it was reached through the footpath (that stop, via).
    """
    tau_dep: float
    ptt: float
    trip: int
    via: int


class LabelBag:
    """Labels at one stop, ascending by departure time, Pareto-pruned per trip.

    A label dominates another iff it departs no earlier and its perceived
    time, plus the waiting cost for the departure-time difference, is no
    worse.  Domination is only applied between labels of the same trip: a
    query from an arrival must skip labels of its own trip, so a label of
    another trip may be unusable exactly when its dominator is.
    """

    def __init__(self, beta_wait: float):
        self.beta_wait = beta_wait
        self.taus: list[float] = []
        self.labels: list[ParetoLabel] = []

    def insert(self, label: ParetoLabel) -> bool:
        idx = bisect.bisect_left(self.taus, label.tau_dep)
        # rejected by a same-trip label departing no earlier?
        for k in range(idx, len(self.labels)):
            nxt = self.labels[k]
            gap = self.beta_wait * (nxt.tau_dep - label.tau_dep)
            if gap > label.ptt:
                break  # later labels cannot dominate (ptt >= 0)
            if nxt.trip == label.trip and nxt.ptt + gap <= label.ptt:
                return False
        # evict earlier same-trip labels the new one dominates
        for k in range(idx - 1, -1, -1):
            prv = self.labels[k]
            if (prv.trip == label.trip and
                    label.ptt + self.beta_wait * (label.tau_dep - prv.tau_dep)
                    <= prv.ptt):
                del self.taus[k]
                del self.labels[k]
                idx -= 1
        self.taus.insert(idx, label.tau_dep)
        self.labels.insert(idx, label)
        return True

    def earliest_from(self, tau: float, skip_trip: int, arr_event: int,
                      arr_stop: int, foot_blocked) -> ParetoLabel | None:
        """Usable label minimizing perceived time plus waiting cost from
        ``tau`` (not the same trip, footpath not filtered out)."""
        idx = bisect.bisect_left(self.taus, tau)
        best = None
        best_adj = INF
        for k in range(idx, len(self.labels)):
            lab = self.labels[k]
            floor = self.beta_wait * (lab.tau_dep - tau)
            if floor >= best_adj:
                break  # every later label waits at least this much
            if lab.trip == skip_trip:
                continue
            if lab.via != arr_stop and (arr_event, lab.via) in foot_blocked:
                continue
            adj = lab.ptt + floor
            if adj < best_adj:
                best, best_adj = lab, adj
        return best


# ----------------------------------------------------------------- profile

class Profile:
    """Per-passenger perceived-travel-time profile over a fixed arc universe.

    The universe is the passenger's relevant driving arcs: per trip a
    contiguous span of arc positions, plus allow-lists for boardings, exits
    and footpaths produced by choice-set reduction.  ``f`` maps surviving
    events to their perceived travel time; unreachable events are absent.
    """

    def __init__(self, net: Network, prefs: PreferenceSet, dest: int,
                 spans: dict[int, tuple[int, int]], lam_std: float = 0.5,
                 board_ok: set[int] | None = None, exit_ok: set[int] | None = None,
                 foot_blocked: frozenset[tuple[int, int]] = frozenset(),
                 horizon: float | None = None):
        self.net = net
        self.prefs = prefs
        self.dest = dest
        self.spans = spans
        self.lam_std = lam_std
        self.board_ok = board_ok
        self.exit_ok = exit_ok
        self.foot_blocked = foot_blocked
        self.horizon = horizon if horizon is not None else (max(net.reg, default=0) + 1)

        self.f: dict[int, float] = {}
        self._reg_stand: dict[int, float] = {}
        self._reg_sit: dict[int, float] = {}

        arcs = []
        for t, (lo, hi) in spans.items():
            trip = net.trips[t]
            arcs.extend(trip.drive_arcs[lo:hi + 1])
        self.arcs = set(arcs)
        self.arcs_desc = sorted(arcs, key=lambda a: (-net.reg[net.arc_from[a]], -a))
        # arrivals of the universe per stop, ascending by scheduled time
        self._stop_arrs: dict[int, tuple[list[int], list[int]]] = {}
        tmp: dict[int, list[int]] = {}
        for a in self.arcs:
            arr = net.arc_to[a]
            tmp.setdefault(net.ev_stop[arr], []).append(arr)
        for s, evs in tmp.items():
            evs.sort(key=lambda e: (net.reg[e], e))
            self._stop_arrs[s] = ([net.reg[e] for e in evs], evs)
        self._walk_dest: dict[int, float] = {}

    # -- allow-lists

    def can_board(self, e_dep: int) -> bool:
        return self.board_ok is None or e_dep in self.board_ok

    def can_exit(self, e_arr: int) -> bool:
        return self.exit_ok is None or e_arr in self.exit_ok

    def walk_dest(self, stop: int) -> float:
        w = self._walk_dest.get(stop)
        if w is None:
            if stop == self.dest:
                w = 0.0
            else:
                length = self.net.foot_len.get((stop, self.dest))
                w = INF if length is None else self.prefs.beta_walk * length
            self._walk_dest[stop] = w
        return w

    # -- transfer scan (direct)

    def best_onward(self, e_arr: int, t_a: float, view) -> tuple[float, int | None]:
        """Minimum cost of continuing from an arrival: (cost, onward departure).

        The onward departure is None when walking to the destination is the
        best (or only) continuation.  Departures are taken at regular times;
        transfers valid only through a learned delay are not options here.
        """
        net = self.net
        prefs = self.prefs
        trip = net.ev_trip[e_arr]
        stop = net.ev_stop[e_arr]
        best = self.walk_dest(stop)
        best_e: int | None = None
        best_key = (INF, INF)

        def consider(e_dep: int, base_extra: float, min_time: int):
            nonlocal best, best_e, best_key
            fd = self.f.get(e_dep)
            if fd is None or net.ev_trip[e_dep] == trip or not self.can_board(e_dep):
                return
            wait = (net.reg[e_dep] - min_time) - t_a
            pf = p_fail(view.p_denied(e_dep), view.p_delay(e_arr, e_dep, min_time))
            cost = ((fd + base_extra) + prefs.beta_transfer
                    + prefs.beta_wait * wait
                    + net.headway(e_dep) * prefs.beta_fail * pf)
            key = (net.reg[e_dep], e_dep)
            if cost < best or (cost == best and best_e is not None and key < best_key):
                best, best_e, best_key = cost, e_dep, key

        mct = net.stops[stop].mct
        for e_dep in net.dep_events_between(stop, t_a + mct, self.horizon):
            consider(e_dep, prefs.beta_wait * mct, mct)
        for s2, length in net.foot_out[stop]:
            if (e_arr, s2) in self.foot_blocked:
                continue
            for e_dep in net.dep_events_between(s2, t_a + length, self.horizon):
                consider(e_dep, prefs.beta_walk * length, length)
        return best, best_e

    # -- shared scan step

    def _process_arc(self, a: int, view) -> bool:
        """Recompute one driving arc from its successors; True if anything changed."""
        net = self.net
        prefs = self.prefs
        dep, arr = net.arc_from[a], net.arc_to[a]
        t = net.arc_trip[a]
        trip = net.trips[t]
        pos = net.arc_pos[a]
        t_arr = view.time(arr)

        if self.can_exit(e_arr := arr):
            alight, _ = self.best_onward(e_arr, t_arr, view)
        else:
            alight = INF

        lo, hi = self.spans[t]
        remain = remain_sit = INF
        if pos + 1 <= hi:
            nxt = trip.drive_arcs[pos + 1]
            rs = self._reg_stand.get(nxt)
            if rs is not None:
                d = trip.dwell_arcs[pos + 1]
                ivt_d = view.time(net.arc_from[nxt]) - t_arr
                lam_d = view.load(d)
                remain = rs + activity_cost(prefs, lam_d, False, ivt_d)
                remain_sit = self._reg_sit[nxt] + activity_cost(prefs, lam_d, True, ivt_d)

        minp = alight if alight <= remain else remain
        minp_sit = alight if alight <= remain_sit else remain_sit

        if minp == INF:
            new_stand = new_sit = None
        else:
            lam_a = view.load(a)
            ivt_a = t_arr - view.time(dep)
            new_sit = minp_sit + activity_cost(prefs, lam_a, True, ivt_a)
            new_stand = minp + activity_cost(prefs, lam_a, False, ivt_a)
            if lam_a < 1.0:
                new_stand = new_sit

        changed = (self._reg_stand.get(a) != new_stand or self._reg_sit.get(a) != new_sit)
        if new_stand is None:
            self._reg_stand.pop(a, None)
            self._reg_sit.pop(a, None)
        else:
            self._reg_stand[a] = new_stand
            self._reg_sit[a] = new_sit

        old_fa = self.f.get(arr)
        new_fa = alight if (alight < INF and self.can_exit(arr)) else None
        if old_fa != new_fa:
            changed = True
            if new_fa is None:
                self.f.pop(arr, None)
            else:
                self.f[arr] = new_fa

        old_fd = self.f.get(dep)
        new_fd = new_stand if (new_stand is not None and self.can_board(dep)) else None
        if old_fd != new_fd:
            changed = True
            if new_fd is None:
                self.f.pop(dep, None)
            else:
                self.f[dep] = new_fd
        return changed

    # -- full recomputation / incremental update

    def full_recompute(self, view) -> None:
        self.f.clear()
        self._reg_stand.clear()
        self._reg_sit.clear()
        for a in self.arcs_desc:
            self._process_arc(a, view)

    def update(self, view, seed_arcs) -> list[int]:
        """Re-scan starting from the changed arcs; equivalent to a full
        recomputation under the same view.  Returns the arcs processed."""
        net = self.net
        heap: list[tuple[float, int, int]] = []
        queued: set[int] = set()
        processed: list[int] = []

        def push(a: int):
            if a in self.arcs and a not in queued:
                queued.add(a)
                heapq.heappush(heap, (-net.reg[net.arc_from[a]], -a, a))

        for a in seed_arcs:
            push(a)
        while heap:
            _, _, a = heapq.heappop(heap)
            queued.discard(a)
            processed.append(a)
            if not self._process_arc(a, view):
                continue
            t = net.arc_trip[a]
            pos = net.arc_pos[a]
            lo, _hi = self.spans[t]
            if pos - 1 >= lo:
                push(net.trips[t].drive_arcs[pos - 1])
            for b in self._transfer_preds(net.arc_from[a]):
                push(b)
        return processed

    def _transfer_preds(self, e_dep: int) -> list[int]:
        """Driving arcs whose arrival could transfer into ``e_dep`` (superset
        by regular times; learned times never precede the schedule)."""
        net = self.net
        out = []
        stop = net.ev_stop[e_dep]
        limit = net.reg[e_dep]

        def collect(s: int, min_time: int, check_block: bool):
            entry = self._stop_arrs.get(s)
            if entry is None:
                return
            times, evs = entry
            hi = bisect.bisect_right(times, limit - min_time)
            for e_arr in evs[:hi]:
                if check_block and (e_arr, stop) in self.foot_blocked:
                    continue
                out.append(net.drive_arc_ending_at(e_arr))

        collect(stop, net.stops[stop].mct, False)
        for s2, length in net.foot_in[stop]:
            collect(s2, length, True)
        return out

    # -- update seeds from changed expectations

    def seeds_for(self, changed_arcs=(), changed_events=(), changed_p_denied=(),
                  changed_samples=()) -> set[int]:
        """Map changed expectation keys to the driving arcs to re-scan."""
        net = self.net
        seeds: set[int] = set()

        def add(a: int | None):
            if a is not None and a in self.arcs:
                seeds.add(a)

        def drive_at(t: int, pos: int) -> int | None:
            trip = net.trips[t]
            return trip.drive_arcs[pos] if 0 <= pos < len(trip.drive_arcs) else None

        for a in changed_arcs:
            t, pos = net.arc_trip[a], net.arc_pos[a]
            if net.arc_kind[a] == DRIVING:
                add(a)
            else:
                add(drive_at(t, pos - 1))
        # A changed event time can move every expected time of its trip:
        # learned delays are extrapolated to the trip's ends and interior
        # decreases are repaired away.  Seed the trip's whole span.
        seen_trips: set[int] = set()
        for e in changed_events:
            t = net.ev_trip[e]
            if t in seen_trips:
                continue
            seen_trips.add(t)
            span = self.spans.get(t)
            if span is not None:
                trip = net.trips[t]
                for pos in range(span[0], span[1] + 1):
                    seeds.add(trip.drive_arcs[pos])
        for e_dep in changed_p_denied:
            for b in self._transfer_preds(e_dep):
                add(b)
        for e_arr in changed_samples:
            t, pos = net.ev_trip[e_arr], net.ev_pos[e_arr]
            add(drive_at(t, pos - 1))
        return seeds

    # -- initial computation over Pareto label sets

    def compute_initial(self) -> None:
        """Profile scan with Pareto label sets under default expectations."""
        net = self.net
        prefs = self.prefs
        fac_stand = prefs.crowding.factor(self.lam_std, self.lam_std < 1.0)
        bags: dict[int, LabelBag] = {}
        ptt_curr: dict[int, float] = {}
        self.f.clear()
        self._reg_stand.clear()
        self._reg_sit.clear()

        for a in self.arcs_desc:
            dep, arr = net.arc_from[a], net.arc_to[a]
            t = net.arc_trip[a]
            trip = net.trips[t]
            pos = net.arc_pos[a]

            if self.can_exit(arr):
                stop_arr = net.ev_stop[arr]
                bag = bags.get(stop_arr)
                lab = None if bag is None else bag.earliest_from(
                    net.reg[arr], t, arr, stop_arr, self.foot_blocked)
                if lab is not None:
                    transfer = (lab.ptt + prefs.beta_transfer
                                + prefs.beta_wait * (lab.tau_dep - net.reg[arr]))
                else:
                    transfer = INF
                wd = self.walk_dest(stop_arr)
                alight = wd if wd <= transfer else transfer
            else:
                alight = INF

            _lo, hi = self.spans[t]
            remain = INF
            if pos + 1 <= hi and t in ptt_curr:
                d = trip.dwell_arcs[pos + 1]
                remain = ptt_curr[t] + fac_stand * (net.reg[net.arc_to[d]] - net.reg[net.arc_from[d]])
            minp = alight if alight <= remain else remain
            if minp == INF:
                continue
            cur = minp + fac_stand * (net.reg[arr] - net.reg[dep])
            ptt_curr[t] = cur
            self._reg_stand[a] = cur
            self._reg_sit[a] = cur
            if alight < INF and self.can_exit(arr):
                self.f[arr] = alight
            if not self.can_board(dep):
                continue
            self.f[dep] = cur
            stop_dep = net.ev_stop[dep]
            mct = net.stops[stop_dep].mct
            bag = bags.setdefault(stop_dep, LabelBag(prefs.beta_wait))
            bag.insert(ParetoLabel(net.reg[dep] - mct, cur + prefs.beta_wait * mct,
                                   t, stop_dep))
            for s2, length in net.foot_in[stop_dep]:
                bag2 = bags.setdefault(s2, LabelBag(prefs.beta_wait))
                bag2.insert(ParetoLabel(net.reg[dep] - length,
                                        cur + prefs.beta_walk * length, t, stop_dep))
        self._bags = bags  # kept for label-invariant checks in tests
