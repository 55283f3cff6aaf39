"""Stochastic decisions on top of perceived-travel-time profiles.

Decisions follow a mixed (epsilon-greedy, SoftMax) model: with probability
1-epsilon the cheapest option is taken, otherwise an option is sampled with
probability proportional to exp(rel_cost / gamma), where rel_cost is the
cost difference to the cheapest option (0 for the optimum, negative else).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .demand import PreferenceSet
from .network import DRIVING, Network
from .ptt import INF, Profile, p_fail, segment_cost, seat_expected_from


@dataclass(frozen=True)
class ChoiceParams:
    """Temperature and exploration rate; gamma may vary by day."""
    gamma: float = 300.0
    epsilon: float = 0.2
    gamma_schedule: tuple[float, ...] = ()

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")

    def gamma_for_day(self, day: int) -> float:
        if self.gamma_schedule and 1 <= day <= len(self.gamma_schedule):
            return self.gamma_schedule[day - 1]
        return self.gamma


def softmax_select(options, gamma: float, epsilon: float, rng) -> int:
    """Pick an index into ``options`` (sequence of costs).

    One uniform draw decides greedy-vs-sample; a second is consumed only in
    the sampling branch, so the stream stays aligned across epsilon values.
    """
    if not len(options):
        raise ValueError("empty option set")
    best = min(range(len(options)), key=lambda i: options[i])
    if rng.random() >= epsilon:
        return best
    cbest = options[best]
    weights = [math.exp((cbest - c) / gamma) for c in options]
    r = rng.random() * math.fsum(weights)
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    return len(options) - 1


# --------------------------------------------------------- boarding options

@dataclass
class BoardingOption:
    e_dep: int
    cost: float
    walk: float          # footpath length to the departure stop, 0 if same stop
    wait: float          # waiting time charged (includes the transfer slack)


def relevant_departures(profile: Profile, view, stop: int, tau: float,
                        exclude_trip: int = -1, e_arr: int | None = None,
                        at_origin: bool = False) -> list[BoardingOption]:
    """Earliest boardable departure per line from (stop, tau), with costs.

    Validity is judged at regular times; transfers opened only by a delay are
    left to the real-time reactions.  The failed-transfer term uses the
    learned denied probability but a delay probability of 0, since the
    arrival time is already realized at the moment of the decision.
    """
    net = profile.net
    prefs = profile.prefs
    per_line: dict[int, tuple[float, int, int, float]] = {}

    def scan(s: int, min_time: int, walk: float):
        for e_dep in net.dep_events_between(s, tau + min_time, profile.horizon):
            if net.ev_trip[e_dep] == exclude_trip or e_dep not in profile.f:
                continue
            line = net.trips[net.ev_trip[e_dep]].line_idx
            key = (net.reg[e_dep], e_dep)
            cur = per_line.get(line)
            if cur is None or key < (cur[0], cur[1]):
                per_line[line] = (net.reg[e_dep], e_dep, min_time, walk)

    scan(stop, 0 if at_origin else net.stops[stop].mct, 0.0)
    for s2, length in net.foot_out[stop]:
        if e_arr is not None and (e_arr, s2) in profile.foot_blocked:
            continue
        scan(s2, length, float(length))

    out = []
    for reg_dep, e_dep, min_time, walk in per_line.values():
        wait = (reg_dep - tau) - walk
        pf = p_fail(view.p_denied(e_dep), 0.0)
        cost = (profile.f[e_dep] + prefs.beta_wait * wait + prefs.beta_walk * walk
                + net.headway(e_dep) * prefs.beta_fail * pf)
        if not at_origin:
            cost += prefs.beta_transfer
        out.append(BoardingOption(e_dep, cost, walk, wait))
    out.sort(key=lambda o: (o.cost, profile.net.reg[o.e_dep], o.e_dep))
    return out


@dataclass
class BoardingResult:
    kind: str                    # "walk" | "board" | "stranded"
    option: BoardingOption | None = None
    optimal: bool = True         # chosen option had the minimal cost
    f_star: float = INF          # best ride cost at decision time


def boarding_decision(profile: Profile, view, params: ChoiceParams, day: int,
                      stop: int, tau: float, rng, exclude_trip: int = -1,
                      e_arr: int | None = None, at_origin: bool = False,
                      options: list[BoardingOption] | None = None) -> BoardingResult:
    """Walk-vs-ride decision, then a softmax over the relevant departures."""
    if options is None:
        options = relevant_departures(profile, view, stop, tau, exclude_trip,
                                      e_arr, at_origin)
    walk_d = profile.walk_dest(stop)
    f_star = options[0].cost if options else INF
    gamma = params.gamma_for_day(day)
    if not options:
        if walk_d == INF:
            return BoardingResult("stranded")
        return BoardingResult("walk")
    if walk_d < INF:
        pick = softmax_select([walk_d, f_star], gamma, params.epsilon, rng)
        if pick == 0:
            return BoardingResult("walk", optimal=walk_d <= f_star, f_star=f_star)
    idx = softmax_select([o.cost for o in options], gamma, params.epsilon, rng)
    return BoardingResult("board", options[idx], optimal=idx == 0, f_star=f_star)


# --------------------------------------------------------- alighting choice

@dataclass
class AlightOption:
    e_arr: int
    cost: float


@dataclass
class AlightResult:
    e_arr: int
    cost: float
    optimal: bool
    seat_pos: int | None  # drive-arc position where a seat is expected


def alight_options(profile: Profile, view, e_dep: int,
                   from_pos: int | None = None) -> list[AlightOption]:
    """Costs for every allowed downstream exit of the boarded trip."""
    net = profile.net
    t = net.ev_trip[e_dep]
    trip = net.trips[t]
    i = net.ev_pos[e_dep] if from_pos is None else from_pos
    lo, hi = profile.spans[t]
    out = []
    for m in range(max(i, lo), hi + 1):
        arr = net.arc_to[trip.drive_arcs[m]]
        fa = profile.f.get(arr)
        if fa is None:
            continue
        seg = segment_cost(net, profile.prefs, view, e_dep, arr)
        out.append(AlightOption(arr, seg + fa))
    return out


def alighting_decision(profile: Profile, view, params: ChoiceParams, day: int,
                       e_dep: int, rng,
                       options: list[AlightOption] | None = None) -> AlightResult | None:
    """Softmax over downstream exits; None when no exit survives filtering."""
    if options is None:
        options = alight_options(profile, view, e_dep)
    if not options:
        return None
    best = min(range(len(options)), key=lambda i: options[i].cost)
    idx = softmax_select([o.cost for o in options], params.gamma_for_day(day),
                         params.epsilon, rng)
    chosen = options[idx]
    net = profile.net
    seat = seat_expected_from(net, view, net.ev_trip[e_dep],
                              net.ev_pos[e_dep], net.ev_pos[chosen.e_arr])
    return AlightResult(chosen.e_arr, chosen.cost, idx == best, seat)


# ----------------------------------------------------- choice-set reduction

@dataclass
class ReducedSets:
    """Destination-level filtering results shared by all passengers heading
    to the same stop."""
    board_ok: set[int]
    exit_ok: set[int]
    foot_blocked: frozenset[tuple[int, int]]


def _wait_value(profile: Profile, view, e_dep: int) -> float:
    """ptt of the best journey that boards e_dep or keeps waiting at its stop
    for a later departure (rule-2/3 reference value)."""
    net = profile.net
    stop = net.ev_stop[e_dep]
    tau = net.reg[e_dep]
    best = profile.f.get(e_dep, INF)
    for e2 in net.dep_events_between(stop, tau, profile.horizon):
        if e2 == e_dep:
            continue
        f2 = profile.f.get(e2)
        if f2 is not None:
            best = min(best, profile.prefs.beta_wait * (net.reg[e2] - tau) + f2)
    return best


def _first_boarding_of_opt(profile: Profile, view, stop: int, tau: float,
                           exclude_trip: int) -> int | None:
    opts = relevant_departures(profile, view, stop, tau, exclude_trip)
    if not opts or profile.walk_dest(stop) < opts[0].cost:
        return None
    return opts[0].e_dep


def _unroll_boardings(profile: Profile, view, e_dep: int, limit: int = 10) -> list[int]:
    """Departure events boarded along the cost-optimal journey from e_dep."""
    net = profile.net
    boarded = [e_dep]
    cur = e_dep
    for _ in range(limit):
        opts = alight_options(profile, view, cur)
        if not opts:
            break
        arr = min(opts, key=lambda o: (o.cost, net.reg[o.e_arr], o.e_arr)).e_arr
        _, nxt = profile.best_onward(arr, net.reg[arr], view)
        if nxt is None:
            break
        boarded.append(nxt)
        cur = nxt
    return boarded


def reduce_choice_set(profile: Profile, view) -> ReducedSets:
    """Drop boardings, exits, and footpaths no reasonable journey uses.

    Rule 2 removes boardings whose every downstream exit is worse than
    waiting; rule 3 removes exits (and onward footpaths) worse than the worst
    upstream alternative; rule 4 removes boardings that only ride a loop back
    onto the journey the passenger could have waited for.  The horizon rule
    is applied when the per-passenger arc universe is built.
    """
    net = profile.net
    board_ok: set[int] = set()
    exit_ok: set[int] = set()
    blocked: set[tuple[int, int]] = set()

    for t, (lo, hi) in profile.spans.items():
        trip = net.trips[t]
        wait_vals = []
        keep_deps = []
        for i in range(lo, hi + 1):
            e_dep = net.arc_from[trip.drive_arcs[i]]
            if e_dep not in profile.f:
                wait_vals.append(None)
                continue
            jopt = _wait_value(profile, view, e_dep)
            wait_vals.append(jopt)
            # rule 2: every exit strictly worse than waiting
            exits = [profile.f.get(net.arc_to[trip.drive_arcs[m]])
                     for m in range(i, hi + 1)]
            exits = [f for f in exits if f is not None]
            if exits and min(exits) > jopt:
                continue
            # rule 4: implied loop back onto the waited-for journey
            first = _first_boarding_of_opt(profile, view, net.ev_stop[e_dep],
                                           net.reg[e_dep], -1)
            if first is not None and first != e_dep:
                if first in _unroll_boardings(profile, view, e_dep):
                    continue
            keep_deps.append(e_dep)
        board_ok.update(keep_deps)

        # rule 3: exits worse than the maximal upstream wait-or-board value
        run_max = -INF
        for j, i in enumerate(range(lo, hi + 1)):
            v = wait_vals[j]
            if v is not None:
                run_max = max(run_max, v)
            e_arr = net.arc_to[trip.drive_arcs[i]]
            fa = profile.f.get(e_arr)
            if fa is None or run_max == -INF:
                continue
            if fa > run_max:
                continue
            exit_ok.add(e_arr)
            stop = net.ev_stop[e_arr]
            for s2, length in net.foot_out[stop]:
                fp_val = _footpath_value(profile, view, e_arr, s2, length)
                if fp_val > run_max:
                    blocked.add((e_arr, s2))
    return ReducedSets(board_ok, exit_ok, frozenset(blocked))


def _footpath_value(profile: Profile, view, e_arr: int, s2: int, length: int) -> float:
    """ptt of the best journey continuing from e_arr over one footpath."""
    net = profile.net
    prefs = profile.prefs
    tau = net.reg[e_arr]
    best = INF
    for e_dep in net.dep_events_between(s2, tau + length, profile.horizon):
        fd = profile.f.get(e_dep)
        if fd is None or net.ev_trip[e_dep] == net.ev_trip[e_arr]:
            continue
        wait = (net.reg[e_dep] - length) - tau
        best = min(best, fd + prefs.beta_transfer + prefs.beta_wait * wait
                   + prefs.beta_walk * length)
    if s2 == profile.dest:
        best = min(best, prefs.beta_walk * length)
    return best


# ------------------------------------------------- per-passenger reachability

def reachable_universe(net: Network, origin: int, tau_start: float,
                       dest: int, delta_tau: float,
                       board_ok: set[int] | None = None,
                       ) -> tuple[dict[int, tuple[int, int]], float] | None:
    """Connection-scan reachability from (origin, tau_start).

    Returns per-trip contiguous drive-arc spans plus the journey horizon
    (earliest real destination arrival + delta_tau), or None when the
    destination cannot be reached at all.
    """
    arrive_ok: dict[int, float] = {origin: tau_start}
    for s2, length in net.foot_out[origin]:
        arrive_ok[s2] = tau_start + length
    trip_from: dict[int, int] = {}   # trip -> first boardable arc position
    best_dest = INF
    walk_direct = net.foot_len.get((origin, dest))
    if walk_direct is not None:
        best_dest = tau_start + walk_direct

    drive = sorted((a for a in range(len(net.arc_kind)) if net.arc_kind[a] == DRIVING),
                   key=lambda a: (net.reg[net.arc_from[a]], a))
    for a in drive:
        dep, arr = net.arc_from[a], net.arc_to[a]
        t, pos = net.arc_trip[a], net.arc_pos[a]
        if t not in trip_from:
            s = net.ev_stop[dep]
            ok = arrive_ok.get(s)
            boardable = (ok is not None and net.reg[dep] >= ok
                         and (board_ok is None or dep in board_ok))
            if boardable:
                trip_from[t] = pos
            else:
                continue
        stop_arr = net.ev_stop[arr]
        t_arr = net.reg[arr]
        mct = net.stops[stop_arr].mct
        if t_arr + mct < arrive_ok.get(stop_arr, INF):
            arrive_ok[stop_arr] = t_arr + mct
        if stop_arr == dest:
            best_dest = min(best_dest, t_arr)
        for s2, length in net.foot_out[stop_arr]:
            if s2 == dest:
                best_dest = min(best_dest, t_arr + length)
            if t_arr + length < arrive_ok.get(s2, INF):
                arrive_ok[s2] = t_arr + length

    if best_dest == INF:
        return None
    horizon = best_dest + delta_tau
    spans: dict[int, tuple[int, int]] = {}
    for t, lo in trip_from.items():
        trip = net.trips[t]
        hi = lo - 1
        for pos in range(lo, len(trip.drive_arcs)):
            if net.reg[net.arc_to[trip.drive_arcs[pos]]] <= horizon:
                hi = pos
            else:
                break
        if hi >= lo:
            spans[t] = (lo, hi)
    return spans, horizon
