"""Within-day re-decisions triggered by observed delays, loads, and seats.

Four routines let passengers revise an earlier choice: a fresh boarding
decision when the chosen trip departs later than expected (boarding_redo), a
binary switch onto another departing trip (boarding_switch), a fresh
alighting decision when the planned onward transfer broke (alighting_redo),
and a binary early-exit switch (alighting_switch).  Switches obey two
restrictions: never onto a worse option, and no switch away from a
deliberately suboptimal choice that is still performing as expected.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .choice import ChoiceParams, softmax_select
from .network import Network
from .ptt import INF, Profile, p_fail


@dataclass
class PendingBoarding:
    """A waiting passenger's current plan."""
    e_dep: int
    cost: float            # option cost at decision time
    optimal: bool
    stop: int              # where the passenger waits (after any footpath)
    ready_at: float        # earliest boarding readiness at that stop
    walk: float = 0.0      # footpath length walked to reach the stop


@dataclass
class PendingAlighting:
    """An onboard passenger's current plan."""
    e_arr: int
    cost: float
    optimal: bool
    onward_opt: int | None  # optimal onward departure at decision time
    seat_pos: int | None    # drive-arc position where a seat was expected
    e_board: int


@dataclass
class RealtimeCounters:
    triggered: dict[str, int] = field(default_factory=dict)
    executed: dict[str, int] = field(default_factory=dict)

    def hit(self, name: str, executed: bool) -> None:
        self.triggered[name] = self.triggered.get(name, 0) + 1
        if executed:
            self.executed[name] = self.executed.get(name, 0) + 1


class OverlayView:
    """Expectations overlaid with the current day's realized projections.

    An event's expected time is the later of the learned expectation and the
    currently propagated time, so re-decisions account for delays the
    passenger can observe without forgetting accumulated experience.
    """

    def __init__(self, net: Network, base):
        self.net = net
        self.base = base

    def time(self, e: int) -> float:
        t = self.base.time(e)
        cur = self.net.cur[e]
        return cur if cur > t else t

    def load(self, arc: int) -> float:
        return self.base.load(arc)

    def p_denied(self, e_dep: int) -> float:
        return self.base.p_denied(e_dep)

    def p_delay(self, e_arr: int, e_dep: int, min_time: int) -> float:
        return self.base.p_delay(e_arr, e_dep, min_time)


def projected_time(net: Network, trip_idx: int, from_pos: int, t_now: float,
                   e_target: int) -> float:
    """Forward projection of the trip's arrival time at e_target (an arrival
    event), assuming the vehicle is at stop position from_pos at t_now and
    recovers every activity down to its minimum duration."""
    trip = net.trips[trip_idx]
    tgt_pos = net.ev_pos[e_target]
    time = t_now
    for pos in range(from_pos, tgt_pos):
        dep = trip.events[2 * pos]
        if pos > from_pos:
            dw = trip.dwell_arcs[pos]
            time = max(net.reg[dep], net.cur[dep], time + net.arc_ivt_min[dw])
        else:
            time = max(net.reg[dep], net.cur[dep], time)
        a = trip.drive_arcs[pos]
        arr = net.arc_to[a]
        time = max(net.reg[arr], net.cur[arr], time + net.arc_ivt_min[a])
    return time


def transfer_still_possible(net: Network, e_arr: int, e_dep: int | None,
                            arrival_time: float) -> bool:
    """Whether the onward transfer can still be made if the vehicle reaches
    e_arr at arrival_time, judged at current departure times."""
    if e_dep is None:
        return True  # walking to the destination cannot be missed
    mt = net.min_transfer_time(e_arr, e_dep)
    if mt is None:
        return False
    return net.cur[e_dep] >= arrival_time + mt


def switch_decision(cost_old: float, cost_new: float, was_optimal: bool,
                    old_as_expected: bool, params: ChoiceParams, day: int,
                    rng) -> bool:
    """Binary switch under the two anti-bias restrictions."""
    if cost_new > cost_old:
        return False
    if not was_optimal and old_as_expected:
        return False
    pick = softmax_select([cost_old, cost_new], params.gamma_for_day(day),
                          params.epsilon, rng)
    return pick == 1


def boarding_option_cost(profile: Profile, view, e_dep: int, tau: float,
                         between: bool) -> float:
    """Cost of waiting here and boarding e_dep, judged at time tau with
    current information (no delay risk: the departure is observable)."""
    net = profile.net
    prefs = profile.prefs
    fd = profile.f.get(e_dep)
    if fd is None:
        return INF
    wait = max(0.0, view.time(e_dep) - tau)
    cost = (fd + prefs.beta_wait * wait
            + net.headway(e_dep) * prefs.beta_fail
            * p_fail(view.p_denied(e_dep), 0.0))
    if between:
        cost += prefs.beta_transfer
    return cost


def boarding_switch_triggers(net: Network, base_view, vehicle_free: bool,
                             e_new: int, pending: PendingBoarding,
                             tau_now: float) -> bool:
    """The four reasons to reconsider when a different trip departs.

    ``base_view`` carries the passenger's learned expectations without the
    current day's overlay, since the triggers compare observation against
    expectation."""
    if net.ev_trip[e_new] == net.ev_trip[pending.e_dep]:
        return False
    if net.cur[e_new] < base_view.time(e_new):
        return True                                   # departing earlier
    if vehicle_free and base_view.p_denied(e_new) > 0.0:
        return True                                   # denied risk avoidable
    if net.reg[e_new] < pending.ready_at:
        return True                                   # newly valid option
    if tau_now > base_view.time(pending.e_dep):
        return True                                   # chosen trip overdue
    return False
