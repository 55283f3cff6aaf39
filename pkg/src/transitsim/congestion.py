"""Vehicle-side dynamics: seats, capacity limits, dwell delays, propagation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .network import Network


@dataclass
class VehicleState:
    """Occupancy of one trip while it runs."""
    trip: int
    cap_sit: int
    cap: int
    seated: set[int] = field(default_factory=set)
    standing: set[int] = field(default_factory=set)

    @property
    def onboard(self) -> int:
        return len(self.seated) + len(self.standing)

    def check(self) -> None:
        if len(self.seated) > self.cap_sit or self.onboard > self.cap:
            raise AssertionError(
                f"capacity violated on trip {self.trip}: "
                f"{len(self.seated)} seated / {self.onboard} onboard")


@dataclass
class BoardingOutcome:
    boarded: list[int]
    denied: list[int]
    seated: list[int]     # subset of boarded that found a seat immediately
    promoted: list[int]   # standing passengers who moved to freed seats


def process_stop(v: VehicleState, alighting, applicants, rng) -> BoardingOutcome:
    """Alight, promote standers to freed seats, board applicants in random
    order; whoever exceeds total capacity is denied and stays at the stop."""
    for k in alighting:
        v.seated.discard(k)
        v.standing.discard(k)

    promoted: list[int] = []
    free_seats = v.cap_sit - len(v.seated)
    if free_seats > 0 and v.standing:
        standers = sorted(v.standing)
        n = min(free_seats, len(standers))
        picks = rng.permutation(len(standers))[:n]
        for i in sorted(picks):
            k = standers[i]
            v.standing.discard(k)
            v.seated.add(k)
            promoted.append(k)

    boarded: list[int] = []
    denied: list[int] = []
    seated_now: list[int] = []
    queue = sorted(applicants)
    order = rng.permutation(len(queue)) if len(queue) > 1 else range(len(queue))
    for i in order:
        k = queue[i]
        if v.onboard >= v.cap:
            denied.append(k)
        elif len(v.seated) < v.cap_sit:
            v.seated.add(k)
            boarded.append(k)
            seated_now.append(k)
        else:
            v.standing.add(k)
            boarded.append(k)
    v.check()
    return BoardingOutcome(boarded, denied, seated_now, promoted)


def dwell_delay(q_alight: int, q_board: int, door_capacity: float,
                scheduled_dwell: int) -> int:
    """Extra dwell seconds when passenger movements exceed the schedule."""
    if q_alight < 0 or q_board < 0 or door_capacity <= 0:
        raise ValueError("invalid dwell inputs")
    required = math.ceil((q_alight + q_board) / door_capacity)
    return max(0, required - scheduled_dwell)


def propagate_delay(net: Network, trip_idx: int, from_pos: int, delay: int,
                    _changed: list[int] | None = None) -> list[int]:
    """Shift the trip's events after position ``from_pos`` by the delay,
    letting every activity recover down to its minimum duration; late final
    arrivals push dependent trips through their turnaround buffers.

    ``from_pos`` is the stop position whose departure is delayed.  Returns
    the events whose current time changed, for queue re-keying.
    """
    changed = _changed if _changed is not None else []
    if delay <= 0:
        return changed
    trip = net.trips[trip_idx]
    nstops = len(trip.stops)
    # push the departure at from_pos past its current time, then ripple
    dep = trip.events[2 * from_pos] if from_pos < nstops - 1 else None
    if dep is not None:
        net.cur[dep] += delay
        changed.append(dep)
        prev_time = net.cur[dep]
        for pos in range(from_pos, nstops - 1):
            d_arc = trip.drive_arcs[pos]
            dep_e, arr_e = net.arc_from[d_arc], net.arc_to[d_arc]
            t_arr = max(net.reg[arr_e], prev_time + net.arc_ivt_min[d_arc])
            if t_arr > net.cur[arr_e]:
                net.cur[arr_e] = t_arr
                changed.append(arr_e)
            elif t_arr < net.cur[arr_e]:
                t_arr = net.cur[arr_e]
            if pos + 1 < nstops - 1:
                nxt_dep = trip.events[2 * (pos + 1)]
                dw = trip.dwell_arcs[pos + 1]
                t_dep = max(net.reg[nxt_dep], t_arr + net.arc_ivt_min[dw])
                if t_dep > net.cur[nxt_dep]:
                    net.cur[nxt_dep] = t_dep
                    changed.append(nxt_dep)
                elif t_dep < net.cur[nxt_dep]:
                    t_dep = net.cur[nxt_dep]
                prev_time = t_dep
            else:
                prev_time = t_arr

    final_arr = trip.events[-1]
    late = net.cur[final_arr] - net.reg[final_arr]
    if late > 0:
        for to_idx, min_turn in net.deps_from_trip.get(trip_idx, ()):
            succ = net.trips[to_idx]
            first_dep = succ.events[0]
            t_start = net.cur[final_arr] + min_turn
            if t_start > net.cur[first_dep]:
                propagate_delay(net, succ.idx, 0,
                                t_start - net.cur[first_dep], changed)
    return changed
