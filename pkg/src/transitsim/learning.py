"""Day-to-day learning: blending experiences into per-passenger expectations."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .network import ARRIVAL, DEPARTURE, DRIVING, Network

SAMPLE_WINDOW = 64


def blend(old: float, obs: float, n: int, kappa: float) -> float:
    """Recency-weighted update; n is the update count after incrementing.

    With kappa=1 the accumulated value is the running arithmetic mean; the
    first update (n=1) returns the observation exactly.
    """
    if n < 1:
        raise ValueError("update count must be >= 1")
    w = float(n) ** (-kappa)
    # Written as a correction term so that blend(x, x, ...) == x exactly;
    # repeated updates with unchanged observations must not drift.
    return old + (obs - old) * w


def delay_weights(d: int, kappa: float) -> np.ndarray:
    """Weights w_i = i^-kappa * prod_{j=i+1..d} (1 - j^-kappa) for i=1..d.

    These sum to 1 for every d >= 1; for kappa=1 they are uniform 1/d.
    """
    if d < 1:
        raise ValueError("need at least one sample")
    i = np.arange(1, d + 1, dtype=float)
    iw = i ** (-kappa)
    one = 1.0 - iw
    suffix = np.ones(d)
    if d > 1:
        suffix[:-1] = np.cumprod(one[::-1])[::-1][1:]
    return iw * suffix


_weight_cache: dict[tuple[float, int], np.ndarray] = {}


def _weights(d: int, kappa: float) -> np.ndarray:
    key = (kappa, d)
    w = _weight_cache.get(key)
    if w is None:
        w = delay_weights(d, kappa)
        w = w / w.sum()
        _weight_cache[key] = w
    return w


# ------------------------------------------------------------------- stores

@dataclass
class DayRecord:
    """Network-wide realizations of one day, shared by all passengers."""
    loads: list[float]                 # per arc, seat-relative
    denied_share: dict[int, float]     # departure event -> denied/attempters
    times: list[int]                   # per event, realized current time


@dataclass
class ExperienceStore:
    """One passenger's accumulated expectations."""
    lam: dict[int, float] = field(default_factory=dict)
    p_denied: dict[int, float] = field(default_factory=dict)
    tau: dict[int, float] = field(default_factory=dict)
    samples: dict[int, list[float]] = field(default_factory=dict)
    n_lam: dict[int, int] = field(default_factory=dict)
    n_pden: dict[int, int] = field(default_factory=dict)
    n_tau: dict[int, int] = field(default_factory=dict)


@dataclass
class ChangeSet:
    """Keys whose expectations changed, for seeding the profile update."""
    arcs: list[int] = field(default_factory=list)
    events: list[int] = field(default_factory=list)
    p_denied: list[int] = field(default_factory=list)
    samples: list[int] = field(default_factory=list)


class ExperienceView:
    """Expectation accessors over a store, with schedule/default fallbacks.

    Learned event times are served through a per-trip repaired sequence:
    delays at the first/last learned event are extrapolated to the trip's
    start/end and interior decreases are forward-maxed away, so the times a
    passenger plans with are non-decreasing along every trip.  The raw
    learned values in the store stay untouched.
    """

    def __init__(self, net: Network, store: ExperienceStore, kappa: float,
                 lam_std: float = 0.5):
        self.net = net
        self.store = store
        self.kappa = kappa
        self.lam_std = lam_std
        self._repaired: dict[int, list[float]] = {}
        self._learned_trips: set[int] = {net.ev_trip[e] for e in store.tau}

    def invalidate_trip(self, trip_idx: int) -> None:
        self._learned_trips.add(trip_idx)
        self._repaired.pop(trip_idx, None)

    def _trip_times(self, trip_idx: int) -> list[float]:
        eff = self._repaired.get(trip_idx)
        if eff is not None:
            return eff
        net = self.net
        events = net.trips[trip_idx].events
        tau = self.store.tau
        eff = [float(net.reg[e]) for e in events]
        obs = [i for i, e in enumerate(events) if e in tau]
        if obs:
            first, last = obs[0], obs[-1]
            d_first = tau[events[first]] - net.reg[events[first]]
            d_last = tau[events[last]] - net.reg[events[last]]
            for i in range(first):
                eff[i] += d_first
            for i in obs:
                eff[i] = tau[events[i]]
            for i in range(last + 1, len(events)):
                eff[i] += d_last
            for i in range(1, len(events)):
                if eff[i] < eff[i - 1]:
                    eff[i] = eff[i - 1]
        self._repaired[trip_idx] = eff
        return eff

    def time(self, e: int) -> float:
        t = self.net.ev_trip[e]
        if t not in self._learned_trips:
            return float(self.net.reg[e])
        return self._trip_times(t)[self._event_offset(e)]

    def _event_offset(self, e: int) -> int:
        pos = self.net.ev_pos[e]
        return 2 * pos if self.net.ev_kind[e] == DEPARTURE else 2 * pos - 1

    def load(self, arc: int) -> float:
        return self.store.lam.get(arc, self.lam_std)

    def p_denied(self, e_dep: int) -> float:
        return self.store.p_denied.get(e_dep, 0.0)

    def p_delay(self, e_arr: int, e_dep: int, min_time: int) -> float:
        samples = self.store.samples.get(e_arr)
        if not samples:
            return 0.0
        threshold = self.net.reg[e_dep] - min_time
        w = _weights(len(samples), self.kappa)
        late = np.fromiter((s > threshold for s in samples), dtype=float,
                           count=len(samples))
        return float(w @ late)


def end_of_day(net: Network, store: ExperienceStore, kappa: float,
               journey_arcs, journey_events, denied_deps,
               day: DayRecord, view: ExperienceView | None = None) -> ChangeSet:
    """Fold one day's experiences into the store.

    ``journey_arcs`` are the driving arcs ridden, ``journey_events`` all
    events of the journey, ``denied_deps`` the departures the passenger was
    turned away from.  Only these keys change; everything else in the store
    stays bit-identical.
    """
    changes = ChangeSet()

    for a in journey_arcs:
        n = store.n_lam.get(a, 0) + 1
        store.n_lam[a] = n
        store.lam[a] = blend(store.lam.get(a, 0.0), day.loads[a], n, kappa)
        changes.arcs.append(a)
        # dwelling load mirrors the following driving arc
        pos = net.arc_pos[a]
        if pos >= 1:
            d = net.trips[net.arc_trip[a]].dwell_arcs[pos]
            if d is not None:
                store.lam[d] = store.lam[a]
                changes.arcs.append(d)

    dep_events = {e for e in journey_events if net.ev_kind[e] == DEPARTURE}
    for e in sorted(dep_events | set(denied_deps)):
        n = store.n_pden.get(e, 0) + 1
        store.n_pden[e] = n
        store.p_denied[e] = blend(store.p_denied.get(e, 0.0),
                                  day.denied_share.get(e, 0.0), n, kappa)
        changes.p_denied.append(e)

    touched_trips = set()
    for e in sorted(set(journey_events)):
        n = store.n_tau.get(e, 0) + 1
        store.n_tau[e] = n
        store.tau[e] = blend(store.tau.get(e, float(net.reg[e])),
                             float(day.times[e]), n, kappa)
        changes.events.append(e)
        touched_trips.add(net.ev_trip[e])
        if net.ev_kind[e] == ARRIVAL:
            lst = store.samples.setdefault(e, [])
            lst.append(float(day.times[e]))
            if len(lst) > SAMPLE_WINDOW:
                del lst[0]
            changes.samples.append(e)

    if view is not None:
        for t in touched_trips:
            view.invalidate_trip(t)
    return changes
