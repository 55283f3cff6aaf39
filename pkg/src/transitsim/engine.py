"""Multi-day simulation engine: event loop, passenger lifecycle, day rollover.

One day processes every timetable event in nondecreasing (current time,
arrival-before-departure, id) order.  Departures board waiting passengers
under capacity limits and create dwell delays; arrivals let passengers alight
or revise their plan.  Between days each passenger folds the day's
experiences into their expectations and their profile is updated
incrementally.
"""
from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .choice import (AlightOption, BoardingOption, ChoiceParams,
                     alight_options, alighting_decision, boarding_decision,
                     reduce_choice_set, relevant_departures,
                     reachable_universe)
from .congestion import VehicleState, dwell_delay, process_stop, propagate_delay
from .demand import Passenger, PreferenceSet
from .learning import (DayRecord, ExperienceStore, ExperienceView, end_of_day)
from .network import DEPARTURE, Network
from .ptt import INF, DefaultView, Profile, p_fail, segment_cost
from .realtime import (OverlayView, PendingAlighting, PendingBoarding,
                       RealtimeCounters, boarding_option_cost,
                       boarding_switch_triggers, projected_time,
                       switch_decision, transfer_still_possible)
from .rng import stream


@dataclass(frozen=True)
class SimConfig:
    t0: int = 0
    t1: int = 7200
    inject_end: int = 3600
    days: int = 30
    seed: int = 1
    threads: int = 1
    kappa: float = 0.5
    lam_std: float = 0.5
    delta_tau: int = 3600
    choice: ChoiceParams = field(default_factory=ChoiceParams)
    prefs: PreferenceSet = field(default_factory=PreferenceSet)

    def __post_init__(self):
        if self.days < 1 or self.t1 <= self.t0 or self.inject_end > self.t1:
            raise ValueError("invalid simulation frame")


@dataclass
class JourneyLeg:
    kind: str            # "ride" | "walk" | "transfer" | "origin" | "dest"
    detail: tuple = ()


@dataclass
class DayStats:
    """Per-passenger perceived-time ledger for one day; the decomposition
    sums exactly to the total."""
    ivt: float = 0.0
    wait: float = 0.0
    walk: float = 0.0
    transfer: float = 0.0
    crowding: float = 0.0
    denied_surcharge: float = 0.0
    unfinished: float = 0.0
    standing_time: float = 0.0
    n_denied: int = 0
    finished: bool = False

    @property
    def total(self) -> float:
        return (self.ivt + self.wait + self.walk + self.transfer
                + self.crowding + self.denied_surcharge + self.unfinished)


@dataclass
class PaxState:
    """Per-day runtime state of one passenger."""
    status: str = "unstarted"       # waiting|onboard|done|stranded
    stop: int = -1
    boarding: PendingBoarding | None = None
    alighting: PendingAlighting | None = None
    seated: bool = False
    board_pos: int = -1
    waiting_since: float = 0.0      # start of the current waiting episode
    origin_leg: bool = True         # next boarding is the journey's first
    in_fail: bool = False           # denied recently; wait/walk surcharged
    stats: DayStats = field(default_factory=DayStats)
    journey_arcs: list[int] = field(default_factory=list)
    journey_events: list[int] = field(default_factory=list)
    denied_deps: list[int] = field(default_factory=list)
    rt_sync: int = 0                # consumed prefix of the delay log
    legs: list[JourneyLeg] = field(default_factory=list)


class PassengerSim:
    """Everything persistent about one passenger across days."""

    def __init__(self, pax: Passenger, profile: Profile | None,
                 store: ExperienceStore, view: ExperienceView):
        self.pax = pax
        self.profile = profile
        self.store = store
        self.view = view
        self.state = PaxState()
        self.rng = None
        self.overlay: OverlayView | None = None
        self.rt_arcs: set[int] = set()


class Simulation:
    def __init__(self, net: Network, passengers: list[Passenger],
                 cfg: SimConfig):
        self.net = net
        self.cfg = cfg
        self.counters = RealtimeCounters()
        self.day_reports: list[dict] = []
        self.arc_load_history: list[list[float]] = []
        self.arc_onboard_history: list[list[int]] = []
        self.journey_log: list[list[dict]] = []
        self.unroutable: list[int] = []
        self.sims: list[PassengerSim] = []
        self._build_passengers(passengers)

    # ------------------------------------------------------------- set-up

    def _build_passengers(self, passengers: list[Passenger]) -> None:
        net, cfg = self.net, self.cfg
        reduced_cache: dict[int, object] = {}
        full_spans = {t.idx: (0, len(t.drive_arcs) - 1)
                      for t in net.trips if t.drive_arcs}

        def reduced_for(dest: int):
            r = reduced_cache.get(dest)
            if r is None:
                base = Profile(net, cfg.prefs, dest, dict(full_spans),
                               cfg.lam_std)
                base.full_recompute(DefaultView(net, cfg.lam_std))
                r = reduce_choice_set(base, DefaultView(net, cfg.lam_std))
                reduced_cache[dest] = r
            return r

        def build(pax: Passenger) -> PassengerSim:
            red = reduced_for(pax.dest)
            uni = reachable_universe(net, pax.origin, pax.tau_start, pax.dest,
                                     cfg.delta_tau, red.board_ok)
            store = ExperienceStore()
            view = ExperienceView(net, store, cfg.kappa, cfg.lam_std)
            if uni is None:
                return PassengerSim(pax, None, store, view)
            spans, horizon = uni
            prof = Profile(net, pax.prefs, pax.dest, spans, cfg.lam_std,
                           board_ok=red.board_ok, exit_ok=red.exit_ok,
                           foot_blocked=red.foot_blocked, horizon=horizon)
            prof.full_recompute(view)
            return PassengerSim(pax, prof, store, view)

        if cfg.threads > 1:
            for pax in passengers:
                reduced_for(pax.dest)  # shared caches filled deterministically
            with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
                self.sims = list(ex.map(build, passengers))
        else:
            self.sims = [build(p) for p in passengers]
        self.unroutable = [s.pax.id for s in self.sims if s.profile is None]

    # ----------------------------------------------------------- day loop

    def run(self) -> list[dict]:
        for day in range(1, self.cfg.days + 1):
            self.run_day(day)
        return self.day_reports

    def run_day(self, day: int) -> None:
        net, cfg = self.net, self.cfg
        net.reset_day()
        self.day = day
        self.delay_log: list[int] = []
        self.loads = [0.0] * len(net.arc_kind)
        self.onboard_counts = [0] * len(net.arc_kind)
        self.attempts: dict[int, int] = {}
        self.denies: dict[int, int] = {}
        self.vehicles: dict[int, VehicleState] = {}
        self.onboard: dict[int, list[int]] = {}   # trip -> passenger ids
        self.waiting: dict[int, set[int]] = {}    # stop -> passenger ids
        self.alight_count: dict[int, int] = {}    # trip -> alighters last stop

        active = [s for s in self.sims if s.profile is not None]
        self.by_id = {s.pax.id: s for s in self.sims}
        for s in active:
            s.state = PaxState()
            s.rng = stream(cfg.seed, "pax", day, s.pax.id)
            s.overlay = OverlayView(net, s.view)
        inject = sorted(active, key=lambda s: (s.pax.tau_start, s.pax.id))
        self._inject_queue = inject
        self._inject_idx = 0

        heap = [(net.cur[e], net.ev_kind[e] == DEPARTURE, e)
                for e in range(len(net.cur))]
        heapq.heapify(heap)
        while heap:
            tau, is_dep, e = heapq.heappop(heap)
            if tau != net.cur[e]:
                continue  # stale key; the re-keyed entry is still queued
            self._inject_until(tau)
            if is_dep:
                changed = self._process_departure(day, e)
                for ev in changed:
                    heapq.heappush(heap, (net.cur[ev],
                                          net.ev_kind[ev] == DEPARTURE, ev))
            else:
                self._process_arrival(day, e)
        self._inject_until(INF)
        self._finish_day(day)

    def _inject_until(self, tau: float) -> None:
        q = self._inject_queue
        while self._inject_idx < len(q) and q[self._inject_idx].pax.tau_start <= tau:
            s = q[self._inject_idx]
            self._inject_idx += 1
            s.state.status = "waiting"
            s.state.stop = s.pax.origin
            s.state.waiting_since = s.pax.tau_start
            self._decide_boarding(s, s.pax.origin, s.pax.tau_start,
                                  at_origin=True)

    # -------------------------------------------------------- decisions

    def _sync_profile(self, s: PassengerSim) -> None:
        """Fold newly observed delays into the passenger's profile."""
        new = self.delay_log[s.state.rt_sync:]
        s.state.rt_sync = len(self.delay_log)
        if not new:
            return
        seeds = s.profile.seeds_for(changed_events=new)
        if seeds:
            s.rt_arcs.update(seeds)
            s.rt_arcs.update(s.profile.update(s.overlay, seeds))

    def _bank_wait(self, s: PassengerSim, now: float) -> None:
        """Accumulate the waiting time of the current episode up to now."""
        st = s.state
        wait_s = max(0.0, now - st.waiting_since)
        if wait_s:
            st.stats.wait += self.cfg.prefs.beta_wait * wait_s
            if st.in_fail:
                st.stats.denied_surcharge += \
                    (self.cfg.prefs.beta_fail - 1.0) * \
                    self.cfg.prefs.beta_wait * wait_s
        st.waiting_since = now

    def _decide_boarding(self, s: PassengerSim, stop: int, tau: float,
                         e_arr: int | None = None, exclude_trip: int = -1,
                         at_origin: bool = False,
                         extra_option=None) -> None:
        net, cfg = self.net, self.cfg
        st = s.state
        options = relevant_departures(s.profile, s.view, stop, tau,
                                      exclude_trip, e_arr, at_origin)
        if extra_option is not None and all(
                o.e_dep != extra_option.e_dep for o in options):
            options.append(extra_option)
            options.sort(key=lambda o: (o.cost, net.reg[o.e_dep], o.e_dep))
        res = boarding_decision(s.profile, s.view, cfg.choice, self.day,
                                stop, tau, s.rng, exclude_trip, e_arr,
                                at_origin, options)
        if res.kind == "walk":
            self._execute_walk(s, stop, tau)
            return
        if res.kind == "stranded":
            st.status = "stranded"
            st.stop = stop
            return
        opt = res.option
        dep_stop = net.ev_stop[opt.e_dep]
        min_time = 0
        if opt.walk > 0:
            st.stats.walk += cfg.prefs.beta_walk * opt.walk
            if st.in_fail:
                st.stats.denied_surcharge += \
                    (cfg.prefs.beta_fail - 1.0) * cfg.prefs.beta_walk * opt.walk
            min_time = int(opt.walk)
        elif not at_origin:
            min_time = net.stops[stop].mct
        st.status = "waiting"
        st.stop = dep_stop
        st.boarding = PendingBoarding(opt.e_dep, opt.cost, res.optimal,
                                      dep_stop, tau + min_time, opt.walk)
        st.waiting_since = tau + opt.walk
        self.waiting.setdefault(dep_stop, set()).add(s.pax.id)

    def _execute_walk(self, s: PassengerSim, stop: int, tau: float) -> None:
        st = s.state
        prefs = self.cfg.prefs
        if stop != s.pax.dest:
            length = self.net.foot_len[(stop, s.pax.dest)]
            st.stats.walk += prefs.beta_walk * length
            if st.in_fail:
                st.stats.denied_surcharge += \
                    (prefs.beta_fail - 1.0) * prefs.beta_walk * length
            st.legs.append(JourneyLeg("walk", (stop, s.pax.dest, length)))
        st.in_fail = False
        st.status = "done"
        st.stop = s.pax.dest
        st.stats.finished = True

    def _decide_alighting(self, s: PassengerSim, e_dep: int, view,
                          from_pos: int | None = None,
                          keep_current: int | None = None) -> bool:
        """Pick (or re-pick) the exit for the boarded trip; False if no exit
        survives and the passenger must ride to the end of the span."""
        net, cfg = self.net, self.cfg
        options = alight_options(s.profile, view, e_dep, from_pos)
        if keep_current is not None and all(
                o.e_arr != keep_current for o in options):
            seg = segment_cost(net, cfg.prefs, view, e_dep, keep_current)
            fa = s.profile.f.get(keep_current, INF)
            options.append(AlightOption(keep_current, seg + fa))
        res = alighting_decision(s.profile, view, cfg.choice, self.day,
                                 e_dep, s.rng, options)
        t = net.ev_trip[e_dep]
        if res is None:
            lo, hi = s.profile.spans[t]
            last = net.arc_to[net.trips[t].drive_arcs[hi]]
            s.state.alighting = PendingAlighting(last, INF, True, None, None,
                                                 e_dep)
            return False
        exp_arr = view.time(res.e_arr)
        _, onward = s.profile.best_onward(res.e_arr, exp_arr, view)
        s.state.alighting = PendingAlighting(res.e_arr, res.cost, res.optimal,
                                             onward, res.seat_pos, e_dep)
        return True

    # ------------------------------------------------- departure handling

    def _process_departure(self, day: int, e: int) -> list[int]:
        net, cfg = self.net, self.cfg
        t = net.ev_trip[e]
        trip = net.trips[t]
        pos = net.ev_pos[e]
        stop = net.ev_stop[e]
        now = net.cur[e]
        vehicle = self.vehicles.get(t)
        if vehicle is None:
            vehicle = VehicleState(t, trip.cap_sit, trip.cap)
            self.vehicles[t] = vehicle

        waiting_here = sorted(self.waiting.get(stop, ()))
        sims = self.by_id
        applicants: list[int] = []
        for pid in waiting_here:
            s = sims[pid]
            st = s.state
            pend = st.boarding
            if pend is None:
                continue
            if pend.e_dep == e:
                exp = s.view.time(e)
                if now > exp:
                    self._sync_profile(s)
                    extra = self._current_option(s, e, now, pend)
                    self.waiting[stop].discard(pid)
                    st.boarding = None
                    self.counters.hit("boarding_redo", True)
                    self._bank_wait(s, now)
                    self._decide_boarding(s, stop, now, exclude_trip=-1,
                                          at_origin=st.origin_leg,
                                          extra_option=extra)
                    if st.boarding is not None and st.boarding.e_dep == e:
                        applicants.append(pid)
                    continue
                applicants.append(pid)
            elif net.ev_trip[pend.e_dep] != t and now >= pend.ready_at:
                free = vehicle.onboard < vehicle.cap
                if boarding_switch_triggers(net, s.view, free, e, pend, now):
                    self._sync_profile(s)
                    between = not st.origin_leg
                    c_old = boarding_option_cost(s.profile, s.overlay,
                                                 pend.e_dep, now, between)
                    c_new = boarding_option_cost(s.profile, s.overlay, e,
                                                 now, between)
                    ok_old = c_old <= pend.cost
                    sw = switch_decision(c_old, c_new, pend.optimal, ok_old,
                                         cfg.choice, day, s.rng)
                    self.counters.hit("boarding_switch", sw)
                    if sw:
                        st.boarding = PendingBoarding(
                            e, c_new, c_new <= c_old, stop, pend.ready_at,
                            pend.walk)
                        applicants.append(pid)

        for pid in applicants:
            self.waiting[stop].discard(pid)
        self.attempts[e] = self.attempts.get(e, 0) + len(applicants)

        rng_v = stream(cfg.seed, "veh", day, e)
        onboard_before = list(self.onboard.get(t, ()))
        outcome = process_stop(vehicle, (), applicants, rng_v)

        # dwell contribution for passengers who rode through the stop
        q_alight = self.alight_count.pop(t, 0)
        if pos >= 1 and onboard_before:
            arr_prev = trip.events[2 * pos - 1]
            dwell_s = now - net.cur[arr_prev]
            lam_next = (vehicle.onboard / trip.cap_sit) if trip.cap_sit else 0.0
            for pid in onboard_before:
                s = sims[pid]
                fac = cfg.prefs.crowding.factor(lam_next, s.state.seated)
                s.state.stats.ivt += dwell_s
                s.state.stats.crowding += (fac - 1.0) * dwell_s
                if not s.state.seated:
                    s.state.stats.standing_time += dwell_s

        # promotions: seat found, possibly earlier than expected
        for pid in outcome.promoted:
            s = sims[pid]
            st = s.state
            st.seated = True
            pend = st.alighting
            if pend is not None and (pend.seat_pos is None or
                                     pend.seat_pos > pos):
                self._sync_profile(s)
                self.counters.hit("seat_redo", True)
                self._decide_alighting(s, pend.e_board, s.overlay,
                                       from_pos=pos,
                                       keep_current=pend.e_arr)

        seated_now = set(outcome.seated)
        for pid in outcome.boarded:
            s = sims[pid]
            st = s.state
            self._bank_wait(s, now)
            st.in_fail = False
            if not st.origin_leg:
                st.stats.transfer += cfg.prefs.beta_transfer
            st.origin_leg = False
            st.boarding = None
            st.status = "onboard"
            st.seated = pid in seated_now
            st.board_pos = pos
            self.onboard.setdefault(t, []).append(pid)
            st.legs.append(JourneyLeg("board", (t, pos)))
            self._decide_alighting(s, e, s.overlay)

        for pid in outcome.denied:
            s = sims[pid]
            st = s.state
            self._bank_wait(s, now)
            st.stats.n_denied += 1
            st.in_fail = True
            st.denied_deps.append(e)
            st.boarding = None
            self.denies[e] = self.denies.get(e, 0) + 1
            self._sync_profile(s)
            self._decide_boarding(s, stop, now, exclude_trip=t,
                                  at_origin=st.origin_leg)

        # loads on the departing arc (and the dwell arc behind it)
        if pos < len(trip.drive_arcs):
            a = trip.drive_arcs[pos]
            self.onboard_counts[a] = vehicle.onboard
            self.loads[a] = vehicle.onboard / trip.cap_sit if trip.cap_sit \
                else float(vehicle.onboard > 0) * INF
            d = trip.dwell_arcs[pos]
            if d is not None:
                self.loads[d] = self.loads[a]
                self.onboard_counts[d] = vehicle.onboard

        changed: list[int] = []
        if pos >= 1:
            arr_prev = trip.events[2 * pos - 1]
            scheduled = net.reg[e] - net.reg[arr_prev]
            delay = dwell_delay(q_alight, len(outcome.boarded),
                                trip.door_capacity, scheduled)
            if delay > 0:
                changed = propagate_delay(net, t, pos, delay)
                self.delay_log.extend(changed)
        return changed

    def _current_option(self, s: PassengerSim, e: int, now: float,
                        pend: PendingBoarding):
        """The delayed-but-present departure as an explicit option."""
        net, prefs = self.net, self.cfg.prefs
        fd = s.profile.f.get(e)
        if fd is None:
            return None
        cost = fd + net.headway(e) * prefs.beta_fail * \
            p_fail(s.view.p_denied(e), 0.0)
        if not s.state.origin_leg:
            cost += prefs.beta_transfer
        return BoardingOption(e, cost, 0.0, 0.0)

    # --------------------------------------------------- arrival handling

    def _process_arrival(self, day: int, e: int) -> None:
        net, cfg = self.net, self.cfg
        t = net.ev_trip[e]
        trip = net.trips[t]
        pos = net.ev_pos[e]
        now = net.cur[e]
        riders = self.onboard.get(t)
        if not riders:
            return
        sims = self.by_id

        # ride cost of the drive arc just completed
        a = trip.drive_arcs[pos - 1]
        dur = now - net.cur[net.arc_from[a]]
        lam = self.loads[a]
        for pid in riders:
            s = sims[pid]
            fac = cfg.prefs.crowding.factor(lam, s.state.seated)
            s.state.stats.ivt += dur
            s.state.stats.crowding += (fac - 1.0) * dur
            if not s.state.seated:
                s.state.stats.standing_time += dur

        alighters: list[int] = []
        for pid in list(riders):
            s = sims[pid]
            st = s.state
            pend = st.alighting
            if pend is None:
                continue
            if pend.e_arr == e:
                if not transfer_still_possible(net, e, pend.onward_opt, now):
                    self._sync_profile(s)
                    self.counters.hit("alighting_redo", True)
                    self._decide_alighting(s, pend.e_board, s.overlay,
                                           from_pos=pos, keep_current=e)
                    pend = st.alighting
                    if pend.e_arr != e:
                        continue
                alighters.append(pid)
            elif net.ev_pos[pend.e_arr] > pos:
                trig = False
                exp = s.view.time(e)
                if now < exp:
                    trig = True
                if not trig and pend.onward_opt is not None:
                    proj = projected_time(net, t, pos, now, pend.e_arr)
                    if not transfer_still_possible(net, pend.e_arr,
                                                   pend.onward_opt, proj):
                        trig = True
                if not trig and not st.seated and pend.seat_pos is not None \
                        and pend.seat_pos <= pos - 1:
                    trig = True
                if trig:
                    self._sync_profile(s)
                    c_exit, _ = s.profile.best_onward(e, now, s.overlay)
                    c_stay = self._stay_cost(s, t, pos, now)
                    proj = projected_time(net, t, pos, now, pend.e_arr)
                    still_ok = transfer_still_possible(net, pend.e_arr,
                                                       pend.onward_opt, proj)
                    sw = switch_decision(c_stay, c_exit, pend.optimal,
                                         still_ok, cfg.choice, day, s.rng)
                    self.counters.hit("alighting_switch", sw)
                    if sw:
                        alighters.append(pid)

        for pid in alighters:
            s = sims[pid]
            st = s.state
            riders.remove(pid)
            self.vehicles[t].seated.discard(pid)
            self.vehicles[t].standing.discard(pid)
            self.alight_count[t] = self.alight_count.get(t, 0) + 1
            # journey bookkeeping for learning
            h = st.board_pos
            st.journey_arcs.extend(trip.drive_arcs[h:pos])
            st.journey_events.extend(trip.events[2 * h:2 * pos])
            st.legs.append(JourneyLeg("alight", (t, pos)))
            st.alighting = None
            st.seated = False
            st.status = "waiting"
            st.stop = net.ev_stop[e]
            st.waiting_since = now
            self._decide_boarding(s, net.ev_stop[e], now, e_arr=e,
                                  exclude_trip=t)

    def _stay_cost(self, s: PassengerSim, t: int, pos: int, now: float) -> float:
        """Perceived cost of staying onboard to the chosen exit, with the
        current seating state, plus the onward continuation there."""
        net, prefs = self.net, self.cfg.prefs
        pend = s.state.alighting
        view = s.overlay
        trip = net.trips[t]
        j = net.ev_pos[pend.e_arr]
        seated = s.state.seated
        cost = 0.0
        time = now
        for m in range(pos, j):
            d = trip.dwell_arcs[m]
            ivt_d = max(0.0, view.time(net.arc_from[trip.drive_arcs[m]]) - time)
            lam_d = view.load(d) if d is not None else view.load(trip.drive_arcs[m])
            cost += prefs.crowding.factor(lam_d, seated) * ivt_d
            time += ivt_d
            a = trip.drive_arcs[m]
            if not seated and view.load(a) < 1.0:
                seated = True
            ivt_a = max(0.0, view.time(net.arc_to[a]) - time)
            cost += prefs.crowding.factor(view.load(a), seated) * ivt_a
            time += ivt_a
        onward, _ = s.profile.best_onward(pend.e_arr, time, view)
        return cost + onward

    # ----------------------------------------------------------- day end

    def _finish_day(self, day: int) -> None:
        net, cfg = self.net, self.cfg
        active = [s for s in self.sims if s.profile is not None]
        for s in active:
            st = s.state
            if st.status in ("waiting", "onboard", "stranded", "unstarted"):
                here = st.stop if st.stop >= 0 else s.pax.origin
                if st.status == "onboard" and st.alighting is not None:
                    # carried to the end of the span; treat the last passed
                    # arrival as the final position
                    here = net.ev_stop[st.alighting.e_arr]
                st.stats.unfinished = net.euclid(here, s.pax.dest)

        denied_share = {e: self.denies.get(e, 0) / n
                        for e, n in self.attempts.items() if n > 0}
        record = DayRecord(list(self.loads), denied_share, list(net.cur))

        def learn(s: PassengerSim):
            changes = end_of_day(net, s.store, cfg.kappa,
                                 s.state.journey_arcs, s.state.journey_events,
                                 s.state.denied_deps, record, s.view)
            seeds = s.profile.seeds_for(changes.arcs, changes.events,
                                        changes.p_denied, changes.samples)
            seeds |= s.rt_arcs
            s.rt_arcs = set()
            if seeds:
                s.profile.update(s.view, seeds)

        if cfg.threads > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
                list(ex.map(learn, active))
        else:
            for s in active:
                learn(s)

        stats = [s.state.stats for s in active]
        n = len(stats) or 1
        report = {
            "day": day,
            "passengers": len(stats),
            "mean_total": sum(x.total for x in stats) / n,
            "mean_ivt": sum(x.ivt for x in stats) / n,
            "mean_wait": sum(x.wait for x in stats) / n,
            "mean_walk": sum(x.walk for x in stats) / n,
            "mean_transfer": sum(x.transfer for x in stats) / n,
            "mean_crowding": sum(x.crowding for x in stats) / n,
            "mean_denied_surcharge": sum(x.denied_surcharge for x in stats) / n,
            "mean_unfinished": sum(x.unfinished for x in stats) / n,
            "denied_per_passenger": sum(x.n_denied for x in stats) / n,
            "mean_standing_time": sum(x.standing_time for x in stats) / n,
            "finished_share": sum(1 for x in stats if x.finished) / n,
        }
        self.day_reports.append(report)
        self.arc_load_history.append(list(self.loads))
        self.arc_onboard_history.append(list(self.onboard_counts))
        self.journey_log.append([
            {"passenger": s.pax.id, "origin": net.stops[s.pax.origin].id,
             "dest": net.stops[s.pax.dest].id, "start": s.pax.tau_start,
             "finished": s.state.stats.finished,
             "total": s.state.stats.total,
             "legs": [(leg.kind,) + leg.detail for leg in s.state.legs]}
            for s in active])


def run_simulation(net: Network, passengers: list[Passenger],
                   cfg: SimConfig) -> Simulation:
    sim = Simulation(net, passengers, cfg)
    sim.run()
    return sim
