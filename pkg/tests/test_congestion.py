import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import line_trip
from transitsim.congestion import (BoardingOutcome, VehicleState, dwell_delay,
                                   process_stop, propagate_delay)
from transitsim.network import Footpath, Network, Stop


def test_process_stop_basic_boarding():
    v = VehicleState(0, cap_sit=2, cap=4)
    out = process_stop(v, (), [10, 11, 12], np.random.default_rng(0))
    assert sorted(out.boarded) == [10, 11, 12]
    assert not out.denied
    assert len(v.seated) == 2 and len(v.standing) == 1


def test_process_stop_denial_and_promotion():
    v = VehicleState(0, cap_sit=1, cap=2, seated={1}, standing={2})
    out = process_stop(v, alighting=[1], applicants=[3, 4],
                       rng=np.random.default_rng(0))
    # passenger 2 takes the freed seat, one applicant boards, one is denied
    assert out.promoted == [2]
    assert len(out.boarded) == 1 and len(out.denied) == 1
    assert v.onboard == 2 and len(v.seated) == 1


def test_vehicle_check_raises():
    v = VehicleState(0, cap_sit=1, cap=1, seated={1, 2})
    with pytest.raises(AssertionError, match="capacity violated"):
        v.check()


@given(cap_sit=st.integers(0, 10), extra=st.integers(0, 10),
       seated0=st.integers(0, 10), standing0=st.integers(0, 10),
       n_alight=st.integers(0, 10), n_apply=st.integers(0, 15),
       seed=st.integers(0, 1000))
@settings(max_examples=300, deadline=None)
def test_process_stop_never_violates_capacity(cap_sit, extra, seated0,
                                              standing0, n_alight, n_apply,
                                              seed):
    cap = cap_sit + extra
    seated = set(range(min(seated0, cap_sit)))
    standing = set(range(100, 100 + standing0))
    while len(seated) + len(standing) > cap:
        standing.pop()
    onboard = seated | standing
    v = VehicleState(0, cap_sit, cap, set(seated), set(standing))
    alighting = sorted(onboard)[:n_alight]
    applicants = list(range(200, 200 + n_apply))
    out = process_stop(v, alighting, applicants, np.random.default_rng(seed))
    assert len(v.seated) <= cap_sit
    assert v.onboard <= cap
    assert sorted(out.boarded + out.denied) == applicants
    assert set(out.boarded) <= v.seated | v.standing
    assert not (set(alighting) & (v.seated | v.standing))
    assert set(out.promoted) <= v.seated


def test_dwell_delay_examples():
    # 20 movements through 0.4 pax/s doors need 50 s; 30 scheduled -> 20 extra
    assert dwell_delay(12, 8, 0.4, 30) == 20
    assert dwell_delay(0, 0, 0.4, 30) == 0
    assert dwell_delay(5, 5, 1.0, 10) == 0
    assert dwell_delay(5, 6, 1.0, 10) == 1
    with pytest.raises(ValueError):
        dwell_delay(-1, 0, 0.4, 30)
    with pytest.raises(ValueError):
        dwell_delay(1, 0, 0.0, 30)


@given(qa=st.integers(0, 500), qb=st.integers(0, 500),
       door=st.floats(0.1, 20.0), sched=st.integers(0, 300))
@settings(max_examples=300, deadline=None)
def test_dwell_delay_is_minimal_sufficient(qa, qb, door, sched):
    delay = dwell_delay(qa, qb, door, sched)
    assert delay >= 0
    assert delay == max(0, math.ceil((qa + qb) / door) - sched)
    # the granted time suffices for all movements
    assert (sched + delay) * door >= (qa + qb) - 1e-6 * (qa + qb)


def _delay_net():
    stops = [Stop(s, s, i * 1000.0, 0.0, 30) for i, s in
             enumerate(["A", "B", "C", "D"])]
    t1 = line_trip("t1", "L1", ["A", "B", "C", "D"], 100, drive=300,
                   dwell=60, min_drive=240, min_dwell=30)
    t2 = line_trip("t2", "L2", ["A", "B"], 2000, drive=300)
    from transitsim.network import DependencyArc
    return Network.build(stops, [t1, t2],
                         dependencies=[DependencyArc("t1", "t2", 200)])


def test_propagate_delay_with_recovery():
    net = _delay_net()
    t1 = net.trips[net.trip_index["t1"]]
    # schedule: dep0 100, arr1 400, dep1 460, arr2 760, dep2 820, arr3 1120
    changed = propagate_delay(net, t1.idx, 1, 100)
    assert net.cur[t1.events[2]] == 560          # dep1 pushed by 100
    assert net.cur[t1.events[3]] == 800          # drives in 240, recovers 60
    assert net.cur[t1.events[4]] == 830          # dwell 30 min, recovers more
    assert net.cur[t1.events[5]] == 1120         # fully recovered
    assert set(changed) == {t1.events[2], t1.events[3], t1.events[4]}


def test_propagate_delay_never_moves_earlier():
    net = _delay_net()
    t1 = net.trips[net.trip_index["t1"]]
    propagate_delay(net, t1.idx, 1, 100)
    snapshot = list(net.cur)
    propagate_delay(net, t1.idx, 0, 50)
    for e in range(len(net.cur)):
        assert net.cur[e] >= snapshot[e]
        assert net.cur[e] >= net.reg[e]


def test_propagate_delay_dependency():
    net = _delay_net()
    t1 = net.trips[net.trip_index["t1"]]
    t2 = net.trips[net.trip_index["t2"]]
    # no recovery slack used: huge delay at the start
    changed = propagate_delay(net, t1.idx, 0, 2000)
    final = net.cur[t1.events[-1]]
    assert final > net.reg[t1.events[-1]]
    # successor trip must wait for arrival + turnaround
    assert net.cur[t2.events[0]] == final + 200
    assert t2.events[0] in changed


def test_propagate_zero_delay_is_noop():
    net = _delay_net()
    snapshot = list(net.cur)
    assert propagate_delay(net, 0, 1, 0) == []
    assert net.cur == snapshot
