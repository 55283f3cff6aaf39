import pytest

from conftest import line_trip
from transitsim.network import (ARRIVAL, DEPARTURE, DRIVING, DWELLING,
                                Footpath, Network, NetworkError, Stop)


def test_event_and_arc_layout(tiny_net):
    net = tiny_net
    x1 = net.trips[net.trip_index["x1"]]
    # events: dep0, arr1, dep1, arr2
    kinds = [net.ev_kind[e] for e in x1.events]
    assert kinds == [DEPARTURE, ARRIVAL, DEPARTURE, ARRIVAL]
    assert [net.reg[e] for e in x1.events] == [300, 600, 660, 960]
    assert len(x1.drive_arcs) == 2
    assert x1.dwell_arcs[0] is None and x1.dwell_arcs[-1] is None
    d = x1.dwell_arcs[1]
    assert net.arc_kind[d] == DWELLING
    assert net.arc_from[d] == x1.events[1] and net.arc_to[d] == x1.events[2]
    for i, a in enumerate(x1.drive_arcs):
        assert net.arc_kind[a] == DRIVING
        assert net.arc_pos[a] == i
        assert net.ev_pos[net.arc_from[a]] == i
        assert net.ev_pos[net.arc_to[a]] == i + 1


def test_min_durations(tiny_net):
    net = tiny_net
    x1 = net.trips[net.trip_index["x1"]]
    assert net.arc_ivt_min[x1.drive_arcs[0]] == 240
    assert net.arc_ivt_min[x1.dwell_arcs[1]] == 30
    y1 = net.trips[net.trip_index["y1"]]
    # None means no catch-up potential: minimum equals the schedule
    assert net.arc_ivt_min[y1.drive_arcs[0]] == 200


def test_headways(tiny_net):
    net = tiny_net
    x1 = net.trips[net.trip_index["x1"]]
    x2 = net.trips[net.trip_index["x2"]]
    y1 = net.trips[net.trip_index["y1"]]
    for e1, e2 in zip(x1.events, x2.events):
        assert net.headway(e1) == net.reg[e2] - net.reg[e1] == 600
    # last trip of the line: mean first-departure gap
    assert all(net.headway(e) == 600 for e in x2.events)
    # single-trip line: config default
    assert all(net.headway(e) == 3600 for e in y1.events)


def test_transfers(tiny_net):
    net = tiny_net
    x1 = net.trips[net.trip_index["x1"]]
    y1 = net.trips[net.trip_index["y1"]]
    arr_b = x1.events[1]           # arrival at B at 600
    dep_y = y1.events[0]           # departure at B at 800
    assert net.min_transfer_time(arr_b, dep_y) == 30
    assert net.transfer_valid(arr_b, dep_y)
    # same trip never transfers to itself
    assert not net.transfer_valid(arr_b, x1.events[2])
    # footpath B -> A exists, A -> C has no return
    a, b, c = 0, 1, 2
    assert net.foot_len[(b, a)] == 120
    assert (c, a) not in net.foot_len
    walk, wait = net.transfer_times(arr_b, dest_stop=b)
    assert (walk, wait) == (0, 0)


def test_dep_events_between(tiny_net):
    net = tiny_net
    a = net.stop_index["A"]
    evs = net.dep_events_between(a, 300, 900)
    assert [net.reg[e] for e in evs] == [300, 900]
    assert net.dep_events_between(a, 301, 899) == []


def test_reset_day(tiny_net):
    net = tiny_net
    net.cur[0] += 55
    net.reset_day()
    assert net.cur == net.reg


def test_validation_collects_all_errors():
    stops = [Stop("A", "A", 0, 0, 60), Stop("A", "A2", 1, 1, 60),
             Stop("B", "B", 1000, 0, -5)]
    trips = [line_trip("t1", "L", ["A", "B"], 100, cap_sit=50, cap=10)]
    foot = [Footpath("A", "Z", 100), Footpath("A", "B", 99999)]
    with pytest.raises(NetworkError) as exc:
        Network.build(stops, trips, foot)
    msgs = exc.value.messages
    assert len(msgs) >= 4
    assert any("duplicate id" in m for m in msgs)
    assert any("mct" in m for m in msgs)
    assert any("cap" in m for m in msgs)
    assert any("unknown stop" in m for m in msgs)
    assert any("outside" in m for m in msgs)


def test_validation_overtaking_and_order():
    stops = [Stop("A", "A", 0, 0, 60), Stop("B", "B", 1000, 0, 60)]
    t1 = line_trip("t1", "L", ["A", "B"], 100, drive=300)
    t2 = line_trip("t2", "L", ["A", "B"], 200, drive=100)  # arrives first
    with pytest.raises(NetworkError, match="overtaken"):
        Network.build(stops, [t1, t2])
