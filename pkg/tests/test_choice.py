import math

import numpy as np
import pytest

from oracle import random_network
from transitsim.choice import (ChoiceParams, alight_options,
                               alighting_decision, boarding_decision,
                               reachable_universe, reduce_choice_set,
                               relevant_departures, softmax_select)
from transitsim.demand import PreferenceSet
from transitsim.ptt import INF, DefaultView, Profile

PREFS = PreferenceSet()


def full_spans(net):
    return {t.idx: (0, len(t.drive_arcs) - 1) for t in net.trips}


def test_choice_params_validation():
    with pytest.raises(ValueError):
        ChoiceParams(gamma=0.0)
    with pytest.raises(ValueError):
        ChoiceParams(epsilon=1.5)
    p = ChoiceParams(gamma=100.0, gamma_schedule=(500.0, 400.0))
    assert p.gamma_for_day(1) == 500.0
    assert p.gamma_for_day(2) == 400.0
    assert p.gamma_for_day(3) == 100.0


def test_softmax_select_edges():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        softmax_select([], 100.0, 0.2, rng)
    # epsilon 0: always the cheapest
    for _ in range(50):
        assert softmax_select([30.0, 10.0, 20.0], 100.0, 0.0, rng) == 1


def test_softmax_select_distribution():
    costs = [0.0, 100.0, 300.0]
    gamma, eps, n = 100.0, 1.0, 40_000
    rng = np.random.default_rng(7)
    counts = [0, 0, 0]
    for _ in range(n):
        counts[softmax_select(costs, gamma, eps, rng)] += 1
    w = [math.exp(-c / gamma) for c in costs]
    z = sum(w)
    for k in range(3):
        assert counts[k] / n == pytest.approx(w[k] / z, abs=0.02)


def test_relevant_departures(tiny_net):
    net = tiny_net
    dest = net.stop_index["C"]
    prof = Profile(net, PREFS, dest, full_spans(net))
    view = DefaultView(net)
    prof.full_recompute(view)
    b = net.stop_index["B"]
    opts = relevant_departures(prof, view, b, 500.0, at_origin=True)
    # one option per line, earliest run of each
    lines = [net.trips[net.ev_trip[o.e_dep]].line_idx for o in opts]
    assert len(lines) == len(set(lines)) == 2
    for o in opts:
        expected = (prof.f[o.e_dep] + PREFS.beta_wait * o.wait
                    + PREFS.beta_walk * o.walk)
        assert o.cost == pytest.approx(expected)
    # at a transfer, mct delays the earliest option and the penalty applies
    opts_tr = relevant_departures(prof, view, b, 500.0, at_origin=False)
    for o in opts_tr:
        assert net.reg[o.e_dep] >= 500.0 + net.stops[b].mct or o.walk > 0
        assert o.cost >= PREFS.beta_transfer


def test_boarding_decision_walk_and_stranded(tiny_net):
    net = tiny_net
    params = ChoiceParams(epsilon=0.0)
    rng = np.random.default_rng(1)
    view = DefaultView(net)
    # from A the footpath to C is the only option after the last departure
    prof = Profile(net, PREFS, net.stop_index["C"], full_spans(net))
    prof.full_recompute(view)
    res = boarding_decision(prof, view, params, 1, net.stop_index["A"],
                            5000.0, rng, at_origin=True)
    assert res.kind == "walk"
    # from B (no footpath to C) after the last departure: stranded
    res = boarding_decision(prof, view, params, 1, net.stop_index["B"],
                            5000.0, rng, at_origin=True)
    assert res.kind == "stranded"


def test_boarding_decision_prefers_cheapest(tiny_net):
    net = tiny_net
    params = ChoiceParams(epsilon=0.0)
    rng = np.random.default_rng(1)
    view = DefaultView(net)
    prof = Profile(net, PREFS, net.stop_index["C"], full_spans(net))
    prof.full_recompute(view)
    res = boarding_decision(prof, view, params, 1, net.stop_index["A"],
                            100.0, rng, at_origin=True)
    assert res.kind == "board" and res.optimal
    opts = relevant_departures(prof, view, net.stop_index["A"], 100.0,
                               at_origin=True)
    assert res.option.e_dep == opts[0].e_dep


def test_alight_options_and_decision(tiny_net):
    net = tiny_net
    view = DefaultView(net)
    prof = Profile(net, PREFS, net.stop_index["C"], full_spans(net))
    prof.full_recompute(view)
    x1 = net.trips[net.trip_index["x1"]]
    opts = alight_options(prof, view, x1.events[0])
    assert [net.ev_pos[o.e_arr] for o in opts] == [1, 2]
    res = alighting_decision(prof, view, ChoiceParams(epsilon=0.0), 1,
                             x1.events[0], np.random.default_rng(0), opts)
    assert res.optimal
    # default load 0.5 < 1: a seat is expected immediately
    assert res.seat_pos == 0


def test_reachable_universe(tiny_net):
    net = tiny_net
    a, b, c = (net.stop_index[s] for s in "ABC")
    uni = reachable_universe(net, a, 100.0, c, 3600.0)
    assert uni is not None
    spans, horizon = uni
    x1 = net.trip_index["x1"]
    y1 = net.trip_index["y1"]
    assert spans[x1] == (0, 1)
    # y1 reachable over the arrival at B (600 + mct 30 <= 800)
    assert spans[y1] == (0, 0)
    # earliest real arrival at C is 960 over x1
    assert horizon == 960.0 + 3600.0
    # starting too late for every trip: only the footpath remains
    uni2 = reachable_universe(net, a, 5000.0, c, 3600.0)
    spans2, horizon2 = uni2
    assert spans2 == {}
    assert horizon2 == 5000.0 + 900 + 3600.0
    # B has no footpath to C and no trips that late
    assert reachable_universe(net, b, 5000.0, c, 3600.0) is None


def test_reachable_universe_respects_board_ok(tiny_net):
    net = tiny_net
    a, c = net.stop_index["A"], net.stop_index["C"]
    x1 = net.trips[net.trip_index["x1"]]
    uni = reachable_universe(net, a, 100.0, c, 3600.0,
                             board_ok={x1.events[0]})
    spans, _ = uni
    assert net.trip_index["x2"] not in spans


def test_reduction_preserves_the_optimum():
    for seed in range(15):
        rng = np.random.default_rng(7000 + seed)
        net = random_network(rng)
        dest = int(rng.integers(len(net.stops)))
        view = DefaultView(net)
        base = Profile(net, PREFS, dest, full_spans(net))
        base.full_recompute(view)
        red = reduce_choice_set(base, view)
        prof = Profile(net, PREFS, dest, full_spans(net),
                       board_ok=red.board_ok, exit_ok=red.exit_ok,
                       foot_blocked=red.foot_blocked)
        prof.full_recompute(view)
        assert red.board_ok <= set(base.f)
        assert red.exit_ok <= set(base.f)
        for origin in range(len(net.stops)):
            full_opts = relevant_departures(base, view, origin, 0.0,
                                            at_origin=True)
            red_opts = relevant_departures(prof, view, origin, 0.0,
                                           at_origin=True)
            best_full = full_opts[0].cost if full_opts else INF
            best_red = red_opts[0].cost if red_opts else INF
            if best_full == INF:
                assert best_red == INF
            else:
                assert best_red == pytest.approx(best_full, rel=1e-9)
