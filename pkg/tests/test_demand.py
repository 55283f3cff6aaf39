import pytest
from hypothesis import given, strategies as st

from transitsim.demand import (CrowdingTable, OdEntry, Passenger,
                               PreferenceSet, generate)


def test_crowding_table_defaults():
    ct = CrowdingTable()
    # bucket edges are inclusive
    assert ct.factor(0.0, True) == 1.0
    assert ct.factor(0.6, True) == 1.0
    assert ct.factor(0.61, True) == 1.2
    assert ct.factor(1.0, True) == 1.2
    assert ct.factor(1.5, True) == 1.4
    assert ct.factor(2.0, True) == 1.4
    assert ct.factor(99.0, True) == 1.4
    for lam in (0.0, 0.9, 1.5, 3.0):
        assert ct.factor(lam, False) == 2.2


def test_crowding_table_validation():
    with pytest.raises(ValueError):
        CrowdingTable(bounds=(1.0, 0.5), seated=(1.0, 1.1), standing=(2.0, 2.0))
    with pytest.raises(ValueError):
        CrowdingTable(standing=(0.9, 0.9, 0.9))  # below seated
    with pytest.raises(ValueError):
        CrowdingTable(seated=(1.4, 1.2, 1.0))


@given(lam=st.floats(0, 10, allow_nan=False), seated=st.booleans())
def test_crowding_standing_dominates(lam, seated):
    ct = CrowdingTable()
    assert ct.factor(lam, False) >= ct.factor(lam, True) >= 1.0


def test_preference_validation():
    with pytest.raises(ValueError):
        PreferenceSet(beta_walk=-0.1)
    with pytest.raises(ValueError):
        OdEntry("A", "A", 1.0)
    with pytest.raises(ValueError):
        OdEntry("A", "B", -1.0)


def test_generate_counts_and_determinism(tiny_net):
    od = [OdEntry("A", "C", 6.0), OdEntry("B", "C", 3.0)]
    pax = generate(tiny_net, od, (0, 3600), seed=11)
    assert len(pax) == 9
    assert all(isinstance(p, Passenger) for p in pax)
    assert [p.id for p in pax] == list(range(9))
    assert all(0 <= p.tau_start < 3600 for p in pax)
    for a, b in zip(pax, pax[1:]):
        if a.origin == b.origin:
            assert a.tau_start <= b.tau_start
    again = generate(tiny_net, od, (0, 3600), seed=11)
    assert [(p.origin, p.dest, p.tau_start) for p in again] == \
           [(p.origin, p.dest, p.tau_start) for p in pax]
    other = generate(tiny_net, od, (0, 3600), seed=12)
    assert [(p.tau_start) for p in other] != [(p.tau_start) for p in pax]


def test_generate_fractional_rate_in_expectation(tiny_net):
    od = [OdEntry("A", "C", 0.5)]
    counts = [len(generate(tiny_net, od, (0, 3600), seed=s))
              for s in range(400)]
    assert set(counts) <= {0, 1}
    mean = sum(counts) / len(counts)
    assert 0.40 < mean < 0.60


def test_generate_half_hour_frame(tiny_net):
    od = [OdEntry("A", "C", 8.0)]
    pax = generate(tiny_net, od, (0, 1800), seed=3)
    assert len(pax) in (4, 5)
    assert all(p.tau_start < 1800 for p in pax)


def test_generate_rejects_unknown_stop(tiny_net):
    with pytest.raises(ValueError, match="unknown stop"):
        generate(tiny_net, [OdEntry("A", "Z", 1.0)], (0, 3600), seed=1)
