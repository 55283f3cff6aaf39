import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
ROOT = TESTS_DIR.parent
sys.path.insert(0, str(TESTS_DIR))
sys.path.insert(0, str(ROOT / "scripts"))

from transitsim.network import Footpath, Network, Stop, StopTime, TripSpec  # noqa: E402


@pytest.fixture
def fixtures_dir() -> Path:
    return ROOT / "fixtures"


def line_trip(trip_id: str, line: str, stops: list[str], start: int,
              drive: int = 300, dwell: int = 60, cap_sit: int = 40,
              cap: int = 80, door: float = 2.0,
              min_drive: int | None = None,
              min_dwell: int | None = None) -> TripSpec:
    """A trip visiting ``stops`` with uniform drive and dwell times."""
    sts = []
    t = start
    n = len(stops)
    for k, s in enumerate(stops):
        arr = t
        dep = arr if k in (0, n - 1) else arr + dwell
        sts.append(StopTime(stop=s, arr=arr, dep=dep,
                            min_drive=None if k == 0 else min_drive,
                            min_dwell=None if k in (0, n - 1) else min_dwell))
        t = dep + drive
    return TripSpec(trip_id, line, cap_sit, cap, door, tuple(sts))


@pytest.fixture
def tiny_net() -> Network:
    """Three stops on one line plus an express and a footpath.

    Line X: A -0-> B -1-> C (dwell 60 at B), two runs 600 apart.
    Line Y: B -> C direct, faster.
    Footpath A -> C (900 s) and B <-> A (120 s).
    """
    stops = [Stop("A", "A", 0, 0, 60), Stop("B", "B", 1000, 0, 30),
             Stop("C", "C", 2000, 0, 60)]
    trips = [
        line_trip("x1", "X", ["A", "B", "C"], 300, min_drive=240, min_dwell=30),
        line_trip("x2", "X", ["A", "B", "C"], 900, min_drive=240, min_dwell=30),
        line_trip("y1", "Y", ["B", "C"], 800, drive=200),
    ]
    foot = [Footpath("A", "C", 900), Footpath("A", "B", 120),
            Footpath("B", "A", 120)]
    return Network.build(stops, trips, foot)
