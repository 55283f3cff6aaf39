"""Demand expansion: OD matrix -> individual passenger agents, plus preference sets."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import rng as rngmod
from .network import Network


@dataclass(frozen=True)
class CrowdingTable:
    """Step-function crowding multiplier over seat-relative load.

    ``bounds[i]`` is the inclusive upper edge of bucket i; loads above the last
    bound use the last bucket.  Standing multipliers must dominate seated ones.
    """
    bounds: tuple[float, ...] = (0.6, 1.0, 2.0)
    seated: tuple[float, ...] = (1.0, 1.2, 1.4)
    standing: tuple[float, ...] = (2.2, 2.2, 2.2)

    def __post_init__(self):
        if not (len(self.bounds) == len(self.seated) == len(self.standing)):
            raise ValueError("crowding table rows must align")
        if list(self.bounds) != sorted(self.bounds):
            raise ValueError("crowding bounds must increase")
        for s, st in zip(self.seated, self.standing):
            if st < s:
                raise ValueError("standing factor must be >= seated factor")
        if list(self.seated) != sorted(self.seated) or list(self.standing) != sorted(self.standing):
            raise ValueError("crowding factors must be non-decreasing in load")

    def factor(self, load: float, seated: bool) -> float:
        row = self.seated if seated else self.standing
        for bound, value in zip(self.bounds, row):
            if load <= bound:
                return value
        return row[-1]


@dataclass(frozen=True)
class PreferenceSet:
    beta_wait: float = 1.0
    beta_walk: float = 1.5
    beta_transfer: float = 300.0
    beta_fail: float = 2.0
    beta_unfinished_scale: float = 1.0  # perceived seconds per meter of unfinished distance
    crowding: CrowdingTable = field(default_factory=CrowdingTable)

    def __post_init__(self):
        for name in ("beta_wait", "beta_walk", "beta_transfer", "beta_fail", "beta_unfinished_scale"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class OdEntry:
    origin: str
    dest: str
    rate: float  # passengers per hour

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("rate must be >= 0")
        if self.origin == self.dest:
            raise ValueError("origin and destination must differ")


@dataclass
class Passenger:
    id: int
    origin: int       # stop index
    dest: int
    tau_start: int
    prefs: PreferenceSet


def generate(net: Network, od: list[OdEntry], frame: tuple[int, int], seed: int,
             prefs: Optional[PreferenceSet] = None) -> list[Passenger]:
    """Expand OD rates into passengers with uniform start times in ``frame``.

    Counts use stochastic rounding of rate * hours (floor plus a Bernoulli draw
    on the fractional part), so fractional rates are honored in expectation.
    Deterministic for a fixed seed.
    """
    t0, t1 = frame
    if t1 <= t0:
        raise ValueError("frame must have positive length")
    prefs = prefs or PreferenceSet()
    gen = rngmod.stream(seed, "demand")
    passengers: list[Passenger] = []
    hours = (t1 - t0) / 3600.0
    for entry in od:
        if entry.origin not in net.stop_index or entry.dest not in net.stop_index:
            raise ValueError(f"od entry {entry.origin}->{entry.dest}: unknown stop")
        expected = entry.rate * hours
        count = int(expected)
        if gen.random() < expected - count:
            count += 1
        origin = net.stop_index[entry.origin]
        dest = net.stop_index[entry.dest]
        for start in sorted(gen.integers(t0, t1, size=count).tolist()):
            passengers.append(Passenger(id=len(passengers), origin=origin,
                                        dest=dest, tau_start=int(start), prefs=prefs))
    return passengers
