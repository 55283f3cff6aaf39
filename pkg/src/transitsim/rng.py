"""Deterministic RNG streams keyed by (master seed, purpose, ids).

Every random draw in the simulation comes from a counter-keyed stream so the
outcome is independent of processing order and thread count.
"""
from __future__ import annotations

import zlib

import numpy as np


def _as_int(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & 0xFFFFFFFF
    return zlib.crc32(str(part).encode())


def stream(*key) -> np.random.Generator:
    """A fresh generator for the given key tuple."""
    return np.random.default_rng(np.random.SeedSequence([_as_int(p) for p in key]))
