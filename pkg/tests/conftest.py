"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from bflottery.bpa import Bpa
from bflottery.frames import Frame


def random_bpa(rng: random.Random, frame, max_focal: int = 4) -> Bpa:
    """A BPA with up to ``max_focal`` random focal sets and random masses."""
    n_subsets = (1 << frame.size) - 1
    count = rng.randint(1, min(max_focal, n_subsets))
    bits = rng.sample(range(1, n_subsets + 1), count)
    weights = [rng.random() + 1e-3 for _ in bits]
    total = sum(weights)
    return Bpa(frame, {b: w / total for b, w in zip(bits, weights)})


def to_naive(m: Bpa) -> dict:
    """Convert to the frozenset-keyed dict shape the oracles work on."""
    return {frozenset(s.members()): mass for s, mass in m.focal()}


def small_frame(n: int, id: str = "S") -> Frame:
    return Frame(id, tuple("abcdefgh"[:n]))
