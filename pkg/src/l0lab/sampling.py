"""Seeded samplers over rational grids.

Every randomized check draws from a :class:`Sampler`; sub-samplers get their
seed from a SHA-256 of ``(seed, label)`` so results do not depend on the
order in which checks run or on Python's salted ``hash``.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction

from .l0_core import RandomVar
from .prob_space import AtomSpace, Event, Partition, make_partition

DENOMINATORS = (1, 2, 3, 4, 5, 8)
# explicit prefix length used for random variables on countable spaces
MAX_SAMPLE_PREFIX = 8


def derive_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class Sampler:
    def __init__(self, seed: int):
        self.seed = seed
        self.rng = random.Random(seed)

    def split(self, label: str) -> "Sampler":
        return Sampler(derive_seed(self.seed, label))

    def integer(self, lo: int, hi: int) -> int:
        return self.rng.randint(lo, hi)

    def choice(self, seq):
        return seq[self.rng.randrange(len(seq))]

    def rational(self, lo=-4, hi=4) -> Fraction:
        """A rational in [lo, hi] with a small denominator."""
        lo, hi = Fraction(lo), Fraction(hi)
        d = self.choice(DENOMINATORS)
        a, b = -((-lo * d) // 1), (hi * d) // 1
        return Fraction(self.rng.randint(int(a), int(b)), d)

    def positive(self, lo=Fraction(1, 8), hi=4) -> Fraction:
        lo = Fraction(lo)
        while True:
            v = self.rational(lo, hi)
            if v > 0:
                return v

    def _depth(self, space: AtomSpace) -> int:
        return self.integer(0, min(space.truncation, MAX_SAMPLE_PREFIX))

    def rv(self, space: AtomSpace, draw=None) -> RandomVar:
        """A random variable whose atom values come from ``draw()``
        (default: rationals in [-4, 4])."""
        draw = draw or self.rational
        if space.is_finite:
            return RandomVar(space, tuple(draw() for _ in range(space.n_atoms)))
        return RandomVar(space, tuple(draw() for _ in range(self._depth(space))), draw())

    def positive_rv(self, space, lo=Fraction(1, 8), hi=4) -> RandomVar:
        return self.rv(space, lambda: self.positive(lo, hi))

    def nonneg_rv(self, space, hi=4) -> RandomVar:
        return self.rv(space, lambda: self.rational(0, hi))

    def unit_rv(self, space) -> RandomVar:
        """0 <= Y <= 1."""
        return self.rv(space, lambda: self.rational(0, 1))

    def signed_unit_rv(self, space) -> RandomVar:
        """|Y| <= 1."""
        return self.rv(space, lambda: self.rational(-1, 1))

    def event(self, space: AtomSpace) -> Event:
        depth = space.n_atoms if space.is_finite else self.integer(1, min(space.truncation, MAX_SAMPLE_PREFIX))
        atoms = frozenset(i for i in range(1, depth + 1) if self.rng.random() < 0.5)
        cofinite = (not space.is_finite) and self.rng.random() < 0.5
        return Event(atoms, cofinite)

    def partition(self, space: AtomSpace, max_parts: int = 4) -> Partition:
        """A random finite partition; on a countable space exactly one part
        is cofinite."""
        depth = space.n_atoms if space.is_finite else self.integer(1, min(space.truncation, MAX_SAMPLE_PREFIX))
        k = self.integer(1, max_parts)
        labels = [self.rng.randrange(k) for _ in range(depth)]
        used = sorted(set(labels))
        if space.is_finite:
            events = [Event(frozenset(i + 1 for i, l in enumerate(labels) if l == u)) for u in used]
        else:
            tail_label = self.rng.randrange(k)
            events = []
            for u in sorted(set(used) | {tail_label}):
                mine = frozenset(i + 1 for i, l in enumerate(labels) if l == u)
                if u == tail_label:
                    events.append(Event(frozenset(range(1, depth + 1)) - mine, True))
                else:
                    events.append(Event(mine))
        return make_partition(space, events)
