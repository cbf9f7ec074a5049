"""Degenerate sets that exist only to give the predicates failing inputs.

Kept out of :mod:`l0lab.sets_gauge` on purpose; nothing in the library
constructs them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .l0_core import RandomVar
from .prob_space import AtomSpace
from .sampling import Sampler
from .sets_gauge import L0Set


@dataclass(frozen=True)
class ZeroSet(L0Set):
    """{0}: absorbs nothing nonzero."""

    on: AtomSpace

    @property
    def space(self):
        return self.on

    def member(self, x):
        self._check(x)
        return x.is_zero()

    def atom_embeds(self, i, v):
        return v == 0

    def sample_member(self, smp: Sampler):
        return RandomVar.constant(self.on, 0)

    def __str__(self):
        return "zero"


@dataclass(frozen=True)
class TwoPointSet(L0Set):
    """{-1, 1} (constants): not convex, since the midpoint 0 escapes."""

    on: AtomSpace

    @property
    def space(self):
        return self.on

    def member(self, x):
        self._check(x)
        return x == RandomVar.constant(self.on, 1) or x == RandomVar.constant(self.on, -1)

    def atom_embeds(self, i, v):
        return v in (1, -1)

    def sample_member(self, smp: Sampler):
        return RandomVar.constant(self.on, smp.choice((1, -1)))

    def __str__(self):
        return "twopoint"


@dataclass(frozen=True)
class TranslatedSet(L0Set):
    """center + inner.  With a ball of radius < 1 around 1 it misses 0."""

    center: RandomVar
    inner: L0Set

    @property
    def space(self):
        return self.inner.space

    def member(self, x):
        self._check(x)
        return self.inner.member(x - self.center)

    def atom_embeds(self, i, v):
        return self.inner.atom_embeds(i, v - self.center.at(i))

    def sample_member(self, smp: Sampler):
        return self.center + self.inner.sample_member(smp)

    def __str__(self):
        return f"translated:{self.center}+({self.inner})"


def translated_ball(space: AtomSpace, eps=Fraction(1, 2)) -> TranslatedSet:
    from .seminorms import AbsValue, Ball
    from .sets_gauge import BallSet

    inner = BallSet(Ball((AbsValue(),), RandomVar.constant(space, eps)))
    return TranslatedSet(RandomVar.constant(space, 1), inner)
