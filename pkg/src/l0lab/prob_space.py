"""Atomic probability spaces, events and countable partitions.

Atoms are numbered from 1.  Every atom carries strictly positive mass, so
almost-sure statements reduce to statements about each atom.  Two kinds of
space exist: a finite space with explicit probabilities, and the countable
space whose n-th atom has probability 2**-n.  Events live in the
finite/cofinite algebra generated by the atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidAtomIndex, NonPositiveProb, PartitionMismatch, ProbSumNotOne

DEFAULT_TRUNCATION = 64


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class AtomSpace:
    """A finite or geometric-countable atomic probability space.

    ``probs`` is the tuple of atom probabilities for a finite space and
    ``None`` for the geometric space.  ``truncation`` is the explicit-prefix
    depth used when a computation has to walk atoms one by one.
    """

    probs: tuple[Fraction, ...] | None
    truncation: int = DEFAULT_TRUNCATION

    @property
    def is_finite(self) -> bool:
        return self.probs is not None

    @property
    def n_atoms(self) -> int | None:
        return None if self.probs is None else len(self.probs)

    def prob(self, i: int) -> Fraction:
        self.check_atom(i)
        if self.probs is None:
            return Fraction(1, 2**i)
        return self.probs[i - 1]

    def check_atom(self, i: int) -> None:
        if not isinstance(i, int) or i < 1:
            raise InvalidAtomIndex(f"atom index must be a positive integer, got {i!r}")
        if self.probs is not None and i > len(self.probs):
            raise InvalidAtomIndex(f"atom {i} out of range for a {len(self.probs)}-atom space")

    def explicit_atoms(self, depth: int | None = None) -> range:
        """Atoms that are walked one by one: all of them when finite."""
        if self.probs is not None:
            return range(1, len(self.probs) + 1)
        return range(1, (self.truncation if depth is None else depth) + 1)

    def prefix_mass(self, n: int) -> Fraction:
        if self.probs is not None:
            return sum(self.probs[:n], Fraction(0))
        return 1 - Fraction(1, 2**n)

    def __str__(self) -> str:
        if self.probs is None:
            return f"geometric:N={self.truncation}"
        return "finite:" + ",".join(str(p) for p in self.probs)


def make_finite_space(probs: Iterable, truncation: int | None = None) -> AtomSpace:
    ps = tuple(as_fraction(p) for p in probs)
    if not ps:
        raise ProbSumNotOne("a probability space needs at least one atom")
    for p in ps:
        if p <= 0:
            raise NonPositiveProb(f"atom probability {p} is not positive")
    total = sum(ps, Fraction(0))
    if total != 1:
        raise ProbSumNotOne(f"atom probabilities sum to {total}, not 1")
    return AtomSpace(ps, len(ps) if truncation is None else truncation)


def make_geometric_space(truncation: int = DEFAULT_TRUNCATION) -> AtomSpace:
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    return AtomSpace(None, truncation)


@dataclass(frozen=True)
class Event:
    """A finite set of atoms, or the complement of one (``cofinite=True``)."""

    atoms: frozenset[int]
    cofinite: bool = False

    @classmethod
    def finite_set(cls, *atoms: int) -> "Event":
        return cls(frozenset(atoms), False)

    @classmethod
    def cofinite_set(cls, *excluded: int) -> "Event":
        return cls(frozenset(excluded), True)

    @classmethod
    def omega(cls) -> "Event":
        return cls(frozenset(), True)

    @classmethod
    def empty(cls) -> "Event":
        return cls(frozenset(), False)

    def __contains__(self, i: int) -> bool:
        return (i in self.atoms) != self.cofinite

    def complement(self) -> "Event":
        return Event(self.atoms, not self.cofinite)

    def union(self, other: "Event") -> "Event":
        if not self.cofinite and not other.cofinite:
            return Event(self.atoms | other.atoms)
        if self.cofinite and other.cofinite:
            return Event(self.atoms & other.atoms, True)
        fin, cof = (self, other) if other.cofinite else (other, self)
        return Event(cof.atoms - fin.atoms, True)

    def intersection(self, other: "Event") -> "Event":
        return self.complement().union(other.complement()).complement()

    @property
    def max_index(self) -> int:
        return max(self.atoms, default=0)

    def __str__(self) -> str:
        inner = ",".join(str(i) for i in sorted(self.atoms))
        return f"cofinite{{{inner}}}" if self.cofinite else f"{{{inner}}}"


def check_event(space: AtomSpace, e: Event) -> None:
    for i in e.atoms:
        space.check_atom(i)


def event_prob(space: AtomSpace, e: Event) -> Fraction:
    check_event(space, e)
    mass = sum((space.prob(i) for i in e.atoms), Fraction(0))
    return 1 - mass if e.cofinite else mass


def is_null(space: AtomSpace, e: Event) -> bool:
    return event_prob(space, e) == 0


def normalize_event(space: AtomSpace, e: Event) -> Event:
    """On finite spaces rewrite a cofinite event as the explicit atom set."""
    check_event(space, e)
    if space.is_finite and e.cofinite:
        return Event(frozenset(i for i in space.explicit_atoms() if i not in e.atoms))
    return e


@dataclass(frozen=True)
class Partition:
    """A finite list of events partitioning the space, or the canonical
    singleton partition {A_n} of a countable space (``parts is None``)."""

    space: AtomSpace
    parts: tuple[Event, ...] | None

    @property
    def canonical(self) -> bool:
        return self.parts is None

    def part_of(self, i: int) -> int:
        """Index (0-based for finite lists, atom number for canonical) of the
        part containing atom ``i``."""
        if self.parts is None:
            return i
        for k, e in enumerate(self.parts):
            if i in e:
                return k
        raise PartitionMismatch(f"atom {i} lies in no part")

    def tail_part(self) -> int:
        """The part that contains all atoms beyond every explicit index."""
        if self.parts is None:
            raise PartitionMismatch("the canonical partition has no tail part")
        for k, e in enumerate(self.parts):
            if e.cofinite:
                return k
        raise PartitionMismatch("no cofinite part covers the tail")

    def __len__(self) -> int:
        if self.parts is None:
            raise TypeError("the canonical partition of a countable space is infinite")
        return len(self.parts)


def make_partition(space: AtomSpace, events: Sequence[Event]) -> Partition:
    events = tuple(normalize_event(space, e) for e in events)
    for a in range(len(events)):
        for b in range(a + 1, len(events)):
            if not is_null(space, events[a].intersection(events[b])):
                raise PartitionMismatch(f"parts {a} and {b} overlap")
    union = Event.empty()
    for e in events:
        union = union.union(e)
    if event_prob(space, union) != 1:
        raise PartitionMismatch("parts do not cover the space")
    return Partition(space, events)


def canonical_partition(space: AtomSpace) -> Partition:
    if space.is_finite:
        return Partition(space, tuple(Event.finite_set(i) for i in space.explicit_atoms()))
    return Partition(space, None)


def partition_mass(p: Partition) -> Fraction:
    if p.parts is not None:
        return sum((event_prob(p.space, e) for e in p.parts), Fraction(0))
    n = p.space.truncation
    prefix = sum((p.space.prob(i) for i in range(1, n + 1)), Fraction(0))
    return prefix + Fraction(1, 2**n)
