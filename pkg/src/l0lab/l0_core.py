"""The lattice-ordered ring L0 over an atomic space, and its extension by +-inf.

A :class:`RandomVar` stores one value per atom.  On a finite space that is a
plain vector; on the geometric space it is an explicit prefix followed by a
constant tail, which is the smallest class closed under the constructions we
need (arithmetic, indicators of atoms, pasting along partitions).

Values are ``Fraction`` or the floats ``+inf``/``-inf``.  Finite floats never
appear.  The same class doubles as an element of the extended space; use
:meth:`RandomVar.is_real` to tell them apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .errors import NotRepresentable, PartitionMismatch, SpaceMismatch, UndefinedExtendedArith
from .prob_space import AtomSpace, Event, Partition, check_event

INF = math.inf
NEG_INF = -math.inf

Value = Union[Fraction, float]


# -- extended-real scalar helpers ---------------------------------------------


def coerce_value(v) -> Value:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if math.isinf(v):
            return v
        if math.isnan(v):
            raise UndefinedExtendedArith("NaN is not an extended real")
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip()
        if s in ("+inf", "inf"):
            return INF
        if s == "-inf":
            return NEG_INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {v!r} as an extended rational")


def is_inf(v: Value) -> bool:
    return isinstance(v, float) and math.isinf(v)


def ext_add(a: Value, b: Value) -> Value:
    if is_inf(a) and is_inf(b) and a != b:
        raise UndefinedExtendedArith("(+inf) + (-inf) is undefined")
    return a + b


def ext_neg(a: Value) -> Value:
    return -a


def ext_mul(a: Value, b: Value) -> Value:
    # 0 * (+-inf) = 0
    if a == 0 or b == 0:
        return Fraction(0)
    return a * b


def ext_div(a: Value, b: Value) -> Value:
    if b == 0:
        raise ZeroDivisionError("division by a random variable that vanishes on an atom")
    if is_inf(b):
        if is_inf(a):
            raise UndefinedExtendedArith("inf / inf is undefined")
        return Fraction(0)
    return a / b


def format_value(v: Value) -> str:
    if is_inf(v):
        return "+inf" if v > 0 else "-inf"
    return str(v)


# -- random variables -----------------------------------------------------------


@dataclass(frozen=True)
class RandomVar:
    """An element of L0 (or of its extended version) on ``space``.

    For finite spaces ``prefix`` holds every atom and ``tail`` is ``None``.
    For the geometric space the value at atom ``i`` is ``prefix[i-1]`` when
    ``i <= len(prefix)`` and ``tail`` otherwise; trailing prefix entries equal
    to the tail are stripped so that equal variables compare equal.
    """

    space: AtomSpace
    prefix: tuple
    tail: Value | None = None

    def __post_init__(self):
        prefix = tuple(coerce_value(v) for v in self.prefix)
        if self.space.is_finite:
            if self.tail is not None:
                raise ValueError("finite-space random variables have no tail")
            if len(prefix) != self.space.n_atoms:
                raise SpaceMismatch(
                    f"vector of length {len(prefix)} on a {self.space.n_atoms}-atom space"
                )
            object.__setattr__(self, "prefix", prefix)
            return
        if self.tail is None:
            raise ValueError("geometric-space random variables need a tail value")
        tail = coerce_value(self.tail)
        n = len(prefix)
        while n and prefix[n - 1] == tail:
            n -= 1
        object.__setattr__(self, "prefix", prefix[:n])
        object.__setattr__(self, "tail", tail)

    # constructors

    @classmethod
    def vector(cls, space: AtomSpace, values: Iterable) -> "RandomVar":
        return cls(space, tuple(values))

    @classmethod
    def eventually(cls, space: AtomSpace, prefix: Iterable, tail) -> "RandomVar":
        return cls(space, tuple(prefix), tail)

    @classmethod
    def constant(cls, space: AtomSpace, c) -> "RandomVar":
        if space.is_finite:
            return cls(space, (c,) * space.n_atoms)
        return cls(space, (), c)

    @classmethod
    def from_function(cls, space: AtomSpace, f: Callable[[int], object], tail=None) -> "RandomVar":
        """Finite: ``f`` on every atom.  Geometric: ``f`` on atoms up to the
        truncation, then ``tail``."""
        if space.is_finite:
            return cls(space, tuple(f(i) for i in space.explicit_atoms()))
        if tail is None:
            raise NotRepresentable("a tail value is needed on a countable space")
        return cls(space, tuple(f(i) for i in space.explicit_atoms()), tail)

    # access

    @property
    def depth(self) -> int:
        """Number of explicitly stored atoms."""
        return len(self.prefix)

    def at(self, i: int) -> Value:
        self.space.check_atom(i)
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.tail

    def values(self) -> tuple:
        return self.prefix if self.tail is None else self.prefix + (self.tail,)

    def is_real(self) -> bool:
        return not any(is_inf(v) for v in self.values())

    # pointwise machinery

    def combine(self, f: Callable, *others: "RandomVar") -> "RandomVar":
        """Apply ``f`` atom by atom to ``self`` and ``others``."""
        for o in others:
            if o.space != self.space:
                raise SpaceMismatch("operands live on different spaces")
        rvs = (self,) + others
        if self.space.is_finite:
            return RandomVar(self.space, tuple(f(*vals) for vals in zip(*(r.prefix for r in rvs))))
        depth = max(r.depth for r in rvs)
        prefix = tuple(f(*(r.at(i) for r in rvs)) for i in range(1, depth + 1))
        return RandomVar(self.space, prefix, f(*(r.tail for r in rvs)))

    def map(self, f: Callable[[Value], Value]) -> "RandomVar":
        return self.combine(f)

    def _lift(self, other) -> "RandomVar":
        if isinstance(other, RandomVar):
            return other
        if isinstance(other, Event):
            return indicator(self.space, other)
        return RandomVar.constant(self.space, coerce_value(other))

    def __add__(self, other):
        return self.combine(ext_add, self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.combine(lambda a, b: ext_add(a, -b), self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return self.map(ext_neg)

    def __mul__(self, other):
        return self.combine(ext_mul, self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.combine(ext_div, self._lift(other))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __abs__(self):
        return self.map(abs)

    def minimum(self, other) -> "RandomVar":
        return self.combine(min, self._lift(other))

    def maximum(self, other) -> "RandomVar":
        return self.combine(max, self._lift(other))

    def restrict(self, event: Event) -> "RandomVar":
        """``1_A * X``."""
        return self * indicator(self.space, event)

    # order

    def geq(self, other, on: Event | None = None) -> bool:
        return order("geq_on" if on else "geq", self, self._lift(other), on)

    def gt(self, other, on: Event | None = None) -> bool:
        return order("gt_on" if on else "gt", self, self._lift(other), on)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values())

    def __str__(self) -> str:
        return format_rv(self)


def format_rv(x: RandomVar) -> str:
    body = ",".join(format_value(v) for v in x.prefix)
    if x.tail is None:
        return f"[{body}]"
    return f"<{body}|{format_value(x.tail)}>"


def indicator(space: AtomSpace, event: Event) -> RandomVar:
    check_event(space, event)
    one, zero = Fraction(1), Fraction(0)
    if space.is_finite:
        return RandomVar(space, tuple(one if i in event else zero for i in space.explicit_atoms()))
    depth = event.max_index
    prefix = tuple(one if i in event else zero for i in range(1, depth + 1))
    return RandomVar(space, prefix, one if event.cofinite else zero)


def zero(space: AtomSpace) -> RandomVar:
    return RandomVar.constant(space, 0)


def one(space: AtomSpace) -> RandomVar:
    return RandomVar.constant(space, 1)


ARITH_OPS = ("add", "sub", "mul", "abs", "min", "max", "scale-by-indicator")


def arith(op: str, x: RandomVar, y=None) -> RandomVar:
    """Named-operation entry point mirroring the operator overloads."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "abs":
        return abs(x)
    if op == "min":
        return x.minimum(y)
    if op == "max":
        return x.maximum(y)
    if op == "scale-by-indicator":
        if not isinstance(y, Event):
            raise TypeError("scale-by-indicator expects an Event")
        return x.restrict(y)
    raise ValueError(f"unknown operation {op!r}")


# -- order ---------------------------------------------------------------------


def _atom_scan(x: RandomVar, y: RandomVar, event: Event | None):
    """Yield (x_i, y_i) over a set of atoms that decides any pointwise
    statement on ``event`` (or on the whole space)."""
    if x.space != y.space:
        raise SpaceMismatch("operands live on different spaces")
    space = x.space
    if event is not None:
        check_event(space, event)
    if space.is_finite:
        atoms = space.explicit_atoms()
    else:
        depth = max(x.depth, y.depth, event.max_index if event else 0)
        # atom depth+1 stands in for the whole tail
        atoms = range(1, depth + 2)
    for i in atoms:
        if event is None or i in event:
            yield x.at(i), y.at(i)


def order(rel: str, x: RandomVar, y: RandomVar, on: Event | None = None) -> bool:
    """Almost-sure order relations.  ``geq``/``gt`` on the whole space,
    ``geq_on``/``gt_on`` restricted to the event ``on``."""
    if rel in ("geq", "gt") and on is not None:
        raise ValueError(f"{rel} takes no event; use {rel}_on")
    if rel in ("geq_on", "gt_on") and on is None:
        raise ValueError(f"{rel} requires an event")
    if rel.startswith("geq"):
        return all(a >= b for a, b in _atom_scan(x, y, on))
    if rel.startswith("gt"):
        return all(a > b for a, b in _atom_scan(x, y, on))
    raise ValueError(f"unknown relation {rel!r}")


def in_L0_plus(x: RandomVar) -> bool:
    return x.is_real() and all(v >= 0 for v in x.values())


def in_L0_plus_plus(x: RandomVar) -> bool:
    return x.is_real() and all(v > 0 for v in x.values())


# -- essential supremum / infimum ------------------------------------------------


def ess_sup_finite(family: Sequence[RandomVar], space: AtomSpace | None = None) -> RandomVar:
    if not family:
        if space is None:
            raise ValueError("an empty family needs an explicit space")
        return RandomVar.constant(space, NEG_INF)
    if space is not None and family[0].space != space:
        raise SpaceMismatch("family does not live on the given space")
    out = family[0]
    for x in family[1:]:
        out = out.maximum(x)
    return out


def ess_inf_finite(family: Sequence[RandomVar], space: AtomSpace | None = None) -> RandomVar:
    return -ess_sup_finite([-x for x in family], space)


@dataclass(frozen=True)
class SeqFamily:
    """A countable family n -> Y_n (n >= 1) of random variables.

    ``declared_monotone`` promises Y_n <= Y_{n+1}; the supremum routines then
    read the running maximum directly off the terms instead of scanning every
    index, and spot-check the promise.
    """

    generator: Callable[[int], RandomVar]
    declared_monotone: bool = False
    name: str = ""

    def __call__(self, n: int) -> RandomVar:
        return self.generator(n)

    def negated(self) -> "SeqFamily":
        g = self.generator
        return SeqFamily(lambda n: -g(n), False, f"-({self.name})")


class RunningMax(Sequence):
    """The witness sequence M_n = max(Y_1, ..., Y_n), indexed from 0.

    For declared-monotone families M_n is Y_n itself and terms are generated
    on demand; otherwise all terms are materialised.
    """

    def __init__(self, family: SeqFamily, depth: int):
        self._family = family
        self._depth = depth
        self._terms: list[RandomVar] | None = None
        if not family.declared_monotone:
            terms = []
            m = family(1)
            terms.append(m)
            for n in range(2, depth + 1):
                m = m.maximum(family(n))
                terms.append(m)
            self._terms = terms

    def __len__(self) -> int:
        return self._depth

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[j] for j in range(*k.indices(self._depth))]
        if k < 0:
            k += self._depth
        if not 0 <= k < self._depth:
            raise IndexError(k)
        if self._terms is not None:
            return self._terms[k]
        return self._family(k + 1)

    @property
    def materialised(self) -> bool:
        return self._terms is not None

    def check_indices(self, dense: int = 4096) -> list[int]:
        """1-based indices at which monotonicity is verified: all of them
        when materialised, otherwise every index up to ``dense`` plus a
        dyadic grid (and its neighbours) beyond it."""
        if self._terms is not None or self._depth <= dense:
            return list(range(1, self._depth + 1))
        idx = set(range(1, dense + 1))
        k = dense
        while k <= self._depth:
            idx.update(j for j in (k - 1, k, k + 1) if 1 <= j <= self._depth)
            k *= 2
        idx.add(self._depth)
        idx.add(self._depth - 1)
        return sorted(idx)


@dataclass
class SupResult:
    value: RandomVar
    witness: RunningMax
    converged: bool
    unbounded: Event = field(default_factory=Event.empty)
    monotone_checked: bool = True

    def __iter__(self):
        # allows ``value, witness = ess_sup_seq(...)``
        return iter((self.value, self.witness))


def _tracked_atoms(space: AtomSpace, *rvs: RandomVar) -> list[int]:
    if space.is_finite:
        return list(space.explicit_atoms())
    depth = max(r.depth for r in rvs)
    return list(range(1, depth + 2))


def ess_sup_seq(family: SeqFamily, depth: int, tol=Fraction(1, 2**20), dense: int = 256) -> SupResult:
    """Depth-limited essential supremum of a countable family.

    Returns the supremum of the first ``depth`` terms together with the
    running-maximum witness.  ``converged`` holds when the gain over the
    second half, M_depth - M_ceil(depth/2), is at most ``tol`` on every
    tracked atom.  An atom is flagged unbounded (value reported as +inf) when
    its value exceeds 1/tol, or when both the second-half gain and the gain
    over the preceding quarter exceed tol and the former is not smaller, i.e.
    the running maximum keeps growing without decelerating.

    For declared-monotone families the promise is verified at every index up
    to ``dense`` and on a dyadic grid beyond; a broken promise falls back to
    a full scan.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    tol = coerce_value(tol)
    witness = RunningMax(family, depth)
    monotone_ok = True
    if family.declared_monotone:
        prev = None
        for n in witness.check_indices(dense):
            cur = witness[n - 1]
            if prev is not None and prev[0] == n - 1 and not cur.geq(prev[1]):
                monotone_ok = False
                break
            prev = (n, cur)
    if not monotone_ok:
        # promise broken: fall back to a full scan
        family = SeqFamily(family.generator, False, family.name)
        witness = RunningMax(family, depth)

    top = witness[depth - 1]
    half = witness[-(-depth // 2) - 1]
    quarter = witness[max(-(-depth // 4), 1) - 1]
    space = top.space
    unbounded_atoms: set[int] = set()
    tail_unbounded = False
    converged = True
    big = 1 / tol
    atoms = _tracked_atoms(space, top, half, quarter)
    for i in atoms:
        t, h, q = top.at(i), half.at(i), quarter.at(i)
        gain = t - h if not (is_inf(t) and is_inf(h)) else Fraction(0)
        if gain > tol:
            converged = False
        runaway = t > big or (gain > tol and depth >= 4 and h - q > tol and gain >= h - q)
        if runaway:
            if not space.is_finite and i == atoms[-1]:
                tail_unbounded = True
            else:
                unbounded_atoms.add(i)
    if tail_unbounded:
        unb = Event(frozenset(i for i in atoms[:-1] if i not in unbounded_atoms), True)
    else:
        unb = Event(frozenset(unbounded_atoms))
    value = top if unb == Event.empty() else top.combine(
        lambda v, flag: INF if flag == 1 else v, indicator(space, unb)
    )
    return SupResult(value, witness, converged and unb == Event.empty(), unb, monotone_ok)


@dataclass
class InfResult:
    value: RandomVar
    witness: Sequence
    converged: bool
    unbounded: Event = field(default_factory=Event.empty)

    def __iter__(self):
        return iter((self.value, self.witness))


class _NegatedSeq(Sequence):
    def __init__(self, inner: Sequence):
        self._inner = inner

    def __len__(self):
        return len(self._inner)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [-x for x in self._inner[k]]
        return -self._inner[k]


def ess_inf_seq(family: SeqFamily, depth: int, tol=Fraction(1, 2**20), dense: int = 256) -> InfResult:
    """Dual of :func:`ess_sup_seq`: ``-ess_sup(-Y)``; the witness is the
    non-increasing running minimum.  Here ``declared_monotone`` promises a
    non-increasing family."""
    neg = SeqFamily(lambda n: -family(n), family.declared_monotone, family.name)
    r = ess_sup_seq(neg, depth, tol, dense)
    return InfResult(-r.value, _NegatedSeq(r.witness), r.converged, r.unbounded)


# -- concatenation -------------------------------------------------------------------

# atoms beyond the truncation inspected to confirm an eventually-constant paste
LOOKAHEAD = 64


def concatenate(partition: Partition, pieces) -> RandomVar:
    """Paste ``sum_n 1_{A_n} X_n`` along a partition.

    For a finite list of parts ``pieces`` is a sequence of the same length.
    For the canonical singleton partition of a countable space ``pieces`` is a
    callable ``n -> X_n``; the atom values ``X_n(n)`` must be constant from
    the truncation on, which is confirmed over a lookahead window.
    """
    space = partition.space
    if partition.parts is not None:
        pieces = [pieces(k + 1) for k in range(len(partition))] if callable(pieces) else list(pieces)
        if len(pieces) != len(partition):
            raise PartitionMismatch(f"{len(pieces)} pieces for {len(partition)} parts")
        for p in pieces:
            if p.space != space:
                raise SpaceMismatch("piece lives on a different space")
        if space.is_finite:
            return RandomVar(
                space, tuple(pieces[partition.part_of(i)].at(i) for i in space.explicit_atoms())
            )
        depth = max(max(p.depth for p in pieces), max(e.max_index for e in partition.parts))
        prefix = tuple(pieces[partition.part_of(i)].at(i) for i in range(1, depth + 1))
        return RandomVar(space, prefix, pieces[partition.tail_part()].tail)

    if not callable(pieces):
        raise PartitionMismatch("the canonical partition needs a piece generator n -> X_n")
    n_max = space.truncation
    vals = []
    for n in range(1, n_max + LOOKAHEAD + 1):
        p = pieces(n)
        if p.space != space:
            raise SpaceMismatch("piece lives on a different space")
        vals.append(p.at(n))
    tail = vals[n_max]
    if any(v != tail for v in vals[n_max:]):
        raise NotRepresentable("atom values of the pieces are not eventually constant")
    return RandomVar(space, tuple(vals[:n_max]), tail)
