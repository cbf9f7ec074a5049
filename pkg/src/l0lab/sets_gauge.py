"""Structured subsets of L0, their convexity / absorbency / balance
predicates, countable concatenation closure, and the gauge functional.

Three set families have decidable membership:

* :class:`BallSet` -- a seminorm ball U_{Q,eps};
* :class:`CounterexampleU` -- {X : |X 1_{A_i}| <= eps for all but finitely
  many atoms i};
* :class:`AtomDecomposable` -- {X : |X_i| <= r_i on every atom}.

On an atomic space the essential infimum of a set of random variables is the
per-atom infimum of attained values.  That infimum decouples atom by atom
only when membership does, so the bisection engine is limited to decoupled
sets on finite spaces while the counterexample family gets its own symbolic
treatment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import EngineUnsupported, L0Error, NotAbsorbedHere, SpaceMismatch
from .l0_core import (
    INF,
    RandomVar,
    concatenate,
    format_value,
    in_L0_plus,
    in_L0_plus_plus,
    zero,
)
from .prob_space import AtomSpace, Event, Partition, canonical_partition
from .sampling import MAX_SAMPLE_PREFIX, Sampler
from .seminorms import Ball, SeminormFamily
from .verdict import Verdict

DEFAULT_TOL = Fraction(1, 2**40)
# doubling steps before the bisection engine declares an atom unbounded
MAX_DOUBLINGS = 128


def format_radius(r: RandomVar) -> str:
    """Scalar text for constant radii, full descriptor otherwise."""
    vals = set(r.values())
    if len(vals) == 1:
        return format_value(next(iter(vals)))
    return str(r)


class L0Set:
    """A subset of L0 on a fixed space with decidable membership."""

    #: membership is the conjunction of per-atom conditions ``atom_ok``
    decoupled = False

    @property
    def space(self) -> AtomSpace:
        raise NotImplementedError

    def member(self, x: RandomVar) -> bool:
        raise NotImplementedError

    def atom_ok(self, i: int, v) -> bool:
        raise EngineUnsupported(f"{self} does not decouple over atoms")

    def atom_embeds(self, i: int, v) -> bool:
        """Whether some member takes the value ``v`` at atom ``i``."""
        return self.atom_ok(i, v)

    def sample_member(self, smp: Sampler) -> RandomVar:
        raise NotImplementedError

    def absorb(self, x: RandomVar) -> RandomVar:
        """A structured Y in L0++ with x in Y*K."""
        raise NotAbsorbedHere(f"no absorbing construction for {self}")

    def scaled(self, c: RandomVar) -> "L0Set":
        raise NotImplementedError

    @property
    def explicit_depth(self) -> int:
        """Atoms past this index all look alike to the set."""
        return 0

    def _check(self, x: RandomVar) -> None:
        if x.space != self.space:
            raise SpaceMismatch("argument lives on a different space than the set")


@dataclass(frozen=True)
class BallSet(L0Set):
    ball: Ball

    @property
    def space(self):
        return self.ball.space

    @property
    def decoupled(self):
        return self.ball.decoupled

    def member(self, x):
        self._check(x)
        return self.ball.member(x)

    def atom_ok(self, i, v):
        return self.ball.atom_sup(None, i, v) <= self.ball.eps.at(i)

    def sample_member(self, smp):
        d = smp.rv(self.space)
        t = smp.unit_rv(self.space) if smp.rng.random() < 0.75 else RandomVar.constant(self.space, 1)
        s = self.ball.sup_eval(d)
        factor = s.combine(lambda si, ei, ti: ti * ei / si if si > 0 else ti, self.ball.eps, t)
        return d * factor

    def absorb(self, x):
        return self.ball.sup_eval(x) / self.ball.eps + 1

    @property
    def explicit_depth(self):
        ws = [s.w.depth for s in self.ball.Q if hasattr(s, "w")]
        return max([self.ball.eps.depth] + ws)

    def scaled(self, c):
        return BallSet(Ball(self.ball.Q, self.ball.eps * c))

    def __str__(self):
        return "ball:" + ",".join(str(s) for s in self.ball.Q) + f",eps={format_radius(self.ball.eps)}"


@dataclass(frozen=True)
class CounterexampleU(L0Set):
    """U_eps: bounded by eps outside finitely many atoms."""

    eps: RandomVar

    def __post_init__(self):
        if not in_L0_plus_plus(self.eps):
            raise ValueError("eps must be strictly positive and finite")

    @property
    def space(self):
        return self.eps.space

    def exception_set(self, x: RandomVar) -> frozenset[int] | None:
        """Smallest finite exception set, or ``None`` if none exists."""
        self._check(x)
        if self.space.is_finite:
            return frozenset(i for i in self.space.explicit_atoms() if abs(x.at(i)) > self.eps.at(i))
        if abs(x.tail) > self.eps.tail:
            return None
        depth = max(x.depth, self.eps.depth)
        return frozenset(i for i in range(1, depth + 1) if abs(x.at(i)) > self.eps.at(i))

    def member(self, x):
        return self.exception_set(x) is not None

    def atom_embeds(self, i, v):
        return True

    def sample_member(self, smp):
        x = self.eps * smp.signed_unit_rv(self.space)
        k = smp.integer(0, 3)
        depth = self.space.n_atoms if self.space.is_finite else min(self.space.truncation, MAX_SAMPLE_PREFIX)
        for _ in range(k):
            i = smp.integer(1, depth)
            big = smp.rational(-20, 20)
            prefix = list(x.prefix) + [x.tail] * max(0, i - x.depth)
            prefix[i - 1] = big
            x = RandomVar(self.space, tuple(prefix), x.tail)
        return x

    def absorb(self, x):
        return (abs(x) / self.eps).maximum(1)

    @property
    def explicit_depth(self):
        return self.eps.depth

    def scaled(self, c):
        return CounterexampleU(self.eps * c)

    def __str__(self):
        return f"cex:eps={format_radius(self.eps)}"


@dataclass(frozen=True)
class AtomDecomposable(L0Set):
    """{X : |X| <= r atom by atom} for a radius r >= 0."""

    r: RandomVar
    decoupled = True

    def __post_init__(self):
        if not in_L0_plus(self.r):
            raise ValueError("radius must be nonnegative and finite")

    @property
    def space(self):
        return self.r.space

    def member(self, x):
        self._check(x)
        return self.r.geq(abs(x))

    def atom_ok(self, i, v):
        return abs(v) <= self.r.at(i)

    def sample_member(self, smp):
        return self.r * smp.signed_unit_rv(self.space)

    def absorb(self, x):
        def f(v, r):
            if r == 0:
                if v != 0:
                    raise NotAbsorbedHere("zero radius cannot absorb a nonzero value")
                return Fraction(1)
            return abs(v) / r + 1

        return x.combine(f, self.r)

    @property
    def explicit_depth(self):
        return self.r.depth

    def scaled(self, c):
        return AtomDecomposable(self.r * c)

    def __str__(self):
        return f"atomdec:r={self.r}"


class CounterexampleBase:
    """The neighbourhood base {U_eps : eps in L0++} of the counterexample."""

    sliding_bumps = True

    def neighborhood(self, eps: RandomVar) -> CounterexampleU:
        return CounterexampleU(eps)

    def __str__(self):
        return "{U_eps}"


def member(K: L0Set, x: RandomVar) -> bool:
    return K.member(x)


# -- predicates -----------------------------------------------------------------------


def is_L0_convex(K: L0Set, seed: int = 0, n: int = 500) -> Verdict:
    smp = Sampler(seed)
    space = K.space
    for k in range(n):
        x1, x2 = K.sample_member(smp), K.sample_member(smp)
        y = RandomVar.constant(space, Fraction(1, 2)) if k < 4 else smp.unit_rv(space)
        z = y * x1 + (1 - y) * x2
        if not K.member(z):
            return Verdict(False, {"kind": "convex", "set": K, "X1": x1, "X2": x2, "Y": y, "combination": z},
                           k + 1, "convex")
    return Verdict(True, None, n, "convex")


def is_L0_absorbent(K: L0Set, x: RandomVar) -> RandomVar:
    """A verified Y in L0++ with x in Y*K; raises NotAbsorbedHere."""
    try:
        y = K.absorb(x)
    except NotAbsorbedHere:
        y = None
    if y is not None and in_L0_plus_plus(y) and K.member(x / y):
        return y
    for k in range(0, 65):
        c = RandomVar.constant(K.space, 2**k)
        if K.member(x / c):
            return c
    raise NotAbsorbedHere(f"no absorbing scalar found for {x} in {K}")


def check_absorbent(K: L0Set, seed: int = 0, n: int = 500) -> Verdict:
    smp = Sampler(seed)
    for k in range(n):
        x = RandomVar.constant(K.space, 1) if k == 0 else smp.rv(K.space)
        try:
            is_L0_absorbent(K, x)
        except NotAbsorbedHere:
            return Verdict(False, {"kind": "absorbent", "set": K, "X": x}, k + 1, "absorbent")
    return Verdict(True, None, n, "absorbent")


def is_L0_balanced(K: L0Set, seed: int = 0, n: int = 500) -> Verdict:
    smp = Sampler(seed)
    space = K.space
    fixed = [RandomVar.constant(space, c) for c in (0, -1, Fraction(1, 2))]
    for k in range(n):
        x = K.sample_member(smp)
        y = fixed[k] if k < len(fixed) else smp.signed_unit_rv(space)
        if not K.member(y * x):
            return Verdict(False, {"kind": "balanced", "set": K, "X": x, "Y": y}, k + 1, "balanced")
    return Verdict(True, None, n, "balanced")


# -- countable concatenation closure ---------------------------------------------------


def closure_member(K: L0Set, x: RandomVar) -> bool:
    """Membership in the countable concatenation closure of K.

    Seminorm balls and atom-decomposable sets are closed, so this is plain
    membership.  For U_eps every single-atom piece 1_{A_n} x has exception set
    {n}, so the canonical partition always works; the pieces up to the
    truncation are re-checked.  Other sets are handled on finite spaces
    through the singleton partition, the finest and hence most permissive.
    """
    if x.space != K.space:
        raise SpaceMismatch("argument lives on a different space than the set")
    if isinstance(K, (BallSet, AtomDecomposable)):
        return K.member(x)
    if isinstance(K, CounterexampleU):
        atoms = K.space.explicit_atoms(max(K.space.truncation, x.depth + 1))
        for i in atoms:
            if not K.member(x.restrict(Event.finite_set(i))):
                raise L0Error(f"single-atom piece at atom {i} escaped U_eps")
        return True
    if not K.space.is_finite:
        raise EngineUnsupported(f"closure of {K} on a countable space")
    return all(K.atom_embeds(i, x.at(i)) for i in K.space.explicit_atoms())


def stress_pieces(K: L0Set):
    """Piece generator for the canonical paste stress test, when the set has
    a known one: (eps+1) 1_{A_n} for U_eps."""
    if isinstance(K, CounterexampleU) and not K.space.is_finite:
        eps = K.eps
        return lambda n: (eps + 1).restrict(Event.finite_set(n)), "(eps+1)*1_{A_n}"
    return None


def _random_canonical_pieces(K: L0Set, smp: Sampler):
    space = K.space
    if space.is_finite:
        return [K.sample_member(smp) for _ in space.explicit_atoms()]
    head = [K.sample_member(smp) for _ in range(space.truncation)]
    tail_piece = K.sample_member(smp)
    return lambda n: head[n - 1] if n <= len(head) else tail_piece


def _check_paste(K: L0Set, partition: Partition, pieces, label: str, k: int, desc=None) -> Verdict | None:
    space = K.space
    if partition.canonical:
        listed = [pieces(n) for n in range(1, space.truncation + 1)]
    else:
        listed = list(pieces)
    for j, p in enumerate(listed):
        if not K.member(p):
            raise L0Error(f"{label}: piece {j + 1} is not a member")
    paste = concatenate(partition, pieces)
    if not K.member(paste):
        w = {"kind": "concat", "set": K, "partition": partition, "pieces": pieces, "paste": paste}
        if desc:
            w["pieces_desc"] = desc
        return Verdict(False, w, k, "concat-closed")
    return None


def is_concat_closed(K: L0Set, seed: int = 0, n: int = 100) -> Verdict:
    """Compare the closure with the set itself.

    Runs the canonical stress paste (if the set has one), a random paste
    along the canonical partition, ``n`` random finite-partition pastes of
    sampled members, and a closure/membership agreement scan.  A failure
    carries the partition, the pieces and the offending paste.
    """
    smp = Sampler(seed)
    space = K.space
    canon = canonical_partition(space)
    runs = 0
    stress = stress_pieces(K)
    if stress is not None:
        runs += 1
        v = _check_paste(K, canon, stress[0], "stress", runs, stress[1])
        if v is not None:
            return v
    runs += 1
    v = _check_paste(K, canon, _random_canonical_pieces(K, smp), "canonical", runs)
    if v is not None:
        return v
    for _ in range(n):
        runs += 1
        part = smp.partition(space)
        pieces = [K.sample_member(smp) for _ in range(len(part))]
        v = _check_paste(K, part, pieces, "finite", runs)
        if v is not None:
            return v
    for k in range(n):
        runs += 1
        x = K.sample_member(smp)
        if k % 3 == 1:
            x = x * 2 + smp.rv(space)
        elif k % 3 == 2:
            x = smp.rv(space)
        if closure_member(K, x) != K.member(x):
            return Verdict(False, {"kind": "closure-agreement", "set": K, "X": x}, runs, "concat-closed")
    return Verdict(True, None, runs, "concat-closed")


# -- gauge ------------------------------------------------------------------------------


@dataclass
class GaugeResult:
    value: RandomVar
    witness_seq: Callable[[int], RandomVar] | None
    engine: str
    enclosure: tuple[RandomVar, RandomVar] | None = None


def _symbolic_gauge(K: L0Set, x: RandomVar) -> RandomVar:
    if x.is_zero():
        return zero(K.space)
    if isinstance(K, BallSet):
        return K.ball.sup_eval(x) / K.ball.eps
    if isinstance(K, AtomDecomposable):
        def f(v, r):
            if v == 0:
                return Fraction(0)
            return INF if r == 0 else abs(v) / r

        return x.combine(f, K.r)
    if isinstance(K, CounterexampleU):
        return zero(K.space)
    raise EngineUnsupported(f"no symbolic gauge for {K}")


def _atom_enclosure(K: L0Set, i: int, v, tol, positive_only: bool):
    """Bracket inf{y : v/y admissible at atom i} by interval halving.

    Admissibility is upward closed in y for the balanced sets handled here.
    ``lo`` is never admissible (or is 0), ``hi`` always is.
    """

    def ok(y):
        if y == 0:
            return v == 0
        return K.atom_ok(i, v / y)

    if not positive_only and ok(Fraction(0)):
        return Fraction(0), Fraction(0)
    lo, hi = Fraction(0), Fraction(1)
    steps = 0
    while not ok(hi):
        lo, hi = hi, hi * 2
        steps += 1
        if steps > MAX_DOUBLINGS:
            return hi, INF
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def _bisection_gauge(K: L0Set, x: RandomVar, tol, positive_only: bool) -> GaugeResult:
    if not K.space.is_finite or not K.decoupled:
        raise EngineUnsupported("bisection needs a finite space and a set that decouples over atoms")
    bounds = [_atom_enclosure(K, i, x.at(i), tol, positive_only) for i in K.space.explicit_atoms()]
    lo = RandomVar(K.space, tuple(b[0] for b in bounds))
    hi = RandomVar(K.space, tuple(b[1] for b in bounds))
    return GaugeResult(hi, None, "bisection", (lo, hi))


def gauge(K: L0Set, x: RandomVar, engine: str = "symbolic", tol=DEFAULT_TOL,
          positive_only: bool = True) -> GaugeResult:
    """The gauge p_K(x) = ess.inf{Y >= 0 : x in Y K}.

    ``symbolic`` returns the exact value with the witness sequence of
    :func:`gauge_witness_seq`.  ``bisection`` returns a certified per-atom
    enclosure ``(lo, hi)`` of width at most ``tol``; its ``value`` is the
    admissible upper end.  ``positive_only`` restricts bisection candidates
    to strictly positive scalars.
    """
    if x.space != K.space:
        raise SpaceMismatch("argument lives on a different space than the set")
    if engine == "symbolic":
        value = _symbolic_gauge(K, x)
        return GaugeResult(value, gauge_witness_seq(K, x) if value.is_real() else None, "symbolic")
    if engine == "bisection":
        return _bisection_gauge(K, x, tol, positive_only)
    raise EngineUnsupported(f"unknown engine {engine!r}")


def gauge_witness_seq(K: L0Set, x: RandomVar) -> Callable[[int], RandomVar]:
    """Admissible Z_n decreasing to the gauge: x in Z_n K for every n."""
    space = K.space
    if x.is_zero():
        return lambda n: RandomVar.constant(space, Fraction(1, n))
    if isinstance(K, (BallSet, AtomDecomposable)):
        p = _symbolic_gauge(K, x)
        if not p.is_real():
            raise NotAbsorbedHere("gauge is infinite on some atom; no admissible sequence")
        return lambda n: p + Fraction(1, n)
    if isinstance(K, CounterexampleU):
        c = (abs(x) / K.eps).maximum(1) + 1

        def staircase(n: int) -> RandomVar:
            if space.is_finite:
                return RandomVar(space, tuple(Fraction(1, n) if i <= n else c.at(i)
                                              for i in space.explicit_atoms()))
            depth = max(n, c.depth)
            return RandomVar(space, tuple(Fraction(1, n) if i <= n else c.at(i)
                                          for i in range(1, depth + 1)), c.tail)

        return staircase
    raise EngineUnsupported(f"no witness sequence for {K}")


def small_gauge_witness(K: CounterexampleU, m: int, delta) -> RandomVar:
    """Y in L0++ equal to ``delta`` on atom m with 1/Y a verified member of K.

    Then 1 = Y * (1/Y) lies in Y K, so the gauge of the constant 1 is at most
    ``delta`` on atom m.  Off atom m, Y = max(1, 1/eps), which keeps 1/Y
    within eps there.
    """
    space = K.space
    space.check_atom(m)
    if not space.is_finite and m > space.truncation:
        raise ValueError("atom index beyond the truncation")
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    base = (1 / K.eps).maximum(1)
    prefix = [base.at(i) for i in range(1, max(m, base.depth) + 1)]
    prefix[m - 1] = delta
    y = RandomVar(space, tuple(prefix)) if space.is_finite else RandomVar(space, tuple(prefix), base.tail)
    if not K.member(1 / y):
        raise L0Error(f"1/Y escaped {K} at atom {m}")
    return y


def certified_interior(U: L0Set, x: RandomVar, fam: SeminormFamily) -> bool:
    """Sufficient interior test for seminorm balls: sup ||x|| < eps on every
    atom.  ``False`` means "not certified", not "not interior"."""
    if not isinstance(U, BallSet):
        raise EngineUnsupported("interior certificates exist for seminorm balls only")
    if any(s not in fam.seminorms for s in U.ball.Q):
        raise EngineUnsupported("ball uses seminorms outside the family")
    return U.ball.eps.gt(U.ball.sup_eval(x))


def outside_atoms(U: L0Set, x: RandomVar) -> Event:
    """B*: atoms i where 1_{i} x is not in 1_{i} U."""
    space = U.space
    if space.is_finite:
        return Event(frozenset(i for i in space.explicit_atoms() if not U.atom_embeds(i, x.at(i))))
    depth = max(x.depth, U.explicit_depth)
    bad = {i for i in range(1, depth + 1) if not U.atom_embeds(i, x.at(i))}
    if not U.atom_embeds(depth + 1, x.at(depth + 1)):
        return Event(frozenset(range(1, depth + 1)) - bad, True)
    return Event(frozenset(bad))


def outside_lower_bound_check(U: L0Set, x: RandomVar) -> Verdict:
    b = outside_atoms(U, x)
    g = gauge(U, x).value
    ok = g.geq(1, on=b)
    notes = {"B": b, "gauge": g}
    if ok:
        return Verdict(True, None, 1, "outside-lower-bound", notes)
    return Verdict(False, {"kind": "outside-lower-bound", "set": U, "X": x, "B": b}, 1,
                   "outside-lower-bound", notes)
