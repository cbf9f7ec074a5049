"""L0-seminorms, the balls U_{Q,eps}, and the sequential convergence checks of
the topology they induce.

The induced topology quantifies over every strictly positive eps, which no
machine can enumerate.  Convergence is therefore decided relative to a finite
probe set of radii (see :func:`default_probes`); a ``False`` is a genuine
refutation, a ``True`` is only as strong as the probes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import EngineUnsupported, SpaceMismatch
from .l0_core import RandomVar, ext_add, in_L0_plus, in_L0_plus_plus, one
from .prob_space import AtomSpace
from .sampling import Sampler
from .verdict import Verdict


class Seminorm:
    """Base class.  ``decoupled`` seminorms evaluate atom by atom, which is
    what the bisection gauge engine needs."""

    decoupled = True

    def eval(self, x: RandomVar) -> RandomVar:
        raise NotImplementedError

    def atom_eval(self, x: RandomVar, i: int, v):
        """Value at atom ``i`` of the seminorm of any variable equal to ``v``
        at ``i``.  Only meaningful for decoupled seminorms."""
        raise EngineUnsupported(f"{self} does not decouple over atoms")

    def check_space(self, space: AtomSpace) -> None:
        pass


class AbsValue(Seminorm):
    def eval(self, x):
        return abs(x)

    def atom_eval(self, x, i, v):
        return abs(v)

    def __eq__(self, other):
        return isinstance(other, AbsValue)

    def __hash__(self):
        return hash("abs")

    def __repr__(self):
        return "AbsValue()"

    def __str__(self):
        return "abs"


@dataclass(frozen=True)
class Weighted(Seminorm):
    """X -> |w X| for a weight w >= 0."""

    w: RandomVar

    def __post_init__(self):
        if not in_L0_plus(self.w):
            raise ValueError("seminorm weights must be nonnegative and finite")

    def eval(self, x):
        if x.space != self.w.space:
            raise SpaceMismatch("weight and argument live on different spaces")
        return abs(self.w * x)

    def atom_eval(self, x, i, v):
        return abs(self.w.at(i) * v)

    def check_space(self, space):
        if self.w.space != space:
            raise SpaceMismatch("weight lives on a different space")

    def __str__(self):
        return f"weighted:{self.w}"


class GaugeOf(Seminorm):
    """The gauge functional of a set, used as a seminorm."""

    decoupled = False

    def __init__(self, K):
        self.K = K

    def eval(self, x):
        from .sets_gauge import gauge

        return gauge(self.K, x).value

    def __eq__(self, other):
        return isinstance(other, GaugeOf) and other.K == self.K

    def __hash__(self):
        return hash(("gauge", str(self.K)))

    def __repr__(self):
        return f"GaugeOf({self.K!r})"

    def __str__(self):
        return f"gauge:({self.K})"


class MapSeminorm(Seminorm):
    """An arbitrary candidate map, for feeding the axiom checker."""

    decoupled = False

    def __init__(self, fn: Callable[[RandomVar], RandomVar], label: str):
        self.fn = fn
        self.label = label

    def eval(self, x):
        return self.fn(x)

    def __str__(self):
        return self.label


def eval_seminorm(s: Seminorm, x: RandomVar) -> RandomVar:
    return s.eval(x)


# -- balls ------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """U_{Q,eps} = {X : max over Q of ||X|| <= eps}."""

    Q: tuple
    eps: RandomVar

    def __post_init__(self):
        object.__setattr__(self, "Q", tuple(self.Q))
        if not self.Q:
            raise ValueError("a ball needs at least one seminorm")
        if not in_L0_plus_plus(self.eps):
            raise ValueError("ball radius must be strictly positive and finite")
        for s in self.Q:
            s.check_space(self.eps.space)

    @property
    def space(self) -> AtomSpace:
        return self.eps.space

    def sup_eval(self, x: RandomVar) -> RandomVar:
        out = self.Q[0].eval(x)
        for s in self.Q[1:]:
            out = out.maximum(s.eval(x))
        return out

    def member(self, x: RandomVar) -> bool:
        if x.space != self.space:
            raise SpaceMismatch("argument lives on a different space than the ball")
        return self.eps.geq(self.sup_eval(x))

    @property
    def decoupled(self) -> bool:
        return all(s.decoupled for s in self.Q)

    def atom_sup(self, x, i, v):
        return max(s.atom_eval(x, i, v) for s in self.Q)

    def __str__(self):
        return "ball:" + ",".join(str(s) for s in self.Q) + f",eps={self.eps}"


def ball_member(b: Ball, x: RandomVar) -> bool:
    return b.member(x)


@dataclass(frozen=True)
class SeminormFamily:
    """A nonempty family P of seminorms.

    The ball over the whole family sits inside the ball over any finite
    subfamily Q with the same radius, so checks that quantify over every
    finite Q only need Q = P.
    """

    seminorms: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "seminorms", tuple(self.seminorms))
        if not self.seminorms:
            raise ValueError("a seminorm family must be nonempty")

    def neighborhood(self, eps: RandomVar) -> Ball:
        return Ball(self.seminorms, eps)

    def __iter__(self):
        return iter(self.seminorms)

    def __str__(self):
        return self.name or "{" + ";".join(str(s) for s in self.seminorms) + "}"


# -- axiom checker ------------------------------------------------------------------


def check_seminorm_axioms(s: Seminorm, space: AtomSpace, seed: int = 0, n_samples: int = 200) -> Verdict:
    """Sampled check of absolute homogeneity and subadditivity.

    ``notes["norm_holds"]`` reports whether ||X|| = 0 forced X = 0 on the
    samples, with a witness in ``notes["norm_witness"]`` when it did not.
    A handful of structured probes (Y = -1, 0, 1/2, 2 against the constant 1)
    run before the random samples.
    """
    smp = Sampler(seed)
    c1 = one(space)
    probes = [(RandomVar.constant(space, y), c1, c1) for y in (-1, 0, Fraction(1, 2), 2)]
    norm_witness = None
    for k in range(n_samples):
        if k < len(probes):
            y, x1, x2 = probes[k]
        else:
            y, x1, x2 = smp.rv(space), smp.rv(space), smp.rv(space)
        sx = s.eval(x1)
        lhs, rhs = s.eval(y * x1), abs(y) * sx
        if lhs != rhs:
            return Verdict(False, {"kind": "homogeneity", "seminorm": s, "Y": y, "X": x1,
                                   "lhs": lhs, "rhs": rhs}, k + 1, "seminorm-axioms",
                           {"norm_holds": norm_witness is None, "norm_witness": norm_witness})
        total = sx.combine(ext_add, s.eval(x2))
        if not total.geq(s.eval(x1 + x2)):
            return Verdict(False, {"kind": "subadditivity", "seminorm": s, "X1": x1, "X2": x2},
                           k + 1, "seminorm-axioms",
                           {"norm_holds": norm_witness is None, "norm_witness": norm_witness})
        if norm_witness is None and sx.is_zero() and not x1.is_zero():
            norm_witness = {"kind": "norm", "seminorm": s, "X": x1}
    return Verdict(True, None, n_samples, "seminorm-axioms",
                   {"norm_holds": norm_witness is None, "norm_witness": norm_witness})


# -- convergence ------------------------------------------------------------------------


def default_probes(space: AtomSpace) -> list[RandomVar]:
    """Constants 1, 1/2, 2^-10, 2^-20 and the non-constant <1 | 2^-20>."""
    probes = [RandomVar.constant(space, Fraction(1, 2**k)) for k in (0, 1, 10, 20)]
    tiny = Fraction(1, 2**20)
    if space.is_finite:
        probes.append(RandomVar(space, (1,) + (tiny,) * (space.n_atoms - 1)))
    else:
        probes.append(RandomVar(space, (1,), tiny))
    return probes


def convergence_refutation(gen, x: RandomVar, fam, depth: int,
                           probe_eps: Sequence[RandomVar] | None = None,
                           window: int = 16) -> dict | None:
    """Return a refuting record, or ``None`` if every probe is satisfied.

    ``fam`` is anything exposing ``neighborhood(eps)`` with a ``member``
    method: a :class:`SeminormFamily` or a neighbourhood base of sets.  The
    sequence passes a probe eps when the terminal run of terms
    ``depth - window + 1 .. depth`` lies in X + neighborhood(eps).
    """
    probes = default_probes(x.space) if probe_eps is None else list(probe_eps)
    for eps in probes:
        if not in_L0_plus_plus(eps):
            raise ValueError("probe radii must be strictly positive")
    nbhds = [fam.neighborhood(eps) for eps in probes]
    start = max(1, depth - window + 1)
    for n in range(depth, start - 1, -1):
        d = gen(n) - x
        for eps, u in zip(probes, nbhds):
            if not u.member(d):
                return {"kind": "convergence", "family": fam, "eps": eps, "n": n,
                        "term": gen(n), "limit": x}
    return None


def seq_converges(gen, x: RandomVar, fam, depth: int,
                  probe_eps: Sequence[RandomVar] | None = None, window: int = 16) -> bool:
    return convergence_refutation(gen, x, fam, depth, probe_eps, window) is None


def _geometric_decay(base: RandomVar, direction: RandomVar):
    return lambda n: base + direction * Fraction(1, 2**n)


def verify_module_continuity(fam_or_base, space: AtomSpace, seed: int = 0, n: int = 50,
                             depth: int = 64, probe_eps=None) -> Verdict:
    """Sequential continuity of addition and of the scalar action.

    Samples X_n -> X, X'_n -> X' in the topology of ``fam_or_base`` and
    Y_n -> Y in |.|, confirms the inputs converge, then checks that
    X_n + X'_n -> X + X' and Y_n X_n -> Y X against the probe set.  When
    ``fam_or_base`` declares ``sliding_bumps`` (the counterexample base), the
    samples also include X_n = X + c 1_{A_n}, which converges there but not
    in |.|.
    """
    smp = Sampler(seed)
    abs_fam = SeminormFamily((AbsValue(),), "abs")
    bumps = getattr(fam_or_base, "sliding_bumps", False) and not space.is_finite
    for k in range(n):
        x, xp, y = smp.rv(space), smp.rv(space), smp.rv(space)
        dx, dxp, dy = smp.rv(space), smp.rv(space), smp.rv(space)
        xs = _geometric_decay(x, dx)
        if bumps and k % 2 == 1:
            c = smp.rational(-4, 4)
            xs = (lambda base, c: lambda m: base + RandomVar.eventually(
                space, (0,) * (m - 1) + (c,), 0))(x, c)
        xps = _geometric_decay(xp, dxp)
        ys = _geometric_decay(y, dy)
        for label, g, lim, topo in (("X_n", xs, x, fam_or_base), ("X'_n", xps, xp, fam_or_base),
                                    ("Y_n", ys, y, abs_fam)):
            ref = convergence_refutation(g, lim, topo, depth, probe_eps)
            if ref is not None:
                raise AssertionError(f"sampled input sequence {label} does not converge: {ref}")
        sums = (lambda a, b: lambda m: a(m) + b(m))(xs, xps)
        prods = (lambda a, b: lambda m: a(m) * b(m))(ys, xs)
        for op, g, lim in (("add", sums, x + xp), ("scalar", prods, y * x)):
            ref = convergence_refutation(g, lim, fam_or_base, depth, probe_eps)
            if ref is not None:
                ref.update(kind="continuity", op=op)
                return Verdict(False, ref, k + 1, "module-continuity")
    return Verdict(True, None, n, "module-continuity")
