"""Executable checks, one per statement, each producing a :class:`Report`.

Every check that is expected to fail (the counterexample findings) is marked
as such; a report passes when every check came out the way it was expected
to.  Failed verdicts carry witnesses that :func:`replay` re-runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .errors import NotAbsorbedHere, PrerequisiteFailed
from .l0_core import (
    LOOKAHEAD,
    RandomVar,
    RunningMax,
    SeqFamily,
    concatenate,
    ess_sup_seq,
    ext_add,
    ext_mul,
    format_value,
    in_L0_plus_plus,
    one,
)
from .prob_space import AtomSpace, Event, Partition, canonical_partition, make_finite_space, make_geometric_space
from .sampling import Sampler, derive_seed
from .seminorms import (
    AbsValue,
    Ball,
    GaugeOf,
    Seminorm,
    SeminormFamily,
    Weighted,
    check_seminorm_axioms,
    verify_module_continuity,
)
from .sets_gauge import (
    DEFAULT_TOL,
    AtomDecomposable,
    BallSet,
    CounterexampleBase,
    CounterexampleU,
    L0Set,
    certified_interior,
    check_absorbent,
    closure_member,
    gauge,
    gauge_witness_seq,
    is_concat_closed,
    is_L0_absorbent,
    is_L0_balanced,
    is_L0_convex,
    small_gauge_witness,
    stress_pieces,
)
from .verdict import Verdict

SCHEMA_VERSION = 1
SMALL_GAUGE_DELTA = Fraction(1, 2**20)


@dataclass
class Check:
    name: str
    verdict: Verdict
    # True: must pass; False: must fail; None: informational only
    expect_pass: bool | None = True

    @property
    def ok(self) -> bool:
        return self.expect_pass is None or self.verdict.passed == self.expect_pass


@dataclass
class Report:
    statement: str
    paper_anchor: str
    config: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    findings: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, verdict: Verdict, expect_pass: bool | None = True) -> Verdict:
        verdict.name = name
        self.checks.append(Check(name, verdict, expect_pass))
        return verdict

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def witnesses(self) -> list[dict]:
        return [c.verdict.witness for c in self.checks if not c.verdict.passed and c.verdict.witness]

    def to_dict(self) -> dict:
        return {
            "statement": self.statement,
            "passed": self.passed,
            "paper_anchor": self.paper_anchor,
            "config": to_jsonable(self.config),
            "checks": [
                {"name": c.name, "held": c.verdict.passed, "expected": c.expect_pass,
                 "ok": c.ok, "samples": c.verdict.samples_run}
                for c in self.checks
            ],
            "witnesses": [dict(to_jsonable(w), check=c.name)
                          for c in self.checks if not c.verdict.passed and c.verdict.witness
                          for w in [c.verdict.witness]],
            "findings": to_jsonable(self.findings),
            "notes": list(self.notes),
        }


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, float)):
        return format_value(obj)
    if isinstance(obj, (RandomVar, Event, L0Set, Seminorm, SeminormFamily, AtomSpace, CounterexampleBase)):
        return str(obj)
    if isinstance(obj, Partition):
        return "canonical" if obj.canonical else [str(e) for e in obj.parts]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if callable(obj):
        return "<generator>"
    return str(obj)


def reports_to_json(reports: Sequence[Report], config: dict) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "config": to_jsonable(config),
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- witness replay -------------------------------------------------------------------


def _lt_one(g: RandomVar) -> bool:
    return one(g.space).gt(g)


def replay(w: dict) -> bool:
    """Re-run the single check recorded in a witness; ``True`` when the
    violation reproduces."""
    kind = w["kind"]
    if kind == "member":
        return w["set"].member(w["X"]) != w["expected"]
    if kind == "convex":
        y = w["Y"]
        return not w["set"].member(y * w["X1"] + (1 - y) * w["X2"])
    if kind == "balanced":
        return not w["set"].member(w["Y"] * w["X"])
    if kind == "absorbent":
        try:
            is_L0_absorbent(w["set"], w["X"])
        except NotAbsorbedHere:
            return True
        return False
    if kind == "homogeneity":
        s, y, x = w["seminorm"], w["Y"], w["X"]
        return s.eval(y * x) != abs(y) * s.eval(x)
    if kind == "subadditivity":
        s, x1, x2 = w["seminorm"], w["X1"], w["X2"]
        return not s.eval(x1).combine(ext_add, s.eval(x2)).geq(s.eval(x1 + x2))
    if kind == "norm":
        return w["seminorm"].eval(w["X"]).is_zero() and not w["X"].is_zero()
    if kind == "concat":
        K, part, pieces = w["set"], w["partition"], w["pieces"]
        if part.canonical:
            listed = [pieces(n) for n in range(1, part.space.truncation + LOOKAHEAD + 1)]
        else:
            listed = list(pieces)
        return all(K.member(p) for p in listed) and not K.member(concatenate(part, pieces))
    if kind == "closure-agreement":
        return closure_member(w["set"], w["X"]) != w["set"].member(w["X"])
    if kind in ("convergence", "continuity"):
        u = w["family"].neighborhood(w["eps"])
        return not u.member(w["term"] - w["limit"])
    if kind == "sandwich-interior":
        U, x = w["set"], w["X"]
        return certified_interior(U, x, w["family"]) and not _lt_one(gauge(U, x).value)
    if kind == "sandwich-middle":
        U, x = w["set"], w["X"]
        return _lt_one(gauge(U, x).value) and not U.member(x)
    if kind == "sandwich-right":
        U, x = w["set"], w["X"]
        return U.member(x) and not one(x.space).geq(gauge(U, x).value)
    if kind == "reverse-half":
        U, x = w["set"], w["X"]
        return RandomVar.constant(x.space, Fraction(1, 2)).geq(gauge(U, x).value) and not U.member(x)
    if kind == "oracle":
        K, x = w["set"], w["X"]
        lo, hi = gauge(K, x, "bisection").enclosure
        s = gauge(K, x).value
        return not (s.geq(lo) and hi.geq(s))
    if kind == "scaling":
        U, eps, x = w["set"], w["eps"], w["X"]
        return not (U.member(x / eps) and eps.geq(gauge(U, x).value))
    if kind == "ess-sup-monotone":
        fam, n = w["family"], w["n"]
        r = ess_sup_seq(fam, n)
        return not r.witness[n - 1].geq(r.witness[n - 2])
    if kind == "ess-sup-upper":
        fam, n = w["family"], w["n"]
        return not ess_sup_seq(fam, w["depth"]).value.geq(fam(n))
    if kind == "ess-sup-least":
        return not w["bound"].geq(w["value"])
    if kind in _GAUGE_REPLAYS:
        return _GAUGE_REPLAYS[kind](w)
    raise ValueError(f"no replay for witness kind {kind!r}")


def _replay_localization(w):
    K, x, a = w["set"], w["X"], w["A"]
    return gauge(K, x.restrict(a)).value.restrict(a) != gauge(K, x).value.restrict(a)


def _replay_gauge_pos_homog(w):
    K, x, y = w["set"], w["X"], w["Y"]
    return gauge(K, y * x).value != y.combine(ext_mul, gauge(K, x).value)


def _replay_gauge_abs_homog(w):
    K, x, y = w["set"], w["X"], w["Y"]
    return gauge(K, y * x).value != abs(y).combine(ext_mul, gauge(K, x).value)


def _replay_gauge_subadd(w):
    K, x, y = w["set"], w["X"], w["Y"]
    return not gauge(K, x).value.combine(ext_add, gauge(K, y).value).geq(gauge(K, x + y).value)


def _replay_positive_restriction(w):
    K, x = w["set"], w["X"]
    big = 2**20 if x.space.is_finite else x.space.truncation
    tracked = None if x.space.is_finite else Event(frozenset(range(1, big + 1)))
    gx = gauge(K, x).value
    return not RandomVar.constant(x.space, Fraction(1, big)).geq(gauge_witness_seq(K, x)(big) - gx, on=tracked)


def _replay_gauge_witness(w):
    K, x, n = w["set"], w["X"], w["n"]
    z = gauge_witness_seq(K, x)
    zn = z(n)
    return not (in_L0_plus_plus(zn) and K.member(x / zn) and (n == 1 or z(n - 1).geq(zn)))


_GAUGE_REPLAYS: dict[str, Callable[[dict], bool]] = {
    "gauge-localization": _replay_localization,
    "gauge-positive-homogeneity": _replay_gauge_pos_homog,
    "gauge-absolute-homogeneity": _replay_gauge_abs_homog,
    "gauge-subadditivity": _replay_gauge_subadd,
    "gauge-witness": _replay_gauge_witness,
    "gauge-positive-restriction": _replay_positive_restriction,
}


# -- essential supremum ------------------------------------------------------------------


@dataclass
class EssSupCase:
    family: SeqFamily
    depth: int
    expect: str = "convergent"  # "convergent" | "unbounded" | "any"
    upper_bound: RandomVar | None = None


def _monotone_witness(witness: RunningMax, dense: int) -> tuple[bool, int | None]:
    prev = None
    for n in witness.check_indices(dense):
        cur = witness[n - 1]
        if prev is not None and not cur.geq(prev):
            return False, n
        prev = cur
    return True, None


def verify_ess_sup(space: AtomSpace, families: Sequence, depth: int = 2**20,
                   tol=SMALL_GAUGE_DELTA, dense: int = 256) -> Report:
    """For each family: the running-maximum witness is non-decreasing, the
    value dominates the inspected terms, a supplied upper bound dominates
    the value, and the convergence/unboundedness flags match expectations."""
    rep = Report("prop-ess-sup", "Y'≥Y*", {"space": space, "depth": depth, "tol": tol,
                                            "families": len(families)})
    fails = {"monotone": None, "upper": None, "least": None, "flags": None}
    for idx, case in enumerate(families):
        if isinstance(case, SeqFamily):
            case = EssSupCase(case, depth, "any")
        r = ess_sup_seq(case.family, case.depth, tol)
        ok, at = _monotone_witness(r.witness, dense)
        if not ok and fails["monotone"] is None:
            fails["monotone"] = {"kind": "ess-sup-monotone", "family": case.family,
                                  "name": case.family.name, "n": at}
        for n in r.witness.check_indices(dense) if not r.witness.materialised else range(1, case.depth + 1):
            if not r.value.geq(case.family(n)):
                if fails["upper"] is None:
                    fails["upper"] = {"kind": "ess-sup-upper", "family": case.family,
                                      "name": case.family.name, "n": n, "depth": case.depth}
                break
        if case.upper_bound is not None and not case.upper_bound.geq(r.value):
            fails["least"] = fails["least"] or {"kind": "ess-sup-least", "name": case.family.name,
                                                "bound": case.upper_bound, "value": r.value}
        flag_ok = (case.expect == "any"
                   or (case.expect == "convergent" and r.converged)
                   or (case.expect == "unbounded" and r.unbounded != Event.empty()))
        if not flag_ok and fails["flags"] is None:
            fails["flags"] = {"kind": "ess-sup-flags", "name": case.family.name,
                              "expect": case.expect, "converged": r.converged, "unbounded": r.unbounded}
        rep.findings.setdefault("families", []).append(
            {"name": case.family.name, "depth": case.depth, "converged": r.converged,
             "unbounded": r.unbounded, "value": r.value})
    for key, name in (("monotone", "witness-non-decreasing"), ("upper", "value-is-upper-bound"),
                      ("least", "least-upper-bound"), ("flags", "convergence-flags")):
        rep.add(name, Verdict(fails[key] is None, fails[key], len(families)))
    return rep


def seeded_families(space: AtomSpace, seed: int, count: int = 100, depth: int = 2**20) -> list[EssSupCase]:
    """Seeded monotone families: c - b/n and c - b/n^2 (convergent, sup c,
    with 0 <= b <= 1 so the second-half gain is at most 2^-20 at depth 2^20)
    and c + b n with b > 0 (divergent)."""
    smp = Sampler(derive_seed(seed, "ess-sup-families"))
    cases = []
    for k in range(count):
        c = smp.rv(space)
        kind = k % 3
        if kind == 2:
            b = smp.positive_rv(space, Fraction(1, 4), 2)
            fam = SeqFamily((lambda c, b: lambda n: c + b * n)(c, b), True, f"c+b*n#{k}")
            cases.append(EssSupCase(fam, depth, "unbounded"))
            continue
        b = smp.rv(space, lambda: smp.rational(0, 1))
        power = 1 if kind == 0 else 2
        fam = SeqFamily((lambda c, b, p: lambda n: c - b * Fraction(1, n**p))(c, b, power), True,
                        f"c-b/n^{power}#{k}")
        cases.append(EssSupCase(fam, depth, "convergent", c))
    return cases


def example_families(space: AtomSpace, depth: int = 1024) -> list[EssSupCase]:
    cases = [
        EssSupCase(SeqFamily(lambda n: RandomVar.constant(space, 1 - Fraction(1, n)), True, "1-1/n"),
                   2**20, "convergent", one(space)),
        EssSupCase(SeqFamily(lambda n: RandomVar.constant(space, n), True, "n"), depth, "unbounded"),
    ]
    if not space.is_finite:
        ind = SeqFamily(lambda n: RandomVar(space, (1,) * n, 0), True, "1_{A_1..A_n}")
        cases.append(EssSupCase(ind, space.truncation, "any", one(space)))
    return cases


# -- gauge properties --------------------------------------------------------------------


def verify_gauge_properties(K: L0Set, seed: int = 0, n: int = 500, n_seminorm: int = 1000,
                            witness_terms: int = 16) -> Report:
    """The six gauge properties plus the seminorm-axiom check of GaugeOf(K).

    Raises PrerequisiteFailed unless K is convex and absorbent.
    """
    space = K.space
    rep = Report("prop-gauge-props", "p_K(X)=ess.inf{Y∈L⁰₊: X∈YK}",
                 {"set": K, "seed": seed, "samples": n, "seminorm_samples": n_seminorm})
    convex = is_L0_convex(K, derive_seed(seed, "convex"), n)
    absorbent = check_absorbent(K, derive_seed(seed, "absorbent"), n)
    if not convex.passed or not absorbent.passed:
        raise PrerequisiteFailed(f"{K} is not convex and absorbent: "
                                 f"{(convex.witness or absorbent.witness)['kind']}")
    rep.add("convex", convex)
    rep.add("absorbent", absorbent)
    balanced = rep.add("balanced", is_L0_balanced(K, derive_seed(seed, "balanced"), n), None)

    smp = Sampler(derive_seed(seed, "gauge-props"))
    fail: dict[str, dict | None] = {k: None for k in
                                    ("localization", "positive", "homogeneity", "subadditivity",
                                     "witness", "absolute")}
    for k in range(n):
        x, y = smp.rv(space), smp.rv(space)
        a = smp.event(space)
        gx = gauge(K, x).value
        # 1. localization
        if fail["localization"] is None and gauge(K, x.restrict(a)).value.restrict(a) != gx.restrict(a):
            fail["localization"] = {"kind": "gauge-localization", "set": K, "X": x, "A": a}
        # 3. positive homogeneity
        yp = abs(y)
        if fail["homogeneity"] is None and gauge(K, yp * x).value != yp.combine(ext_mul, gx):
            fail["homogeneity"] = {"kind": "gauge-positive-homogeneity", "set": K, "X": x, "Y": yp}
        # 4. subadditivity
        if fail["subadditivity"] is None:
            gy = gauge(K, y).value
            if not gx.combine(ext_add, gy).geq(gauge(K, x + y).value):
                fail["subadditivity"] = {"kind": "gauge-subadditivity", "set": K, "X": x, "Y": y}
        # 6. absolute homogeneity, only claimed for balanced sets
        if balanced.passed and fail["absolute"] is None:
            if gauge(K, y * x).value != abs(y).combine(ext_mul, gx):
                fail["absolute"] = {"kind": "gauge-absolute-homogeneity", "set": K, "X": x, "Y": y}
        # 5. witness sequence
        if fail["witness"] is None and gx.is_real() and k < max(50, n // 5):
            z = gauge_witness_seq(K, x)
            terms = list(range(1, witness_terms + 1))
            if not space.is_finite:
                terms += [space.truncation, space.truncation + 1]
            prev = None
            for m in terms:
                zm = z(m)
                mono = prev is None or prev[0] != m - 1 or prev[1].geq(zm)
                if not (in_L0_plus_plus(zm) and K.member(x / zm) and mono):
                    fail["witness"] = {"kind": "gauge-witness", "set": K, "X": x, "n": m}
                    break
                prev = (m, zm)
        # 2. restriction to L0++: the admissible positive Z_n close in on the value
        if fail["positive"] is None and gx.is_real() and k < max(50, n // 5):
            # finite spaces: uniform rate at n = 2^20; countable: atoms 1..n at n = truncation
            big = 2**20 if space.is_finite else space.truncation
            gap = gauge_witness_seq(K, x)(big) - gx
            bound = RandomVar.constant(space, Fraction(1, big))
            tracked = None if space.is_finite else Event(frozenset(range(1, big + 1)))
            if not bound.geq(gap, on=tracked):
                fail["positive"] = {"kind": "gauge-positive-restriction", "set": K, "X": x}
            elif space.is_finite and K.decoupled and k < 40:
                pos = gauge(K, x, "bisection", positive_only=True).enclosure
                nonneg = gauge(K, x, "bisection", positive_only=False).enclosure
                tol = RandomVar.constant(space, DEFAULT_TOL)
                if not (tol.geq(abs(pos[1] - nonneg[1])) and pos[1].geq(nonneg[0])):
                    fail["positive"] = {"kind": "gauge-positive-restriction", "set": K, "X": x}
    rep.add("1-localization", Verdict(fail["localization"] is None, fail["localization"], n))
    rep.add("2-positive-restriction", Verdict(fail["positive"] is None, fail["positive"], n))
    rep.add("3-positive-homogeneity", Verdict(fail["homogeneity"] is None, fail["homogeneity"], n))
    rep.add("4-subadditivity", Verdict(fail["subadditivity"] is None, fail["subadditivity"], n))
    rep.add("5-witness-sequence", Verdict(fail["witness"] is None, fail["witness"], n))
    if balanced.passed:
        rep.add("6-absolute-homogeneity", Verdict(fail["absolute"] is None, fail["absolute"], n))
    rep.add("gauge-is-seminorm",
            check_seminorm_axioms(GaugeOf(K), space, derive_seed(seed, "seminorm"), n_seminorm))
    if isinstance(K, CounterexampleU):
        rep.findings["gauge_identically_zero_on_samples"] = all(
            gauge(K, smp.rv(space)).value.is_zero() for _ in range(20))
    return rep


def verify_gauge_oracle(seed: int = 0, n: int = 200, max_atoms: int = 6, tol=DEFAULT_TOL) -> Report:
    """Symbolic gauge versus the bisection enclosure on small finite spaces."""
    rep = Report("gauge-oracle-agreement", "p_K(X)=ess.inf{Y∈L⁰₊: X∈YK}",
                 {"seed": seed, "pairs": n, "max_atoms": max_atoms, "tol": tol})
    smp = Sampler(derive_seed(seed, "oracle"))
    failure = None
    worst = Fraction(0)
    for _ in range(n):
        m = smp.integer(1, max_atoms)
        weights = [smp.integer(1, 9) for _ in range(m)]
        space = make_finite_space([Fraction(w, sum(weights)) for w in weights])
        if smp.rng.random() < 0.5:
            Q: list[Seminorm] = [AbsValue()] if smp.rng.random() < 0.7 else []
            if not Q or smp.rng.random() < 0.5:
                Q.append(Weighted(smp.nonneg_rv(space)))
            K: L0Set = BallSet(Ball(tuple(Q), smp.positive_rv(space)))
        else:
            K = AtomDecomposable(smp.positive_rv(space))
        x = smp.rv(space)
        s = gauge(K, x).value
        lo, hi = gauge(K, x, "bisection", tol).enclosure
        width = max(h - l for l, h in zip(lo.values(), hi.values()))
        worst = max(worst, width)
        if failure is None and not (s.geq(lo) and hi.geq(s) and width <= tol):
            failure = {"kind": "oracle", "set": K, "X": x, "symbolic": s, "lo": lo, "hi": hi}
    rep.add("symbolic-inside-enclosure", Verdict(failure is None, failure, n))
    rep.findings["max_enclosure_width"] = worst
    return rep


# -- sandwich -------------------------------------------------------------------------------


def _sandwich_probes(U: L0Set) -> list[RandomVar]:
    space = U.space
    if isinstance(U, CounterexampleU):
        return [U.eps + 1]
    if isinstance(U, BallSet):
        # a point on the boundary: sup ||X|| = eps
        d = RandomVar.constant(space, 1)
        return [d * (U.ball.eps / U.ball.sup_eval(d))] if U.ball.sup_eval(d).gt(0) else []
    if isinstance(U, AtomDecomposable):
        return [U.r]
    return []


def verify_sandwich(U: L0Set, fam: SeminormFamily | None = None, seed: int = 0, n: int = 500) -> Report:
    """interior => p<1 => member => p<=1 on samples.

    The middle link is expected to hold exactly when U is closed under
    countable concatenations (checked here, not assumed).
    """
    rep = Report("prop-sandwich", "Ů ⊂ {p_U<1} ⊂ U ⊂ {p_U≤1}", {"set": U, "seed": seed, "samples": n})
    closed = is_concat_closed(U, derive_seed(seed, "closed"))
    rep.add("concat-closed", closed, None)
    if fam is None and isinstance(U, BallSet):
        fam = SeminormFamily(U.ball.Q)
    smp = Sampler(derive_seed(seed, "sandwich"))
    space = U.space
    probes = _sandwich_probes(U)
    fails: dict[str, dict | None] = {"interior": None, "middle": None, "right": None}
    for k in range(n):
        if k < len(probes):
            x = probes[k]
        elif k % 3 == 0:
            x = smp.rv(space)
        else:
            x = U.sample_member(smp) * smp.rational(0, 2)
        g = gauge(U, x).value
        is_member = U.member(x)
        if isinstance(U, BallSet) and fail_none(fails, "interior"):
            if certified_interior(U, x, fam) and not _lt_one(g):
                fails["interior"] = {"kind": "sandwich-interior", "set": U, "X": x, "family": fam}
        if fail_none(fails, "middle") and _lt_one(g) and not is_member:
            fails["middle"] = {"kind": "sandwich-middle", "set": U, "X": x, "gauge": g}
        if fail_none(fails, "right") and is_member and not one(space).geq(g):
            fails["right"] = {"kind": "sandwich-right", "set": U, "X": x, "gauge": g}
    if isinstance(U, BallSet):
        rep.add("interior-below-one", Verdict(fails["interior"] is None, fails["interior"], n))
    rep.add("below-one-in-set", Verdict(fails["middle"] is None, fails["middle"], n), closed.passed)
    rep.add("set-below-or-at-one", Verdict(fails["right"] is None, fails["right"], n))
    return rep


def fail_none(fails: dict, key: str) -> bool:
    return fails[key] is None


# -- characterization ------------------------------------------------------------------------


def _base_conditions(U: L0Set, seed: int, n: int) -> dict[str, Verdict]:
    return {
        "convex": is_L0_convex(U, derive_seed(seed, "c"), n),
        "absorbent": check_absorbent(U, derive_seed(seed, "a"), n),
        "balanced": is_L0_balanced(U, derive_seed(seed, "b"), n),
        "concat-closed": is_concat_closed(U, derive_seed(seed, "cc")),
    }


def _displayed_computation(ball: BallSet, smp: Sampler, pastes: int) -> dict | None:
    """||sum 1_{A_n} X_n|| = sum 1_{A_n} ||X_n|| <= eps on sampled pastes."""
    space = ball.space
    for k in range(pastes + 1):
        if k == pastes:
            part = canonical_partition(space)
            if part.canonical:
                head = [ball.sample_member(smp) for _ in range(space.truncation)]
                last = ball.sample_member(smp)
                pieces = (lambda h, l: lambda m: h[m - 1] if m <= len(h) else l)(head, last)
            else:
                pieces = [ball.sample_member(smp) for _ in range(len(part))]
        else:
            part = smp.partition(space)
            pieces = [ball.sample_member(smp) for _ in range(len(part))]
        x = concatenate(part, pieces)
        for s in ball.ball.Q:
            if callable(pieces):
                norms = (lambda p: lambda m: s.eval(p(m)))(pieces)
            else:
                norms = [s.eval(p) for p in pieces]
            lhs, rhs = s.eval(x), concatenate(part, norms)
            if lhs != rhs or not ball.ball.eps.geq(lhs):
                return {"kind": "concat", "set": ball, "partition": part, "pieces": pieces, "paste": x}
    return None


def verify_characterization(base: Sequence[L0Set], fam: SeminormFamily, space: AtomSpace | None = None,
                            seed: int = 0, n: int = 500, n_eps: int = 4, pastes: int = 100) -> Report:
    """Both directions of the characterization on samples.

    Forward: balls of ``fam`` (each single seminorm and the whole family,
    sampled radii) satisfy all four base conditions and the paste identity.
    Reverse: for every base element meeting all four conditions,
    U ⊂ {p_U <= 1}, {p_U <= 1/2} ⊂ U, and the scaling step
    (eps U ⊂ {p_U <= eps}).  Base elements failing a condition are
    reported but not held to the reverse inclusions.
    """
    space = space or (base[0].space if base else None)
    rep = Report("thm-characterization", "U = Ū^Π",
                 {"family": fam, "base": list(base), "seed": seed, "samples": n, "pastes": pastes})
    smp = Sampler(derive_seed(seed, "char"))
    subsets = [(s,) for s in fam.seminorms]
    if len(fam.seminorms) > 1:
        subsets.append(tuple(fam.seminorms))
    fwd_fail = None
    ball_count = 0
    for Q in subsets:
        for j in range(n_eps):
            eps = RandomVar.constant(space, 1) if j == 0 else smp.positive_rv(space)
            ball = BallSet(Ball(Q, eps))
            ball_count += 1
            conds = _base_conditions(ball, derive_seed(seed, f"ball{ball_count}"), min(n, 200))
            conds["concat-closed"] = is_concat_closed(ball, derive_seed(seed, f"cc{ball_count}"), pastes)
            for cname, v in conds.items():
                if not v.passed and fwd_fail is None:
                    fwd_fail = dict(v.witness or {"kind": cname}, condition=cname)
            if fwd_fail is None:
                fwd_fail = _displayed_computation(ball, smp, min(pastes, 20))
    rep.add("forward-balls-satisfy-conditions", Verdict(fwd_fail is None, fwd_fail, ball_count))

    for b_idx, U in enumerate(base):
        conds = _base_conditions(U, derive_seed(seed, f"base{b_idx}"), n)
        qualified = all(v.passed for v in conds.values())
        for cname, v in conds.items():
            rep.add(f"base[{U}]-{cname}", v, None)
        rep.findings[str(U)] = {c: v.passed for c, v in conds.items()}
        expect = True if qualified else None
        inc1 = inc2 = scale = None
        for k in range(n):
            m = U.sample_member(smp)
            if inc1 is None and not one(space).geq(gauge(U, m).value):
                inc1 = {"kind": "sandwich-right", "set": U, "X": m}
            d = smp.rv(space)
            g = gauge(U, d).value
            half = d * g.combine(lambda gi: Fraction(1, 2) / gi if 0 < gi < float("inf") else 1)
            if inc2 is None and RandomVar.constant(space, Fraction(1, 2)).geq(gauge(U, half).value) \
                    and not U.member(half):
                inc2 = {"kind": "reverse-half", "set": U, "X": half}
            if k < 50 and scale is None:
                eps = smp.positive_rv(space)
                xp = U.scaled(eps).sample_member(smp)
                if not (U.member(xp / eps) and eps.geq(gauge(U, xp).value)):
                    scale = {"kind": "scaling", "set": U, "eps": eps, "X": xp}
        rep.add(f"reverse[{U}]-U-in-p<=1", Verdict(inc1 is None, inc1, n), expect)
        rep.add(f"reverse[{U}]-p<=1/2-in-U", Verdict(inc2 is None, inc2, n), expect)
        rep.add(f"reverse[{U}]-scaling", Verdict(scale is None, scale, min(n, 50)), expect)
    return rep


# -- continuity ---------------------------------------------------------------------------------


def verify_continuity(space: AtomSpace, seed: int = 0, n: int = 50) -> Report:
    rep = Report("defn-module-continuity", "L⁰[|·|]×E[τ]→E[τ], (Y,X)↦YX", {"space": space, "seed": seed,
                                                                          "samples": n})
    smp = Sampler(derive_seed(seed, "weights"))
    abs_fam = SeminormFamily((AbsValue(),), "abs")
    weighted = SeminormFamily((Weighted(smp.nonneg_rv(space)), Weighted(smp.nonneg_rv(space))), "weighted")
    for label, topo in (("abs", abs_fam), ("weighted", weighted), ("counterexample-base", CounterexampleBase())):
        rep.add(label, verify_module_continuity(topo, space, derive_seed(seed, label), n))
    rep.notes.append("convergence is decided against the default probe radii 1, 1/2, 2^-10, 2^-20, <1|2^-20>")
    return rep


# -- counterexample ------------------------------------------------------------------------------


def run_counterexample(truncation: int = 64, seed: int = 42, eps=1, n: int = 500,
                       delta=SMALL_GAUGE_DELTA) -> Report:
    """Reproduce the four findings for U_eps on the geometric space.

    (a) U_eps is convex, absorbent and balanced;
    (b) the pieces (eps+1) 1_{A_n} are members but their paste eps+1 is not;
    (c) for every atom m up to the truncation a verified Y with Y_m = delta
        and 1/Y in U_eps bounds the gauge of 1 at m by delta;
    (d) X = eps+1 has gauge 0 < 1 yet is not a member.
    """
    space = make_geometric_space(truncation)
    eps = eps if isinstance(eps, RandomVar) else RandomVar.constant(space, eps)
    if eps.space != space:
        eps = RandomVar(space, eps.prefix, eps.tail)
    U = CounterexampleU(eps)
    rep = Report("example-counterexample", "ε+1∉U_ε; (ε+1)1_{A_n}∈U_ε; p_U(X)=0",
                 {"truncation": truncation, "seed": seed, "eps": eps, "samples": n, "delta": delta})

    # (a)
    a = [rep.add("a-convex", is_L0_convex(U, derive_seed(seed, "a-convex"), n)),
         rep.add("a-absorbent", check_absorbent(U, derive_seed(seed, "a-absorbent"), n)),
         rep.add("a-balanced", is_L0_balanced(U, derive_seed(seed, "a-balanced"), n))]

    # (b)
    pieces, desc = stress_pieces(U)
    checked = range(1, truncation + LOOKAHEAD + 1)
    pieces_in = all(U.member(pieces(m)) for m in checked)
    paste = concatenate(canonical_partition(space), pieces)
    closed = rep.add("b-concat-closed", is_concat_closed(U, derive_seed(seed, "b")), False)
    b_ok = pieces_in and paste == eps + 1 and not U.member(paste) and closure_member(U, paste)

    # (c)
    certs = []
    cert_fail = None
    for m in range(1, truncation + 1):
        y = small_gauge_witness(U, m, delta)
        x = 1 / y
        if not (U.member(x) and y.at(m) == delta and in_L0_plus_plus(y) and y * x == one(space)):
            cert_fail = cert_fail or {"kind": "member", "set": U, "X": x, "expected": True}
        certs.append({"atom": m, "bound": delta, "Y": y})
    g1 = gauge(U, one(space))
    stair = g1.witness_seq
    for m in range(1, truncation + 2):
        z = stair(m)
        if not (U.member(1 / z) and in_L0_plus_plus(z)) and cert_fail is None:
            cert_fail = {"kind": "gauge-witness", "set": U, "X": one(space), "n": m}
    rep.add("c-gauge-certificates", Verdict(cert_fail is None, cert_fail, truncation))

    # (d)
    x = eps + 1
    gx = gauge(U, x).value
    violation = _lt_one(gx) and not U.member(x)
    middle = Verdict(not violation,
                     {"kind": "sandwich-middle", "set": U, "X": x, "gauge": gx} if violation else None, 1)
    rep.add("d-below-one-in-set", middle, False)

    rep.findings = {
        "a_base_legitimate": all(v.passed for v in a),
        "b_concatenation_failure": {
            "affirmative": b_ok and not closed.passed,
            "pieces": desc, "pieces_checked": len(checked), "pieces_members": pieces_in,
            "paste": paste, "paste_member": U.member(paste), "paste_in_closure": closure_member(U, paste),
        },
        "c_gauge_collapse": {
            "affirmative": cert_fail is None and g1.value.is_zero(),
            "certified_atoms": [1, truncation], "bound": delta, "certificates": certs,
            "symbolic_gauge_of_one": g1.value,
            "reduction": "p(X) = |X| p(1) on each atom, so p(X)_m <= |X_m| * bound",
        },
        "d_seminorm_ball_mismatch": {
            "affirmative": violation, "X": x, "gauge": gx, "member": U.member(x),
        },
    }
    rep.notes.append("only the canonical base {U_eps} is checked; other bases generating the same "
                     "topology are not examined")
    rep.notes.append(f"per-atom gauge certificates cover atoms 1..{truncation}")
    return rep


# -- suites ------------------------------------------------------------------------------------------

SUITES = ("all", "ess-sup", "gauge", "sandwich", "characterization", "counterexample")


def standard_sets(space: AtomSpace) -> list[L0Set]:
    two = RandomVar.constant(space, 2)
    smp = Sampler(derive_seed(0, f"standard-sets:{space}"))
    return [
        BallSet(Ball((AbsValue(),), two)),
        AtomDecomposable(smp.positive_rv(space)),
        CounterexampleU(one(space)),
    ]


def run_suite(suite: str, space: AtomSpace, seed: int = 42, truncation: int = 64, eps=1,
              samples: int = 500, tol=DEFAULT_TOL) -> list[Report]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    geo = make_geometric_space(truncation)
    reports: list[Report] = []
    if suite in ("all", "ess-sup"):
        cases = seeded_families(space, seed) + example_families(space)
        reports.append(verify_ess_sup(space, cases))
    if suite in ("all", "gauge"):
        for K in standard_sets(space):
            reports.append(verify_gauge_properties(K, derive_seed(seed, f"gauge:{K}"), samples))
        reports.append(verify_gauge_oracle(derive_seed(seed, "oracle"), tol=tol))
    if suite in ("all", "sandwich"):
        for K in standard_sets(space):
            reports.append(verify_sandwich(K, None, derive_seed(seed, f"sandwich:{K}"), samples))
    if suite in ("all", "characterization"):
        fam = SeminormFamily((AbsValue(),), "abs")
        reports.append(verify_characterization(standard_sets(space), fam, space,
                                               derive_seed(seed, "characterization"), samples))
        reports.append(verify_continuity(space, derive_seed(seed, "continuity")))
    if suite in ("all", "counterexample"):
        if isinstance(eps, RandomVar):
            eps = RandomVar(geo, eps.prefix, eps.tail)
        reports.append(run_counterexample(truncation, seed, eps, samples))
    return reports
