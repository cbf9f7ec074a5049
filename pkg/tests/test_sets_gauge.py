from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l0lab.errors import EngineUnsupported, NotAbsorbedHere
from l0lab.l0_core import INF, RandomVar, in_L0_plus_plus, one, zero
from l0lab.prob_space import Event, make_finite_space, make_geometric_space
from l0lab.seminorms import AbsValue, Ball, SeminormFamily, Weighted
from l0lab.sets_gauge import (
    AtomDecomposable,
    BallSet,
    CounterexampleU,
    certified_interior,
    check_absorbent,
    closure_member,
    gauge,
    gauge_witness_seq,
    is_concat_closed,
    is_L0_absorbent,
    is_L0_balanced,
    is_L0_convex,
    member,
    outside_atoms,
    outside_lower_bound_check,
    small_gauge_witness,
)
from l0lab.testing import TwoPointSet, ZeroSet, translated_ball

TOL = Fraction(1, 2**40)


def vec(space, *vals):
    return RandomVar.vector(space, vals)


def ball(space, eps, *Q):
    return BallSet(Ball(Q or (AbsValue(),), RandomVar.constant(space, eps)))


def cex(space, eps=1):
    return CounterexampleU(RandomVar.constant(space, eps))


class TestMembership:
    def test_single_exception(self, geo):
        U = cex(geo)
        assert member(U, RandomVar.eventually(geo, [5], Fraction(1, 2)))
        assert U.exception_set(RandomVar.eventually(geo, [5], Fraction(1, 2))) == frozenset({1})

    def test_constant_two_not_member(self, geo):
        assert not member(cex(geo), RandomVar.constant(geo, 2))

    def test_ball_boundary(self, u3):
        assert member(ball(u3, 1), vec(u3, 1, 1, 1))

    def test_atom_decomposable(self, u3):
        K = AtomDecomposable(vec(u3, 1, 2, 3))
        assert member(K, vec(u3, -1, 2, 0)) and not member(K, vec(u3, 0, 0, 4))


class TestPredicates:
    @pytest.mark.parametrize("make", [lambda s: ball(s, 1), lambda s: cex(s)])
    def test_convex_balanced(self, geo, make):
        K = make(geo)
        assert is_L0_convex(K, seed=1, n=200).passed
        assert is_L0_balanced(K, seed=2, n=200).passed
        assert check_absorbent(K, seed=3, n=200).passed

    def test_two_point_set_not_convex(self, u3):
        v = is_L0_convex(TwoPointSet(u3), seed=4, n=50)
        assert not v.passed
        assert v.witness["Y"] == RandomVar.constant(u3, Fraction(1, 2))

    def test_translated_ball_not_balanced(self, u3):
        v = is_L0_balanced(translated_ball(u3), seed=5, n=50)
        assert not v.passed
        assert v.witness["Y"] == zero(u3)

    def test_ball_absorbs(self, u3):
        K = ball(u3, 1)
        x = vec(u3, 4, 2, 0)
        y = is_L0_absorbent(K, x)
        assert in_L0_plus_plus(y) and K.member(x / y)
        assert K.member(x / vec(u3, 5, 3, 1))

    def test_counterexample_absorber(self, geo):
        U = cex(geo, 2)
        x = RandomVar.eventually(geo, [9, -3], 7)
        y = is_L0_absorbent(U, x)
        assert y == (abs(x) / 2).maximum(1)
        assert U.member(x / y)

    def test_zero_set_absorbs_nothing(self, u3):
        with pytest.raises(NotAbsorbedHere):
            is_L0_absorbent(ZeroSet(u3), one(u3))


class TestConcatenation:
    def test_ball_closed(self, geo):
        K = ball(geo, 1)
        assert is_concat_closed(K, seed=6, n=100).passed
        assert not closure_member(K, RandomVar.constant(geo, 2))

    def test_atom_decomposable_closed(self, geo):
        assert is_concat_closed(AtomDecomposable(RandomVar.eventually(geo, [1, 3], 2)), seed=7).passed

    def test_counterexample_not_closed(self, geo):
        v = is_concat_closed(cex(geo), seed=8)
        assert not v.passed
        w = v.witness
        assert w["kind"] == "concat"
        assert w["paste"] == RandomVar.constant(geo, 2)
        assert all(cex(geo).member(w["pieces"](n)) for n in range(1, 129))

    def test_counterexample_closure_is_everything(self, geo):
        U = cex(geo)
        assert closure_member(U, RandomVar.constant(geo, 2))
        assert closure_member(U, RandomVar.eventually(geo, [100, -7], 31))

    def test_finite_space_counterexample_is_closed(self, u3):
        # on a finite space every exception set is finite, so U_eps is everything
        assert is_concat_closed(cex(u3), seed=9, n=30).passed


class TestGauge:
    def test_ball(self, u3):
        K = ball(u3, 2)
        x = vec(u3, 4, 2, 0)
        assert gauge(K, x).value == vec(u3, 2, 1, 0)
        r = gauge(K, x, "bisection")
        lo, hi = r.enclosure
        assert hi.geq(vec(u3, 2, 1, 0)) and vec(u3, 2, 1, 0).geq(lo)
        assert (hi - lo).geq(0) and RandomVar.constant(u3, TOL).geq(hi - lo)

    def test_counterexample_gauge_of_one(self, geo):
        assert gauge(cex(geo, Fraction(1, 3)), one(geo)).value == zero(geo)

    @pytest.mark.parametrize("make", [lambda s: ball(s, 1), lambda s: cex(s),
                                      lambda s: AtomDecomposable(RandomVar.constant(s, 3))])
    def test_gauge_of_zero(self, geo, make):
        assert gauge(make(geo), zero(geo)).value == zero(geo)

    def test_atom_decomposable_conventions(self, u3):
        K = AtomDecomposable(vec(u3, 2, 0, 1))
        g = gauge(K, vec(u3, 1, 0, 3)).value
        assert g == vec(u3, Fraction(1, 2), 0, 3)
        assert gauge(K, vec(u3, 1, 5, 0)).value.at(2) == INF

    def test_unknown_engine(self, u3):
        with pytest.raises(EngineUnsupported):
            gauge(ball(u3, 1), one(u3), "magic")

    def test_bisection_needs_finite_space(self, geo):
        with pytest.raises(EngineUnsupported):
            gauge(ball(geo, 1), one(geo), "bisection")

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.fractions(-6, 6, max_denominator=8), min_size=3, max_size=3),
           st.fractions(Fraction(1, 8), 4, max_denominator=8))
    def test_symbolic_inside_enclosure(self, xs, eps):
        s = make_finite_space([Fraction(1, 3)] * 3)
        K = BallSet(Ball((AbsValue(), Weighted(vec(s, 1, 2, Fraction(1, 2)))), RandomVar.constant(s, eps)))
        x = RandomVar.vector(s, xs)
        sym = gauge(K, x).value
        lo, hi = gauge(K, x, "bisection").enclosure
        assert hi.geq(sym) and sym.geq(lo)


class TestWitnessSequences:
    def test_ball_sequence(self, u3):
        K = ball(u3, 2)
        x = vec(u3, 4, 2, 0)
        z = gauge_witness_seq(K, x)
        for n in range(1, 20):
            assert z(n) == vec(u3, 2, 1, 0) + Fraction(1, n)
            assert K.member(x / z(n))

    def test_staircase(self, geo):
        U = cex(geo)
        z = gauge_witness_seq(U, one(geo))
        for n in range(1, 70):
            assert U.member(1 / z(n))
            assert all(z(n).at(i) == Fraction(1, n) for i in range(1, n + 1))
            if n > 1:
                assert z(n - 1).geq(z(n))

    def test_zero(self, geo):
        z = gauge_witness_seq(cex(geo), zero(geo))
        assert z(4) == RandomVar.constant(geo, Fraction(1, 4))

    def test_small_witness_first_atom(self, geo):
        U = cex(geo)
        y = small_gauge_witness(U, 1, Fraction(1, 2**10))
        assert y == RandomVar.eventually(geo, [Fraction(1, 2**10)], 1)
        assert U.member(1 / y)

    def test_small_witness_third_atom(self, geo):
        U = cex(geo)
        y = small_gauge_witness(U, 3, Fraction(1, 2**20))
        assert y.at(3) == Fraction(1, 2**20)
        assert all(y.at(i) == 1 for i in (1, 2, 4, 100))
        assert U.member(1 / y)

    def test_small_witness_delta_one(self, geo):
        assert small_gauge_witness(cex(geo), 5, 1) == one(geo)

    def test_small_witness_nonconstant_eps(self, geo):
        U = CounterexampleU(RandomVar.eventually(geo, [2], Fraction(1, 2)))
        for m in (1, 2, 64):
            y = small_gauge_witness(U, m, Fraction(1, 2**20))
            assert U.member(1 / y) and y.at(m) == Fraction(1, 2**20)


class TestInteriorAndOutside:
    def test_interior(self, u3):
        K, fam = ball(u3, 1), SeminormFamily((AbsValue(),))
        half = Fraction(1, 2)
        assert certified_interior(K, vec(u3, half, half, half), fam)
        assert not certified_interior(K, vec(u3, 1, half, half), fam)
        assert certified_interior(K, zero(u3), fam)

    def test_interior_only_for_balls(self, geo):
        with pytest.raises(EngineUnsupported):
            certified_interior(cex(geo), zero(geo), SeminormFamily((AbsValue(),)))

    def test_outside_all_atoms(self, u3):
        v = outside_lower_bound_check(ball(u3, 1), vec(u3, 2, 2, 2))
        assert v.passed
        assert v.notes["B"] == Event.finite_set(1, 2, 3)
        assert v.notes["gauge"] == vec(u3, 2, 2, 2)

    def test_outside_one_atom(self, u3):
        half = Fraction(1, 2)
        v = outside_lower_bound_check(ball(u3, 1), vec(u3, 2, half, half))
        assert v.passed and v.notes["B"] == Event.finite_set(1)

    def test_member_vacuous(self, u3):
        v = outside_lower_bound_check(ball(u3, 1), vec(u3, 1, 0, -1))
        assert v.passed and v.notes["B"] == Event.empty()

    def test_outside_atoms_cofinite(self):
        g = make_geometric_space(8)
        assert outside_atoms(ball(g, 1), RandomVar.eventually(g, [0], 2)) == Event.cofinite_set(1)
