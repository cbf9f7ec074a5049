from fractions import Fraction

import pytest

from l0lab.errors import EngineUnsupported
from l0lab.l0_core import RandomVar, zero
from l0lab.seminorms import (
    AbsValue,
    Ball,
    GaugeOf,
    MapSeminorm,
    SeminormFamily,
    Weighted,
    ball_member,
    check_seminorm_axioms,
    default_probes,
    eval_seminorm,
    seq_converges,
    verify_module_continuity,
)
from l0lab.sets_gauge import BallSet, CounterexampleBase, CounterexampleU, gauge


def vec(space, *vals):
    return RandomVar.vector(space, vals)


class TestEval:
    def test_abs(self, u3):
        assert eval_seminorm(AbsValue(), vec(u3, -1, 2, 0)) == vec(u3, 1, 2, 0)

    def test_weighted(self, u3):
        assert eval_seminorm(Weighted(vec(u3, 2, 1, 1)), vec(u3, 1, 1, 1)) == vec(u3, 2, 1, 1)

    def test_negative_weight_rejected(self, u3):
        with pytest.raises(ValueError):
            Weighted(vec(u3, -1, 1, 1))

    def test_gauge_of_ball(self, u3):
        K = BallSet(Ball((AbsValue(),), RandomVar.constant(u3, 2)))
        x = vec(u3, 4, 2, 0)
        assert eval_seminorm(GaugeOf(K), x) == vec(u3, 2, 1, 0)
        lo, hi = gauge(K, x, "bisection").enclosure
        assert hi.geq(vec(u3, 2, 1, 0)) and vec(u3, 2, 1, 0).geq(lo)

    def test_gauge_of_counterexample_is_zero(self, geo):
        U = CounterexampleU(RandomVar.constant(geo, 1))
        assert GaugeOf(U).eval(RandomVar.eventually(geo, [7, -3], 2)) == zero(geo)


class TestBall:
    def test_boundary_included(self, u3):
        assert ball_member(Ball((AbsValue(),), RandomVar.constant(u3, 1)), vec(u3, 1, 1, 1))

    def test_violation_on_first_atom(self, geo):
        b = Ball((AbsValue(),), RandomVar.constant(geo, 1))
        assert not ball_member(b, RandomVar.eventually(geo, [2], 0))

    def test_sup_over_q(self, u3):
        b = Ball((AbsValue(), Weighted(vec(u3, 2, 1, 1))), RandomVar.constant(u3, 1))
        assert ball_member(b, vec(u3, Fraction(1, 2), 1, 1))
        assert not ball_member(b, vec(u3, Fraction(3, 4), 1, 1))

    def test_radius_must_be_positive(self, u3):
        with pytest.raises(ValueError):
            Ball((AbsValue(),), vec(u3, 1, 0, 1))

    def test_family_neighborhood(self, u3):
        fam = SeminormFamily((AbsValue(),), "abs")
        assert fam.neighborhood(RandomVar.constant(u3, 1)).member(vec(u3, -1, 0, 1))


class TestAxiomChecker:
    def test_abs_is_a_norm(self, u3):
        v = check_seminorm_axioms(AbsValue(), u3, seed=1, n_samples=300)
        assert v.passed and v.notes["norm_holds"]

    def test_weighted_is_seminorm_not_norm(self, u3):
        v = check_seminorm_axioms(Weighted(vec(u3, 1, 0, 2)), u3, seed=2, n_samples=300)
        assert v.passed
        assert not v.notes["norm_holds"]
        assert v.notes["norm_witness"]["X"].at(2) != 0

    def test_zero_map(self, geo):
        v = check_seminorm_axioms(MapSeminorm(lambda x: zero(x.space), "zero"), geo, seed=3)
        assert v.passed
        assert not v.notes["norm_holds"]
        assert not v.notes["norm_witness"]["X"].is_zero()

    def test_positive_part_fails_homogeneity(self, u3):
        v = check_seminorm_axioms(MapSeminorm(lambda x: x.maximum(0), "pos"), u3, seed=4)
        assert not v.passed
        assert v.witness["kind"] == "homogeneity"
        assert v.witness["Y"] == RandomVar.constant(u3, -1)

    def test_square_fails(self, u3):
        v = check_seminorm_axioms(MapSeminorm(lambda x: x * x, "sq"), u3, seed=5)
        assert not v.passed

    def test_gauge_of_is_seminorm(self, u3):
        K = BallSet(Ball((AbsValue(),), RandomVar.constant(u3, 2)))
        assert check_seminorm_axioms(GaugeOf(K), u3, seed=6, n_samples=300).passed


class TestConvergence:
    def test_default_probes(self, geo):
        probes = default_probes(geo)
        assert len(probes) == 5
        assert probes[-1] == RandomVar.eventually(geo, [1], Fraction(1, 2**20))

    def test_uniform_shrinkage(self, geo):
        fam = SeminormFamily((AbsValue(),))
        x = RandomVar.eventually(geo, [3, -1], 2)
        assert seq_converges(lambda n: x + Fraction(1, 2**n), x, fam, 64)

    def test_sliding_bump_diverges_in_abs(self, geo):
        fam = SeminormFamily((AbsValue(),))
        bump = lambda n: RandomVar.eventually(geo, (0,) * (n - 1) + (1,), 0)
        assert not seq_converges(bump, zero(geo), fam, 64, [RandomVar.constant(geo, Fraction(1, 2))])

    def test_sliding_bump_converges_in_counterexample_base(self, geo):
        bump = lambda n: RandomVar.eventually(geo, (0,) * (n - 1) + (5,), 0)
        assert seq_converges(bump, zero(geo), CounterexampleBase(), 64)

    def test_constant_sequence(self, u3):
        x = vec(u3, 1, 2, 3)
        assert seq_converges(lambda n: x, x, SeminormFamily((AbsValue(),)), 32)

    def test_nonpositive_probe_rejected(self, u3):
        with pytest.raises(ValueError):
            seq_converges(lambda n: zero(u3), zero(u3), SeminormFamily((AbsValue(),)), 4,
                          [RandomVar.constant(u3, 0)])


class TestModuleContinuity:
    def test_abs(self, geo):
        assert verify_module_continuity(SeminormFamily((AbsValue(),)), geo, seed=7, n=20).passed

    def test_weighted_family(self, u3):
        fam = SeminormFamily((AbsValue(), Weighted(vec(u3, 3, 0, 1))))
        assert verify_module_continuity(fam, u3, seed=8, n=20).passed

    def test_counterexample_base(self, geo):
        assert verify_module_continuity(CounterexampleBase(), geo, seed=9, n=20).passed

    def test_gauge_engine_needs_decoupling(self, u3):
        from l0lab.sets_gauge import gauge as g

        K = BallSet(Ball((MapSeminorm(abs, "abs2"),), RandomVar.constant(u3, 1)))
        with pytest.raises(EngineUnsupported):
            g(K, vec(u3, 1, 1, 1), "bisection")
