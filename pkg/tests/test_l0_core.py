from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l0lab.errors import NotRepresentable, PartitionMismatch, SpaceMismatch, UndefinedExtendedArith
from l0lab.l0_core import (
    INF,
    NEG_INF,
    RandomVar,
    SeqFamily,
    arith,
    concatenate,
    ess_inf_finite,
    ess_inf_seq,
    ess_sup_finite,
    ess_sup_seq,
    ext_add,
    ext_mul,
    format_value,
    in_L0_plus,
    in_L0_plus_plus,
    indicator,
    one,
    order,
)
from l0lab.prob_space import Event, canonical_partition, make_geometric_space, make_partition
from l0lab.sampling import Sampler

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=16)


def vec(space, *vals):
    return RandomVar.vector(space, vals)


class TestScalars:
    def test_zero_times_infinity(self):
        assert ext_mul(0, INF) == 0
        assert ext_mul(NEG_INF, Fraction(0)) == 0

    def test_opposite_infinities_rejected(self):
        with pytest.raises(UndefinedExtendedArith):
            ext_add(INF, NEG_INF)

    def test_format(self):
        assert format_value(INF) == "+inf"
        assert format_value(NEG_INF) == "-inf"
        assert format_value(Fraction(3, 4)) == "3/4"


class TestRandomVar:
    def test_add(self, u3):
        assert arith("add", vec(u3, 1, 2, 3), vec(u3, 1, 0, 1)) == vec(u3, 2, 2, 4)

    def test_abs_eventual(self, geo):
        x = RandomVar.eventually(geo, [-2], 1)
        assert arith("abs", x) == RandomVar.eventually(geo, [2], 1)
        assert str(arith("abs", x)) == "<2|1>"

    def test_zero_times_infinite_constant(self, geo):
        assert RandomVar.constant(geo, INF) * 0 == RandomVar.constant(geo, 0)

    def test_normalization_strips_tail(self, geo):
        assert RandomVar.eventually(geo, [1, 2, 2, 2], 2) == RandomVar.eventually(geo, [1], 2)

    def test_space_mismatch(self, u3, f3):
        with pytest.raises(SpaceMismatch):
            vec(u3, 1, 2, 3) + vec(f3, 1, 2, 3)

    def test_wrong_length(self, u3):
        with pytest.raises(SpaceMismatch):
            vec(u3, 1, 2)

    def test_scale_by_indicator(self, u3):
        assert arith("scale-by-indicator", vec(u3, 4, 5, 6), Event.finite_set(2)) == vec(u3, 0, 5, 0)

    def test_indicator_of_cofinite(self, geo):
        ind = indicator(geo, Event.cofinite_set(2))
        assert ind.at(1) == 1 and ind.at(2) == 0 and ind.at(1000) == 1

    def test_str(self, u3):
        assert str(vec(u3, 1, Fraction(1, 2), -3)) == "[1,1/2,-3]"

    def test_positivity_classes(self, u3):
        assert in_L0_plus(vec(u3, 0, 1, 2))
        assert not in_L0_plus_plus(vec(u3, 0, 1, 2))
        assert in_L0_plus_plus(vec(u3, 1, 1, 2))


class TestOrder:
    def test_geq(self, u3):
        assert order("geq", vec(u3, 1, 2, 3), vec(u3, 1, 1, 3))

    def test_gt(self, u3):
        assert not order("gt", vec(u3, 1, 2, 3), vec(u3, 1, 1, 3))

    def test_gt_on(self, u3):
        assert order("gt_on", vec(u3, 1, 2, 3), vec(u3, 1, 1, 3), Event.finite_set(2))

    def test_geq_on_empty_event_is_vacuous(self, u3):
        assert order("geq_on", vec(u3, 0, 0, 0), vec(u3, 5, 5, 5), Event.empty())


class TestLatticeIdentities:
    """Pointwise lattice/ring identities on 500 seeded triples per space."""

    @pytest.mark.parametrize("which", ["u3", "geo"])
    def test_seeded_triples(self, which, request):
        space = request.getfixturevalue(which)
        smp = Sampler(20240)
        for _ in range(500):
            x, y, z = smp.rv(space), smp.rv(space), smp.rv(space)
            assert x.minimum(y) + x.maximum(y) == x + y
            assert x.maximum(y.minimum(z)) == x.maximum(y).minimum(x.maximum(z))
            assert x.minimum(y.maximum(z)) == x.minimum(y).maximum(x.minimum(z))
            assert (x + y) + z == x + (y + z)
            assert x * (y + z) == x * y + x * z
            assert abs(x + y).maximum(abs(x) + abs(y)) == abs(x) + abs(y)
            assert abs(x * y) == abs(x) * abs(y)

    @settings(max_examples=100)
    @given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3))
    def test_hypothesis_order_is_pointwise(self, a, b):
        from l0lab.prob_space import make_finite_space

        s = make_finite_space([Fraction(1, 3)] * 3)
        x, y = vec(s, *a), vec(s, *b)
        assert x.geq(y) == all(p >= q for p, q in zip(a, b))
        assert x.maximum(y).geq(x) and x.maximum(y).geq(y)


class TestEssSupFinite:
    def test_pointwise_max(self, u3):
        assert ess_sup_finite([vec(u3, 1, 0, 2), vec(u3, 0, 3, 1)]) == vec(u3, 1, 3, 2)

    def test_singleton(self, u3):
        x = vec(u3, 4, -1, 0)
        assert ess_sup_finite([x]) == x

    def test_empty_is_minus_infinity(self, u3):
        assert ess_sup_finite([], u3) == RandomVar.constant(u3, NEG_INF)

    def test_inf_dual(self, u3):
        assert ess_inf_finite([vec(u3, 1, 0, 2), vec(u3, 0, 3, 1)]) == vec(u3, 0, 0, 1)


class TestEssSupSeq:
    def test_one_minus_one_over_n(self, geo):
        fam = SeqFamily(lambda n: RandomVar.constant(geo, 1 - Fraction(1, n)), True, "1-1/n")
        r = ess_sup_seq(fam, 1024, tol=Fraction(1, 1024))
        assert (one(geo) - r.value).geq(0)
        assert (r.value + Fraction(1, 1024)).geq(one(geo))
        w = r.witness
        assert all(w[k + 1].geq(w[k]) for k in range(len(w) - 1))

    def test_divergent_flagged(self, geo):
        fam = SeqFamily(lambda n: RandomVar.constant(geo, n), True, "n")
        r = ess_sup_seq(fam, 1024)
        assert r.unbounded == Event.omega()
        assert r.value == RandomVar.constant(geo, INF)

    def test_exhaustion(self, geo):
        fam = SeqFamily(lambda n: RandomVar(geo, (1,) * n, 0), True, "exhaust")
        r = ess_sup_seq(fam, 64)
        assert all(r.value.at(i) == 1 for i in range(1, 65))
        assert r.unbounded == Event.empty()

    def test_non_monotone_family_materialised(self, u3):
        fam = SeqFamily(lambda n: vec(u3, (-1) ** n, Fraction(1, n), 0))
        value, witness = ess_sup_seq(fam, 50)
        assert value == vec(u3, 1, 1, 0)
        assert witness[0] == vec(u3, -1, 1, 0)

    def test_broken_monotone_promise_falls_back(self, u3):
        fam = SeqFamily(lambda n: vec(u3, 5 if n == 3 else 0, 0, 0), True)
        r = ess_sup_seq(fam, 10)
        assert r.value == vec(u3, 5, 0, 0)
        assert not r.monotone_checked

    def test_inf_one_over_n(self, geo):
        tol = Fraction(1, 2**10)
        r = ess_inf_seq(SeqFamily(lambda n: RandomVar.constant(geo, Fraction(1, n)), False), 2**11, tol)
        assert r.value.geq(0) and RandomVar.constant(geo, tol).geq(r.value)

    def test_inf_constant(self, geo):
        r = ess_inf_seq(SeqFamily(lambda n: RandomVar.constant(geo, 5)), 32)
        assert r.value == RandomVar.constant(geo, 5)
        assert r.converged


class TestConcatenate:
    def test_canonical_stress_paste(self, geo):
        pieces = lambda n: RandomVar.constant(geo, 2).restrict(Event.finite_set(n))
        assert concatenate(canonical_partition(geo), pieces) == RandomVar.constant(geo, 2)

    def test_finite_list(self, f3):
        p = make_partition(f3, [Event.finite_set(1), Event.finite_set(2, 3)])
        assert concatenate(p, [vec(f3, 9, 0, 0), vec(f3, 0, 7, 7)]) == vec(f3, 9, 7, 7)

    def test_not_eventually_constant(self, geo):
        pieces = lambda n: RandomVar.constant(geo, n).restrict(Event.finite_set(n))
        with pytest.raises(NotRepresentable):
            concatenate(canonical_partition(geo), pieces)

    def test_piece_count_mismatch(self, f3):
        p = make_partition(f3, [Event.finite_set(1), Event.finite_set(2, 3)])
        with pytest.raises(PartitionMismatch):
            concatenate(p, [vec(f3, 1, 1, 1)])

    def test_geometric_finite_list(self):
        geo = make_geometric_space(8)
        p = make_partition(geo, [Event.finite_set(2), Event.cofinite_set(2)])
        x = concatenate(p, [RandomVar.constant(geo, 3), RandomVar.eventually(geo, [1], 4)])
        assert x == RandomVar.eventually(geo, [1, 3], 4)
