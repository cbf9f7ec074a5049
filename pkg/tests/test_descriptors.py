from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from l0lab.descriptors import infer_space, parse_rv, parse_seminorm, parse_set, parse_space, split_top
from l0lab.errors import DescriptorError, ProbSumNotOne
from l0lab.l0_core import INF, RandomVar
from l0lab.prob_space import make_geometric_space
from l0lab.seminorms import AbsValue, GaugeOf, Weighted
from l0lab.sets_gauge import AtomDecomposable, BallSet, CounterexampleU

values = st.fractions(-20, 20, max_denominator=12)


class TestParsing:
    def test_split_top(self):
        assert split_top("ball:abs,weighted:[1,2],eps=<1|2>".partition(":")[2]) == [
            "abs", "weighted:[1,2]", "eps=<1|2>"]

    def test_space(self, f3):
        assert parse_space("finite:1/2,1/4,1/4") == f3
        assert parse_space("geometric:N=16") == make_geometric_space(16)

    def test_bad_space(self):
        with pytest.raises(ProbSumNotOne):
            parse_space("finite:1/2,1/2,1/4")
        with pytest.raises(DescriptorError):
            parse_space("poisson:3")

    def test_rvs(self, geo, u3):
        assert parse_rv("<2,3|1>", geo) == RandomVar.eventually(geo, [2, 3], 1)
        assert parse_rv("[1,-1/2,+inf]", u3).at(3) == INF
        assert parse_rv("<5|0>", u3) == RandomVar.vector(u3, [5, 0, 0])
        assert parse_rv("3/4", geo) == RandomVar.constant(geo, Fraction(3, 4))

    def test_vector_on_countable_rejected(self, geo):
        with pytest.raises(DescriptorError):
            parse_rv("[1,2]", geo)

    def test_infer(self):
        assert infer_space("[1,2,3,4]").n_atoms == 4
        assert not infer_space("<1|1>").is_finite

    def test_seminorms(self, u3):
        assert parse_seminorm("abs", u3) == AbsValue()
        assert parse_seminorm("weighted:[2,1,1]", u3) == Weighted(RandomVar.vector(u3, [2, 1, 1]))
        assert isinstance(parse_seminorm("gauge:(cex:eps=1)", u3), GaugeOf)

    def test_sets(self, geo):
        assert isinstance(parse_set("ball:abs,eps=1", geo), BallSet)
        assert parse_set("cex:eps=<2|1/2>", geo) == CounterexampleU(RandomVar.eventually(geo, [2], Fraction(1, 2)))
        assert isinstance(parse_set("atomdec:r=3", geo), AtomDecomposable)

    @pytest.mark.parametrize("text", ["ball:abs", "cex:r=1", "atomdec:eps=1", "cube:1", "ball:abs,eps=0"])
    def test_bad_sets(self, geo, text):
        with pytest.raises((DescriptorError, ValueError)):
            parse_set(text, geo)


class TestRoundTrip:
    @given(st.lists(values, max_size=6), values)
    def test_eventual(self, prefix, tail):
        geo = make_geometric_space(64)
        x = RandomVar.eventually(geo, prefix, tail)
        assert parse_rv(str(x), geo) == x

    @given(st.lists(values, min_size=1, max_size=6))
    def test_vector(self, vals):
        s = infer_space(str(vals))
        x = RandomVar.vector(s, vals)
        assert parse_rv(str(x), s) == x
