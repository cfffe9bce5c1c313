"""Exact circle arithmetic, checked against the independent oracles."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import o_preperiod_period, o_unlinked
from raylam.angles import (
    Angle,
    AngleSet,
    Arc,
    NotDisjoint,
    cyclic_between,
    parse_angle,
    preimages,
    preperiod_period,
    times_d,
    unlinked,
)

angles_st = st.builds(
    Angle, st.integers(min_value=-400, max_value=400), st.integers(min_value=1, max_value=240)
)


class TestAngle:
    def test_reduction_and_wrap(self):
        assert Angle(3, 6) == Angle(1, 2)
        assert Angle(7, 3) == Angle(1, 3)
        assert Angle(-1, 3) == Angle(2, 3)
        assert Angle(4, -6) == Angle(1, 3)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            Angle(1, 0)

    def test_parse(self):
        assert parse_angle("7/9") == Angle(7, 9)
        assert parse_angle("3") == Angle(0, 1)
        with pytest.raises(ValueError):
            parse_angle("7/9/2")

    def test_ordering(self):
        assert Angle(1, 3) < Angle(1, 2) < Angle(2, 3)
        assert sorted([Angle(2, 3), Angle(0, 1), Angle(1, 9)]) == [
            Angle(0, 1),
            Angle(1, 9),
            Angle(2, 3),
        ]

    def test_str(self):
        assert str(Angle(7, 9)) == "7/9"
        assert str(Angle(0, 1)) == "0"
        assert parse_angle("0/1") == parse_angle("0") == Angle(0, 1)

    @given(angles_st)
    def test_always_reduced_in_range(self, a):
        from math import gcd

        assert 0 <= a.num < a.den
        assert gcd(a.num, a.den) == 1


class TestDynamicsOnAngles:
    def test_times_d(self):
        assert times_d(Angle(1, 9), 3) == Angle(1, 3)
        assert times_d(Angle(2, 3), 3) == Angle(0, 1)
        with pytest.raises(ValueError):
            times_d(Angle(1, 3), 1)

    def test_preimages(self):
        got = preimages(Angle(1, 3), 3)
        assert set(got) == {Angle(1, 9), Angle(4, 9), Angle(7, 9)}
        for q in got:
            assert times_d(q, 3) == Angle(1, 3)

    def test_preperiod_period_examples(self):
        assert preperiod_period(Angle(1, 3), 3) == (1, 1)
        assert preperiod_period(Angle(1, 9), 3) == (2, 1)
        assert preperiod_period(Angle(1, 7), 2) == (0, 3)
        assert preperiod_period(Angle(11, 216), 3) == (3, 2)

    @given(angles_st, st.sampled_from([2, 3, 4, 5]))
    @settings(max_examples=300, derandomize=True)
    def test_preperiod_period_matches_oracle(self, a, d):
        assert preperiod_period(a, d) == o_preperiod_period(a.fraction, d)

    @given(angles_st, st.sampled_from([2, 3]))
    @settings(derandomize=True)
    def test_orbit_reenters_at_preperiod(self, a, d):
        ell, per = preperiod_period(a, d)
        u = a
        for _ in range(ell):
            u = times_d(u, d)
        v = u
        for _ in range(per):
            v = times_d(v, d)
        assert v == u


class TestArc:
    def test_length_and_contains(self):
        arc = Arc(Angle(7, 9), Angle(1, 9))
        assert arc.length == Fraction(1, 3)
        assert arc.contains(Angle(0, 1))
        assert not arc.contains(Angle(1, 2))
        assert not arc.contains(Angle(7, 9))
        assert arc.closure_contains(Angle(7, 9))

    def test_degenerate_arc_is_full_circle_minus_point(self):
        arc = Arc(Angle(1, 3), Angle(1, 3))
        assert arc.length == 1
        assert arc.contains(Angle(1, 2))
        assert not arc.contains(Angle(1, 3))

    def test_cyclic_between(self):
        assert cyclic_between(Angle(0, 1), Arc(Angle(7, 9), Angle(1, 9)))
        assert not cyclic_between(Angle(1, 9), Arc(Angle(7, 9), Angle(1, 9)))


class TestAngleSet:
    def test_sorted_dedup(self):
        s = AngleSet([Angle(2, 3), Angle(1, 3), Angle(4, 6)])
        assert s.angles == (Angle(1, 3), Angle(2, 3))
        assert len(s) == 2

    def test_parse_and_str(self):
        s = AngleSet.parse("2/3 1/3")
        assert str(s) == "1/3 2/3"

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            AngleSet([])

    def test_image(self):
        s = AngleSet.parse("1/9 7/9")
        assert s.image(3) == AngleSet.parse("1/3")

    def test_gaps_tile_circle(self):
        s = AngleSet.parse("1/9 1/3 2/3 7/9")
        gaps = s.gaps()
        assert len(gaps) == 4
        assert sum(g.length for g in gaps) == 1
        assert gaps[0].lo == Angle(1, 9)

    def test_gap_of_singleton(self):
        (g,) = AngleSet.parse("1/3").gaps()
        assert g == Arc(Angle(1, 3), Angle(1, 3))


class TestUnlinked:
    def test_examples(self):
        a = AngleSet.parse("1/3 2/3")
        assert unlinked(a, AngleSet.parse("1/9 7/9"))
        assert not unlinked(a, AngleSet.parse("1/2 3/4"))
        assert unlinked(a, AngleSet.parse("2/5"))

    def test_intersection_raises(self):
        with pytest.raises(NotDisjoint):
            unlinked(AngleSet.parse("1/3 2/3"), AngleSet.parse("1/3 1/9"))

    @given(
        st.sets(angles_st, min_size=1, max_size=5),
        st.sets(angles_st, min_size=1, max_size=5),
    )
    @settings(max_examples=400, derandomize=True)
    def test_matches_oracle(self, xs, ys):
        xs, ys = frozenset(xs), frozenset(ys)
        if xs & ys:
            with pytest.raises(NotDisjoint):
                unlinked(AngleSet(xs), AngleSet(ys))
            return
        want = o_unlinked({a.fraction for a in xs}, {a.fraction for a in ys})
        assert unlinked(AngleSet(xs), AngleSet(ys)) == want

    @given(
        st.sets(angles_st, min_size=1, max_size=4),
        st.sets(angles_st, min_size=1, max_size=4),
    )
    @settings(derandomize=True)
    def test_symmetric(self, xs, ys):
        if frozenset(xs) & frozenset(ys):
            return
        a, b = AngleSet(xs), AngleSet(ys)
        assert unlinked(a, b) == unlinked(b, a)
