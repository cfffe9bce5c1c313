"""Orbit portraits: validation, rotation numbers, cycle bounds, sectors."""

import random
from fractions import Fraction
from math import gcd

import pytest

from oracles import o_cycle_count, o_orbit_valid, o_rotation
from raylam.angles import Angle, AngleSet, Arc, times_d
from raylam.orbit_portrait import (
    DegenerateSectorWarning,
    NotBijective,
    NotInvariant,
    NotPeriodic,
    OrbitPortrait,
    OrderViolation,
    Sector,
    check_cycle_bounds,
    critical_weight,
    cycle_count,
    orbit_to_text,
    parse_orbit_text,
    rotation_number,
    sector_length_step,
    sector_map,
    sector_nesting,
    sectors,
    validate_orbit_portrait,
)
from raylam.orbit_portrait import Linked as OrbitLinked

PERIOD3_26THS = ["2/26 10/26 19/26", "4/26 5/26 6/26", "12/26 15/26 18/26"]


def sets_of(*lines: str) -> list[AngleSet]:
    return [AngleSet.parse(ln) for ln in lines]


@pytest.fixture(scope="module")
def p26() -> OrbitPortrait:
    return validate_orbit_portrait(3, sets_of(*PERIOD3_26THS))


class TestValidation:
    def test_period3_triple_sets(self, p26):
        assert len(p26.sets) == 3
        assert len(p26.union) == 9

    def test_single_invariant_sets(self):
        validate_orbit_portrait(2, sets_of("1/3 2/3"))
        validate_orbit_portrait(2, sets_of("1/7 2/7 4/7"))
        validate_orbit_portrait(3, sets_of("1/4 5/8 3/4 7/8"))

    def test_paired_cycles(self):
        # two period-3 doubling cycles riding one portrait
        validate_orbit_portrait(2, sets_of("1/7 6/7", "2/7 5/7", "3/7 4/7"))

    def test_not_invariant(self):
        with pytest.raises(NotInvariant):
            validate_orbit_portrait(3, sets_of("1/3"))
        # right sets, wrong cyclic order
        with pytest.raises(NotInvariant):
            validate_orbit_portrait(
                3, sets_of(PERIOD3_26THS[0], PERIOD3_26THS[2], PERIOD3_26THS[1])
            )

    def test_shared_angle(self):
        with pytest.raises(OrbitLinked):
            validate_orbit_portrait(2, sets_of("1/3 2/3", "2/3 1/3"))

    def test_linked_sets(self):
        with pytest.raises(OrbitLinked):
            validate_orbit_portrait(2, sets_of("1/15 4/15", "2/15 8/15"))

    def test_order_violation(self):
        # 1/5 -> 2/5 -> 4/5 -> 3/5 visits the four angles out of cyclic order
        with pytest.raises(OrderViolation):
            validate_orbit_portrait(2, sets_of("1/5 2/5 3/5 4/5"))

    def test_degenerate_inputs(self):
        with pytest.raises(ValueError):
            validate_orbit_portrait(1, sets_of("0"))
        with pytest.raises(ValueError):
            validate_orbit_portrait(2, [])


class TestRotationAndCycles:
    def test_golden_values(self, p26):
        assert rotation_number(p26) == Angle(0, 1)
        assert cycle_count(p26) == 3
        assert check_cycle_bounds(p26) == []

    def test_rotation_examples(self):
        cases = [
            (2, ["1/3 2/3"], Angle(1, 2)),
            (2, ["1/7 2/7 4/7"], Angle(1, 3)),
            (2, ["1/15 2/15 4/15 8/15"], Angle(1, 4)),
            (3, ["1/4 3/4"], Angle(1, 2)),
            (3, ["1/4 5/8 3/4 7/8"], Angle(1, 2)),
        ]
        for d, lines, want in cases:
            p = validate_orbit_portrait(d, sets_of(*lines))
            assert rotation_number(p) == want
            assert want.fraction == o_rotation(
                [set(x.fraction for x in s) for s in p.sets], d
            )

    def test_return_map_escapes(self):
        p = OrbitPortrait(2, (AngleSet.parse("1/5 2/5"),))
        with pytest.raises(NotBijective):
            rotation_number(p)

    def test_preperiodic_angle_rejected(self):
        p = OrbitPortrait(2, (AngleSet.parse("1/6"),))
        with pytest.raises(NotPeriodic):
            cycle_count(p)

    def test_bounds_with_critical_value_count(self, p26):
        assert check_cycle_bounds(p26, critical_value_count=2) == []
        report = check_cycle_bounds(p26, critical_value_count=1)
        assert any("exceeds" in line for line in report)

    def test_bounds_rotation_at_limit(self):
        p = validate_orbit_portrait(2, sets_of("1/3 2/3"))
        assert check_cycle_bounds(p) == []
        report = check_cycle_bounds(p, critical_value_count=0)
        assert any("rotation" in line for line in report)

    def test_two_cycles_at_degree_limit(self):
        # cycle count equal to d is fine while the rotation number is zero
        p = validate_orbit_portrait(2, sets_of("1/7 6/7", "2/7 5/7", "3/7 4/7"))
        assert cycle_count(p) == 2
        assert rotation_number(p) == Angle(0, 1)
        assert check_cycle_bounds(p) == []

    def test_random_single_orbits(self):
        rng = random.Random(311)
        for _ in range(40):
            d = rng.choice((2, 3))
            while True:
                den = rng.randrange(3, 120)
                if gcd(den, d) == 1:
                    break
            t = Angle(rng.randrange(1, den), den)
            orbit = [t]
            while (nxt := times_d(orbit[-1], d)) != t:
                orbit.append(nxt)
            p = validate_orbit_portrait(d, [AngleSet([a]) for a in orbit])
            fsets = [set(x.fraction for x in s) for s in p.sets]
            assert o_orbit_valid(fsets, d)
            assert rotation_number(p) == Angle(0, 1)
            assert cycle_count(p) == 1 == o_cycle_count(fsets, d)

    def test_random_mirror_pairs(self):
        # {t, -t} pairs have parallel chords, so the orbit of such a pair
        # is always unlinked; the return map is the identity or a swap
        rng = random.Random(97)
        built = 0
        while built < 25:
            den = rng.randrange(5, 150)
            if gcd(den, 3) != 1:
                continue
            t = Angle(rng.randrange(1, den), den)
            first = AngleSet([t, Angle(-t.num, t.den)])
            if len(first) != 2:
                continue
            chain = [first]
            while (nxt := chain[-1].image(3)) != first:
                if len(nxt) != 2:
                    break
                chain.append(nxt)
            else:
                p = validate_orbit_portrait(3, chain)
                fsets = [set(x.fraction for x in s) for s in p.sets]
                assert o_orbit_valid(fsets, 3)
                assert rotation_number(p).fraction == o_rotation(fsets, 3)
                assert cycle_count(p) == o_cycle_count(fsets, 3)
                built += 1


class TestSectors:
    def test_sector_spans_are_gaps(self, p26):
        spans = [s.span for s in sectors(p26, 0)]
        assert spans == list(p26.sets[0].gaps())
        assert sum((s.length for s in sectors(p26, 1)), Fraction(0)) == 1

    def test_weights_by_hand(self, p26):
        # A_0 = {2, 10, 19}/26: gap lengths 8/26, 9/26, 9/26
        ws = [critical_weight(s, 3) for s in sectors(p26, 0)]
        assert ws == [0, 1, 1]

    def test_image_length_identity(self, p26):
        # exact arc arithmetic: the image sector's length is d*len - w
        for base in range(3):
            for s in sectors(p26, base):
                assert sector_map(s, 3).length == sector_length_step(s, 3)

    def test_truncated_decimal_arcs(self):
        s = Sector(0, Arc(Angle(206227, 10**6), Angle(293773, 10**6)))
        img = sector_map(s, 2)
        assert img == Arc(Angle(412454, 10**6), Angle(587546, 10**6))
        assert critical_weight(s, 2) == 0
        assert sector_length_step(s, 2) == img.length == Fraction(175092, 10**6)

    def test_degenerate_sector_warns(self):
        s = Sector(0, Arc(Angle(0, 1), Angle(1, 3)))
        with pytest.warns(DegenerateSectorWarning):
            assert sector_length_step(s, 3) == 1

    def test_nesting(self):
        a = Arc(Angle(1, 10), Angle(2, 10))
        b = Arc(Angle(3, 10), Angle(4, 10))
        big = Arc(Angle(0, 1), Angle(1, 2))
        assert sector_nesting(a, b) == "disjoint"
        assert sector_nesting(a, big) == "inside"
        assert sector_nesting(big, a) == "contains"
        assert sector_nesting(Arc(Angle(1, 4), Angle(3, 4)),
                              Arc(Angle(2, 3), Angle(1, 3))) == "covers"
        with pytest.raises(ValueError):
            sector_nesting(big, Arc(Angle(1, 4), Angle(3, 4)))


class TestTextFormat:
    def test_round_trip(self, p26):
        d, sets = parse_orbit_text(orbit_to_text(p26))
        assert validate_orbit_portrait(d, sets) == p26

    def test_comments(self):
        d, sets = parse_orbit_text("# a cycle\nd=2\n1/3 2/3\n")
        assert d == 2 and len(sets) == 1

    def test_rejects_garbage(self):
        for bad in ("", "2\n1/3", "d=one\n1/3", "d=0\n1/3 2/3"):
            with pytest.raises(ValueError):
                parse_orbit_text(bad)
