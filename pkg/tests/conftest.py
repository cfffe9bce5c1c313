"""Shared fixtures and random-portrait samplers."""

from __future__ import annotations

import random
from math import gcd

import pytest

from raylam import Angle, AngleSet
from raylam.dynamics import Polynomial
from raylam.portrait import CriticalPortrait, PortraitError, validate_portrait

# the worked cubic examples used across the suite
THETA_A_BLOCKS = ("1/3 2/3", "1/9 7/9")
THETA_A_PRIME_BLOCKS = ("1/3 2/3", "2/9 8/9")
THETA_B_BLOCKS = ("11/216 83/216", "89/216 161/216")


def cubic_a_mp() -> Polynomial:
    """z^3 - 9/4 z + sqrt(3)/4 with the constant term at extended precision.

    Rays landing on the critical orbit pass two ramification points, so a
    double-rounded constant caps the landing accuracy near (1e-16)^(1/4);
    the wide coefficient pushes that floor out of the way.
    """
    import gmpy2

    gmpy2.get_context().precision = 192
    return Polynomial(3, (gmpy2.mpfr("-2.25"), gmpy2.sqrt(gmpy2.mpfr(3)) / 4))


def make_portrait(d: int, blocks) -> CriticalPortrait:
    return validate_portrait(d, [AngleSet.parse(b) for b in blocks])


@pytest.fixture(scope="session")
def theta_a() -> CriticalPortrait:
    return make_portrait(3, THETA_A_BLOCKS)


@pytest.fixture(scope="session")
def theta_a_prime() -> CriticalPortrait:
    return make_portrait(3, THETA_A_PRIME_BLOCKS)


@pytest.fixture(scope="session")
def theta_b() -> CriticalPortrait:
    return make_portrait(3, THETA_B_BLOCKS)


@pytest.fixture(scope="session")
def half_portrait() -> CriticalPortrait:
    return make_portrait(2, ("0 1/2",))


@pytest.fixture(scope="session")
def d2_preperiodic_portrait() -> CriticalPortrait:
    return make_portrait(2, ("1/3 5/6",))


def shift(a: Angle, k: int, m: int) -> Angle:
    """a + k/m on the circle."""
    return Angle(a.num * m + k * a.den, a.den * m)


def random_angle(rng: random.Random, d: int, kind: str, max_den: int = 200) -> Angle:
    """kind 'preperiodic': strictly preperiodic under m_d (reduced
    denominator keeps a factor of d); kind 'periodic': purely periodic."""
    while True:
        den = rng.randrange(2, max_den)
        num = rng.randrange(0, den)
        a = Angle(num, den)
        if kind == "preperiodic" and a.den % d == 0:
            return a
        if kind == "periodic" and gcd(a.den, d) == 1 and a.den > 1:
            return a


def random_portrait(rng: random.Random, d: int, kind: str = "preperiodic") -> CriticalPortrait:
    """Random valid portrait; kind controls the first block's base angle.

    d=2 portraits are one antipodal pair.  d=3 portraits are either a
    single symmetric triple or two pairs, rejection-sampled until the
    pairs are disjoint and unlinked.
    """
    def pure(p: CriticalPortrait) -> bool:
        # shifting by k/d can turn a preperiodic base angle periodic
        # (1/6 + 1/3 = 1/2), so reject unless the whole union qualifies
        if kind != "preperiodic":
            return True
        return all(a.den % d == 0 for a in p.union)

    while True:
        try:
            if d == 2:
                t = random_angle(rng, 2, kind)
                p = validate_portrait(2, [AngleSet([t, shift(t, 1, 2)])])
            elif rng.random() < 0.4:
                t = random_angle(rng, 3, kind)
                p = validate_portrait(
                    3, [AngleSet([t, shift(t, 1, 3), shift(t, 2, 3)])]
                )
            else:
                t = random_angle(rng, 3, kind)
                u = random_angle(rng, 3, "preperiodic")
                b1 = AngleSet([t, shift(t, rng.choice((1, 2)), 3)])
                b2 = AngleSet([u, shift(u, rng.choice((1, 2)), 3)])
                p = validate_portrait(3, [b1, b2])
        except (PortraitError, ValueError):
            continue
        if pure(p):
            return p
