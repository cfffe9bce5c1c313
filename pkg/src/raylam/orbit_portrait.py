"""Cycles of angle sets under m_d: validation, rotation number, sectors.

An orbit portrait here is a finite sequence A_0, ..., A_{n-1} of angle
sets carried onto one another by t -> d*t.  Validation enforces exact
elementwise images, pairwise unlinkedness, and preservation of cyclic
order wherever the restriction of m_d is injective.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .angles import Angle, AngleSet, Arc, NotDisjoint, cyclic_between, times_d


class OrbitPortraitError(ValueError):
    pass


class NotInvariant(OrbitPortraitError):
    pass


class Linked(OrbitPortraitError):
    pass


class OrderViolation(OrbitPortraitError):
    pass


class NotBijective(OrbitPortraitError):
    pass


class NotPeriodic(OrbitPortraitError):
    pass


class DegenerateSectorWarning(UserWarning):
    """The arc-length recursion left (0, 1); the sector filled the circle."""


@dataclass(frozen=True, slots=True)
class OrbitPortrait:
    d: int
    sets: tuple[AngleSet, ...]

    @property
    def union(self) -> AngleSet:
        return AngleSet(a for s in self.sets for a in s)

    def __str__(self) -> str:
        return orbit_to_text(self)


def validate_orbit_portrait(d: int, sets) -> OrbitPortrait:
    """Check invariance, unlinkedness and cyclic order; raise on failure."""
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    sets = tuple(s if isinstance(s, AngleSet) else AngleSet(s) for s in sets)
    if not sets:
        raise ValueError("orbit portrait needs at least one angle set")
    n = len(sets)
    for i, s in enumerate(sets):
        image = s.image(d)
        if image != sets[(i + 1) % n]:
            raise NotInvariant(
                f"m_{d}(A_{i}) = {image} but A_{(i + 1) % n} = {sets[(i + 1) % n]}"
            )
    for i in range(n):
        for j in range(i + 1, n):
            try:
                ok = _unlinked_sets(sets[i], sets[j])
            except NotDisjoint:
                raise Linked(f"A_{i} and A_{j} share an angle") from None
            if not ok:
                raise Linked(f"A_{i} = {sets[i]} and A_{j} = {sets[j]} are linked")
    for i, s in enumerate(sets):
        if len(s.image(d)) != len(s):
            continue  # collapsing step; no order to preserve
        dst = list(sets[(i + 1) % n].angles)
        pos = [dst.index(times_d(a, d)) for a in s.angles]
        shift = pos[0]
        m = len(pos)
        if any(pos[k] != (shift + k) % m for k in range(m)):
            raise OrderViolation(
                f"m_{d} does not preserve cyclic order on A_{i} = {s}"
            )
    return OrbitPortrait(d, sets)


def _unlinked_sets(a: AngleSet, b: AngleSet) -> bool:
    from .angles import unlinked

    return unlinked(a, b)


def rotation_number(p: OrbitPortrait) -> Angle:
    """Combinatorial rotation number of the first-return map on A_0.

    The return map of a valid portrait preserves cyclic order, so it acts
    on the sorted angles of A_0 as a rigid index shift; the rotation
    number is that shift over |A_0|.
    """
    n = len(p.sets)
    src = list(p.sets[0].angles)
    src_index = {a: k for k, a in enumerate(src)}
    pos = []
    for a in src:
        y = a
        for _ in range(n):
            y = times_d(y, p.d)
        if y not in src_index:
            raise NotBijective(f"return map sends {a} to {y}, outside A_0")
        pos.append(src_index[y])
    if len(set(pos)) != len(src):
        raise NotBijective("return map is not injective on A_0")
    shift = pos[0]
    m = len(src)
    if any(pos[k] != (shift + k) % m for k in range(m)):
        raise OrderViolation("return map on A_0 is not a rigid rotation")
    return Angle(shift, m)


def cycle_count(p: OrbitPortrait) -> int:
    """Number of m_d-cycles meeting the portrait's angles."""
    d = p.d
    angles = set(p.union)
    for a in angles:
        if gcd(a.den, d) != 1:
            raise NotPeriodic(f"{a} is not periodic under m_{d}")
    count = 0
    seen: set[Angle] = set()
    for a in sorted(angles):
        if a in seen:
            continue
        count += 1
        y = a
        while y not in seen:
            seen.add(y)
            y = times_d(y, d)
    return count


def check_cycle_bounds(p: OrbitPortrait, critical_value_count: int | None = None) -> list[str]:
    """Report violations of the cycle-count limits; empty means clean.

    The angles of a valid portrait occupy at most d cycles, and exactly d
    forces rotation number zero.  When the number of critical values k
    supporting the portrait is known, the same pair of statements holds
    with k + 1 in place of d.
    """
    report: list[str] = []
    c = cycle_count(p)
    limits = [("degree", p.d)]
    if critical_value_count is not None:
        limits.append(("critical value count + 1", critical_value_count + 1))
    for name, lim in limits:
        if c > lim:
            report.append(f"{c} cycles exceeds {name} limit {lim}")
        elif c == lim and rotation_number(p) != Angle(0, 1):
            report.append(
                f"{c} cycles meets {name} limit but rotation number "
                f"{rotation_number(p)} is nonzero"
            )
    return report


@dataclass(frozen=True, slots=True)
class Sector:
    """A complementary arc of one angle set of the portrait."""

    base_index: int
    span: Arc

    @property
    def length(self) -> Fraction:
        return self.span.length


def sectors(p: OrbitPortrait, base_index: int) -> list[Sector]:
    return [Sector(base_index, arc) for arc in p.sets[base_index].gaps()]


def sector_map(s: Sector, d: int) -> Arc:
    """Span of the image sector: endpoints map by t -> d*t."""
    return Arc(times_d(s.span.lo, d), times_d(s.span.hi, d))


def critical_weight(s: Sector, d: int) -> int:
    """Number of critical grand-orbit slots the sector covers: the largest
    integer strictly below d times the sector length."""
    q = d * s.span.length
    return (q.numerator - 1) // q.denominator


def sector_length_step(s: Sector, d: int) -> Fraction:
    """Exact length of the image sector: d*length minus the critical weight."""
    res = d * s.span.length - critical_weight(s, d)
    if res >= 1:
        warnings.warn(
            f"sector {s.span} of length {s.span.length} maps over the full "
            f"circle; image length {res} is degenerate",
            DegenerateSectorWarning,
            stacklevel=2,
        )
    return res


def sector_nesting(a: Arc, b: Arc) -> str:
    """Relative position of two sectors with unlinked basepoint sets.

    Returns one of 'disjoint', 'inside' (a inside b), 'contains', or
    'covers' (the two spans cover the whole circle).  Raises ValueError
    when the endpoints cross, which cannot happen over unlinked sets.
    """
    a_lo = cyclic_between(a.lo, b)
    a_hi = cyclic_between(a.hi, b)
    b_lo = cyclic_between(b.lo, a)
    b_hi = cyclic_between(b.hi, a)
    if a_lo and a_hi and b_lo and b_hi:
        return "covers"
    if a_lo and a_hi:
        return "inside"
    if b_lo and b_hi:
        return "contains"
    if not (a_lo or a_hi or b_lo or b_hi):
        return "disjoint"
    raise ValueError(f"sector spans {a} and {b} cross")


def parse_orbit_text(text: str) -> tuple[int, list[AngleSet]]:
    """Same shape as the portrait format: a d= line, then one set per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("d="):
        raise ValueError("first line must be d=<degree>")
    try:
        d = int(lines[0][2:])
    except ValueError:
        raise ValueError(f"bad degree line {lines[0]!r}") from None
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    return d, [AngleSet.parse(ln) for ln in lines[1:]]


def orbit_to_text(p: OrbitPortrait) -> str:
    return "\n".join([f"d={p.d}"] + [str(s) for s in p.sets]) + "\n"
