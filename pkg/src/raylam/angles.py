"""Exact rational arithmetic on the circle R/Z.

Conventions used across the package:

* An angle is a reduced fraction num/den with 0 <= num < den; 0 is 0/1.
* An arc (lo, hi) is the open counterclockwise interval from lo to hi;
  the degenerate arc (t, t) means the full circle minus the point t.
* Angle sets are kept sorted by value in [0, 1), which is the cyclic
  order anchored at 0.

Everything here is integer arithmetic.  No floating point is allowed in
this module: denominators like 3^12*(3^12 - 1) occur in practice and
equality of landing patterns is an exact predicate.  Arc lengths are
returned as `fractions.Fraction`.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator


class NotDisjoint(ValueError):
    """Unlinkedness was queried for sets that share an angle."""


@dataclass(frozen=True, slots=True, order=False)
class Angle:
    """A point of R/Z as a reduced fraction num/den in [0, 1)."""

    num: int
    den: int

    def __init__(self, num: int, den: int = 1) -> None:
        if den == 0:
            raise ZeroDivisionError("angle with zero denominator")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Parse `num/den` (or a bare integer); reduces silently."""
        parts = text.strip().split("/")
        if len(parts) == 1:
            return cls(int(parts[0]), 1)
        if len(parts) != 2:
            raise ValueError(f"malformed angle {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    # Total order by value in [0, 1); cross-multiplication keeps it exact.
    def __lt__(self, other: "Angle") -> bool:
        return self.num * other.den < other.num * self.den

    def __le__(self, other: "Angle") -> bool:
        return self.num * other.den <= other.num * self.den

    def __gt__(self, other: "Angle") -> bool:
        return other < self

    def __ge__(self, other: "Angle") -> bool:
        return other <= self

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Angle({self.num}, {self.den})"


ZERO = Angle(0, 1)


def parse_angle(text: str) -> Angle:
    return Angle.parse(text)


def times_d(t: Angle, d: int) -> Angle:
    """d*t mod 1 in reduced form."""
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    return Angle(t.num * d, t.den)


def preperiod_period(t: Angle, d: int) -> tuple[int, int]:
    """Least (preperiod, period) of t under t -> d*t mod 1.

    Orbit hashing on exact fractions; the orbit of a rational is always
    eventually periodic so this terminates.
    """
    seen: dict[Angle, int] = {}
    u = t
    i = 0
    while u not in seen:
        seen[u] = i
        u = times_d(u, d)
        i += 1
    first = seen[u]
    return first, i - first


def preimages(t: Angle, d: int) -> tuple[Angle, ...]:
    """The d preimages of t under t -> d*t mod 1, in increasing order."""
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    return tuple(Angle(t.num + j * t.den, t.den * d) for j in range(d))


@dataclass(frozen=True, slots=True)
class Arc:
    """Open counterclockwise arc (lo, hi); lo == hi is the circle minus lo."""

    lo: Angle
    hi: Angle

    @property
    def length(self) -> Fraction:
        if self.lo == self.hi:
            return Fraction(1)
        return (self.hi.fraction - self.lo.fraction) % 1

    def contains(self, x: Angle) -> bool:
        return cyclic_between(x, self)

    def closure_contains(self, x: Angle) -> bool:
        return x == self.lo or x == self.hi or cyclic_between(x, self)

    def __str__(self) -> str:
        return f"({self.lo},{self.hi})"


def cyclic_between(x: Angle, arc: Arc) -> bool:
    """True iff x lies strictly inside the open arc."""
    lo, hi = arc.lo, arc.hi
    if lo == hi:
        return x != lo
    if lo < hi:
        return lo < x < hi
    return x > lo or x < hi


class AngleSet:
    """Finite set of angles in increasing cyclic order, no duplicates."""

    __slots__ = ("angles",)

    angles: tuple[Angle, ...]

    def __init__(self, angles: Iterable[Angle]) -> None:
        items = tuple(sorted(set(angles)))
        if not items:
            raise ValueError("angle set cannot be empty")
        object.__setattr__(self, "angles", items)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("AngleSet is immutable")

    @classmethod
    def parse(cls, text: str) -> "AngleSet":
        return cls(Angle.parse(tok) for tok in text.split())

    def __iter__(self) -> Iterator[Angle]:
        return iter(self.angles)

    def __len__(self) -> int:
        return len(self.angles)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, Angle) and x in set(self.angles)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AngleSet) and self.angles == other.angles

    def __hash__(self) -> int:
        return hash(self.angles)

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.angles)

    def __repr__(self) -> str:
        return f"AngleSet([{', '.join(repr(a) for a in self.angles)}])"

    def image(self, d: int) -> "AngleSet":
        return AngleSet(times_d(a, d) for a in self.angles)

    def gaps(self) -> tuple[Arc, ...]:
        """Complementary arcs in ccw order; a singleton yields (t, t)."""
        a = self.angles
        if not a:
            raise ValueError("empty angle set has no complementary arcs")
        return tuple(
            Arc(a[i], a[(i + 1) % len(a)]) for i in range(len(a))
        )


def unlinked(a: AngleSet, b: AngleSet) -> bool:
    """True iff a lies in one connected component of the circle minus b.

    Raises NotDisjoint when the sets intersect: the choice of semantics
    for shared angles belongs to the caller.
    """
    if len(a) == 0 or len(b) == 0:
        raise ValueError("unlinked requires nonempty sets")
    common = set(a.angles) & set(b.angles)
    if common:
        raise NotDisjoint(f"sets share {sorted(common)[0]}")
    if len(b) == 1:
        return True
    # Each element of a falls strictly inside one complementary arc of b;
    # a is unlinked from b iff all of them fall inside the same arc.
    vals = b.angles
    first = None
    for x in a:
        j = bisect_left(vals, x) % len(vals)
        if first is None:
            first = j
        elif j != first:
            return False
    return True
