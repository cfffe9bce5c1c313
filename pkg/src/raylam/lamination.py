"""One-sided itineraries and the equivalence they induce on rational angles.

The central object is the relation generated by "these two angles share a
one-sided itinerary" for a fixed critical portrait.  Classes of that
relation are computed exactly: an angle's class is the connected
component of the itinerary-sharing graph over a finite candidate set
determined by the angle's preperiod and period.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

from .angles import Angle, AngleSet, Arc, preimages, preperiod_period, times_d
from .portrait import CriticalPortrait, UnlinkedClasses, unlinked_classes

LEFT = "left"
RIGHT = "right"


class BudgetExceeded(RuntimeError):
    """Candidate enumeration would exceed the configured denominator budget."""


class Kneading(Enum):
    PERIODIC = "periodic"
    APERIODIC = "aperiodic"


@dataclass(frozen=True, slots=True)
class Itinerary:
    """Eventually periodic symbol sequence in canonical form.

    The cycle is primitive and the preperiod is shortest: the last
    preperiod symbol always differs from the symbol the cycle would
    supply at that position.  Canonical form makes equality of the
    infinite sequences a plain field comparison.
    """

    preperiod: tuple[int, ...]
    cycle: tuple[int, ...]

    @classmethod
    def from_raw(cls, preperiod: tuple[int, ...], cycle: tuple[int, ...]) -> "Itinerary":
        if not cycle:
            raise ValueError("cycle must be nonempty")
        n = len(cycle)
        for q in range(1, n + 1):
            if n % q == 0 and cycle == cycle[:q] * (n // q):
                cycle = cycle[:q]
                break
        pre = list(preperiod)
        cyc = list(cycle)
        while pre and pre[-1] == cyc[-1]:
            cyc.insert(0, cyc.pop())
            pre.pop()
        return cls(tuple(pre), tuple(cyc))

    @property
    def is_periodic(self) -> bool:
        return not self.preperiod

    def symbol(self, n: int) -> int:
        if n < len(self.preperiod):
            return self.preperiod[n]
        return self.cycle[(n - len(self.preperiod)) % len(self.cycle)]

    def __str__(self) -> str:
        head = " ".join(str(s) for s in self.preperiod)
        tail = "(" + " ".join(str(s) for s in self.cycle) + ")"
        return f"{head} {tail}" if head else tail


def _side_sign(side: str) -> int:
    if side == RIGHT:
        return +1
    if side == LEFT:
        return -1
    raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}, got {side!r}")


def _symbols(t: Angle, sign: int, uc: UnlinkedClasses, d: int, count: int) -> list[int]:
    out = []
    u = t
    for _ in range(count):
        out.append(uc.side_label(u, sign))
        u = times_d(u, d)
    return out


def _canonical_itinerary(t: Angle, sign: int, uc: UnlinkedClasses, d: int) -> Itinerary:
    ell, per = preperiod_period(t, d)
    syms = _symbols(t, sign, uc, d, ell + per)
    return Itinerary.from_raw(tuple(syms[:ell]), tuple(syms[ell:]))


def itinerary(t: Angle, side: str, p: CriticalPortrait) -> Itinerary:
    """Canonical one-sided itinerary of t under the portrait's partition."""
    return _canonical_itinerary(t, _side_sign(side), unlinked_classes(p), p.d)


def kneading(p: CriticalPortrait) -> Kneading:
    """Periodic iff some portrait angle has a purely periodic one-sided
    itinerary."""
    uc = unlinked_classes(p)
    for theta in p.union:
        for sign in (+1, -1):
            if _canonical_itinerary(theta, sign, uc, p.d).is_periodic:
                return Kneading.PERIODIC
    return Kneading.APERIODIC


@dataclass(frozen=True, slots=True)
class AngleClass:
    """A full equivalence class with its witness itineraries.

    witnesses holds (angle, right itinerary, left itinerary) sorted by
    angle; chain-connectivity inside the class runs through equality of
    these fields.
    """

    elems: AngleSet
    witnesses: tuple[tuple[Angle, Itinerary, Itinerary], ...]

    def witness(self, t: Angle, side: str) -> Itinerary:
        sign = _side_sign(side)
        for a, right, left in self.witnesses:
            if a == t:
                return right if sign > 0 else left
        raise KeyError(f"{t} not in class {self.elems}")

    def __str__(self) -> str:
        return str(self.elems)


@lru_cache(maxsize=128)
def _itinerary_index(
    p: CriticalPortrait, ell: int, per: int, budget: int
) -> tuple[dict[Itinerary, tuple[Angle, ...]], dict[Angle, tuple[Itinerary, Itinerary]]]:
    """Candidate angles for the (ell, per) signature with their itineraries.

    Candidates are every angle with denominator dividing d^ell*(d^per - 1)
    plus all preimages of the block union up to depth ell: class members
    share the signature except possibly for boundary angles sitting on
    such preimages.
    """
    d = p.d
    den = d**ell * (d**per - 1)
    if den > budget:
        raise BudgetExceeded(f"denominator {den} exceeds budget {budget}")
    cands: set[Angle] = {Angle(k, den) for k in range(den)}
    level = set(p.union)
    cands |= level
    for _ in range(ell):
        level = {q for x in level for q in preimages(x, d)}
        cands |= level

    uc = unlinked_classes(p)
    key_map: dict[Itinerary, list[Angle]] = {}
    angle_keys: dict[Angle, tuple[Itinerary, Itinerary]] = {}
    for a in sorted(cands):
        it_r = _canonical_itinerary(a, +1, uc, d)
        it_l = _canonical_itinerary(a, -1, uc, d)
        angle_keys[a] = (it_r, it_l)
        key_map.setdefault(it_r, []).append(a)
        if it_l != it_r:
            key_map.setdefault(it_l, []).append(a)
    frozen = {k: tuple(v) for k, v in key_map.items()}
    return frozen, angle_keys


def class_of(t: Angle, p: CriticalPortrait, budget: int = 10_000_000) -> AngleClass:
    """Connected component of t in the itinerary-sharing graph."""
    ell, per = preperiod_period(t, p.d)
    key_map, angle_keys = _itinerary_index(p, ell, per, budget)
    comp = {t}
    frontier = [t]
    while frontier:
        x = frontier.pop()
        for key in angle_keys[x]:
            for y in key_map[key]:
                if y not in comp:
                    comp.add(y)
                    frontier.append(y)
    elems = AngleSet(comp)
    witnesses = tuple((a, *angle_keys[a]) for a in elems)
    return AngleClass(elems, witnesses)


@dataclass(frozen=True)
class RationalLamination:
    """All classes over a bounded preperiod/period range, deduplicated."""

    d: int
    portrait: CriticalPortrait
    classes: tuple[AngleClass, ...]
    preperiod_max: int
    period_max: int

    @cached_property
    def _by_angle(self) -> dict[Angle, AngleClass]:
        out: dict[Angle, AngleClass] = {}
        for c in self.classes:
            for a in c.elems:
                out[a] = c
        return out

    def class_containing(self, t: Angle) -> AngleClass | None:
        return self._by_angle.get(t)

    def dump(self) -> str:
        """One class per line, angles increasing, lines by smallest element."""
        return "\n".join(str(c.elems) for c in self.classes) + "\n"


def parse_dump(text: str) -> tuple[AngleSet, ...]:
    lines = [ln.strip() for ln in text.splitlines()]
    return tuple(
        AngleSet.parse(ln) for ln in lines if ln and not ln.startswith("#")
    )


def classes_up_to(
    p: CriticalPortrait,
    preperiod_max: int,
    period_max: int,
    budget: int = 10_000_000,
) -> RationalLamination:
    """Materialize every class meeting the preperiod/period bounds."""
    if period_max < 1:
        raise ValueError(f"period_max must be >= 1, got {period_max}")
    if preperiod_max < 0:
        raise ValueError(f"preperiod_max must be >= 0, got {preperiod_max}")
    d = p.d
    if d**preperiod_max * (d**period_max - 1) > budget:
        raise BudgetExceeded(
            f"denominator {d**preperiod_max * (d**period_max - 1)} "
            f"exceeds budget {budget}"
        )
    universe: set[Angle] = set()
    for q in range(1, period_max + 1):
        den = d**preperiod_max * (d**q - 1)
        universe.update(Angle(k, den) for k in range(den))
    covered: set[Angle] = set()
    out: list[AngleClass] = []
    for t in sorted(universe):
        if t in covered:
            continue
        c = class_of(t, p, budget)
        covered.update(c.elems)
        out.append(c)
    out.sort(key=lambda c: c.elems.angles[0])
    return RationalLamination(d, p, tuple(out), preperiod_max, period_max)


def check_R_properties(lam: RationalLamination) -> list[str]:
    """Violation report over the stored classes; empty means clean.

    Checks: a cardinality ceiling (soft finiteness bound), pairwise
    unlinkedness via one circular parenthesis scan, image-of-class is a
    class, and complementary arcs mapping onto complementary arcs of the
    image class.
    """
    violations: list[str] = []
    d = lam.d
    classes = lam.classes

    for c in classes:
        _, per = preperiod_period(c.elems.angles[0], d)
        bound = max(2**d, d * per)
        if len(c.elems) > bound:
            violations.append(
                f"R2: class {c.elems} has {len(c.elems)} angles, soft bound {bound}"
            )

    events: list[tuple[Angle, int]] = []
    for idx, c in enumerate(classes):
        events.extend((a, idx) for a in c.elems)
    if len({a for a, _ in events}) != len(events):
        violations.append("R3: stored classes are not pairwise disjoint")
    else:
        events.sort(key=lambda e: e[0])
        # non-crossing partition scan; linkedness on the circle shows up
        # as an ABAB pattern in any linear cut
        stack: list[int] = []
        open_set: set[int] = set()
        seen: dict[int, int] = {}
        for _, idx in events:
            if stack and stack[-1] == idx:
                seen[idx] += 1
            elif idx in open_set:
                violations.append(
                    f"R3: classes {classes[stack[-1]].elems} and "
                    f"{classes[idx].elems} are linked"
                )
                break
            else:
                stack.append(idx)
                open_set.add(idx)
                seen[idx] = 1
            if seen[idx] == len(classes[idx].elems):
                stack.pop()
                open_set.discard(idx)

    by_set = {c.elems: c for c in classes}
    for c in classes:
        img = c.elems.image(d)
        target = by_set.get(img)
        if target is None:
            violations.append(f"R4: image {img} of class {c.elems} is not a stored class")
            continue
        img_arcs = set(target.elems.gaps())
        for arc in c.elems.gaps():
            mapped = Arc(times_d(arc.lo, d), times_d(arc.hi, d))
            if mapped not in img_arcs:
                violations.append(
                    f"R5: arc {arc} of class {c.elems} maps to {mapped}, "
                    f"not a complementary arc of {img}"
                )
    return violations
