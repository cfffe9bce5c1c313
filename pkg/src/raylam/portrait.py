"""Critical portraits of degree-d circle dynamics.

A portrait is a collection of angle blocks, each collapsing to a single
angle under t -> d*t, pairwise unlinked, with block sizes summing to the
right total.  This module validates portraits, computes the d unlinked
classes of the complementary circle partition, and decides feasibility
of escape-rate vectors against the orbit-derived inequality constraints.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .angles import (
    ZERO,
    Angle,
    AngleSet,
    Arc,
    cyclic_between,
    preperiod_period,
    times_d,
    unlinked,
)


class PortraitError(ValueError):
    """Base for portrait validation failures; `axiom` names the broken rule."""

    axiom = "CP?"


class BadImage(PortraitError):
    """A block does not collapse to a single angle under t -> d*t."""

    axiom = "CP1"


class TooSmall(PortraitError):
    """A block has fewer than two angles."""

    axiom = "CP1"


class Linked(PortraitError):
    """Two blocks are linked or share an angle."""

    axiom = "CP2"


class WrongCount(PortraitError):
    """Block sizes minus one do not sum to d - 1."""

    axiom = "CP3"


class BoundaryAngle(ValueError):
    """A class label was requested for an angle on a block boundary."""


@dataclass(frozen=True, slots=True, eq=False)
class CriticalPortrait:
    """Degree d and blocks in caller order (order pairs with rate vectors)."""

    d: int
    blocks: tuple[AngleSet, ...]

    # Equality ignores block order: a portrait is a collection of blocks.
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CriticalPortrait)
            and self.d == other.d
            and frozenset(self.blocks) == frozenset(other.blocks)
        )

    def __hash__(self) -> int:
        return hash((self.d, frozenset(self.blocks)))

    @property
    def union(self) -> AngleSet:
        return AngleSet(a for b in self.blocks for a in b)

    def __str__(self) -> str:
        return portrait_to_text(self)


def validate_portrait(d: int, blocks: Iterable[Iterable[Angle]]) -> CriticalPortrait:
    """Check CP1 (collapse and size), CP2 (unlinked), CP3 (count).

    Collapse failures are reported before anything else, so a block that
    both maps badly and participates in some other violation surfaces as
    BadImage.
    """
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    bl = tuple(AngleSet(b) for b in blocks)
    if not bl:
        raise WrongCount("CP3: portrait has no blocks")
    for b in bl:
        img = b.image(d)
        if len(img) != 1:
            raise BadImage(f"CP1: block {{{b}}} maps to {len(img)} angles")
    for b in bl:
        if len(b) < 2:
            raise TooSmall(f"CP1: block {{{b}}} has fewer than 2 angles")
    for i in range(len(bl)):
        for j in range(i + 1, len(bl)):
            if set(bl[i].angles) & set(bl[j].angles):
                raise Linked(f"CP2: blocks {{{bl[i]}}} and {{{bl[j]}}} intersect")
            if not unlinked(bl[i], bl[j]):
                raise Linked(f"CP2: blocks {{{bl[i]}}} and {{{bl[j]}}} are linked")
    count = sum(len(b) - 1 for b in bl)
    if count != d - 1:
        raise WrongCount(f"CP3: sum of (block size - 1) is {count}, need {d - 1}")
    return CriticalPortrait(d, bl)


def parse_portrait_text(text: str) -> tuple[int, list[AngleSet]]:
    """Parse the `d=<int>` + one-block-per-line format; syntax only.

    Degree sanity lives here too: a file claiming d=1 is malformed input,
    not a portrait that fails validation.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("d="):
        raise ValueError("first line must be d=<int>")
    try:
        d = int(lines[0][2:])
    except ValueError as exc:
        raise ValueError(f"bad degree {lines[0][2:]!r}") from exc
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    blocks = [AngleSet.parse(ln) for ln in lines[1:]]
    if any(len(b) == 0 for b in blocks):
        raise ValueError("empty block line")
    return d, blocks


def portrait_to_text(p: CriticalPortrait) -> str:
    lines = [f"d={p.d}"]
    lines.extend(str(b) for b in p.blocks)
    return "\n".join(lines) + "\n"


class UnlinkedClasses:
    """The d complementary classes, label 1 anchored at angle 0.

    classes[k] is the tuple of open arcs of label k+1.  Label 1 goes to
    the class whose interior or right-side closure contains 0; the rest
    are ordered by the smallest left endpoint among their arcs.
    """

    __slots__ = ("d", "classes", "_boundary", "_gap_label", "_right", "_left")

    def __init__(self, d: int, classes: tuple[tuple[Arc, ...], ...]):
        self.d = d
        self.classes = classes
        # lookup tables: sorted boundary angles, gap index -> label,
        # boundary angle -> (label on right side, label on left side)
        bound = sorted({arc.lo for cls in classes for arc in cls})
        self._boundary = bound
        gap_label = [0] * len(bound)
        right: dict[Angle, int] = {}
        left: dict[Angle, int] = {}
        for k, cls in enumerate(classes):
            for arc in cls:
                i = bound.index(arc.lo)
                gap_label[i] = k + 1
                right[arc.lo] = k + 1
                left[arc.hi] = k + 1
        self._gap_label = gap_label
        self._right = right
        self._left = left

    def label_of(self, x: Angle) -> int:
        """1-based label of the class containing x strictly."""
        if x in self._right:
            raise BoundaryAngle(f"{x} lies on a block boundary")
        return self.side_label(x, +1)

    def side_label(self, x: Angle, side: int) -> int:
        """Label of the class touching x on the given side (+1 ccw, -1 cw)."""
        if x in self._right:
            return self._right[x] if side > 0 else self._left[x]
        i = (bisect_left(self._boundary, x) - 1) % len(self._boundary)
        return self._gap_label[i]

    def arcs_of(self, label: int) -> tuple[Arc, ...]:
        return self.classes[label - 1]

    def lengths(self) -> tuple[Fraction, ...]:
        return tuple(
            sum((a.length for a in cls), Fraction(0)) for cls in self.classes
        )


@lru_cache(maxsize=256)
def unlinked_classes(p: CriticalPortrait) -> UnlinkedClasses:
    """Partition the circle minus the block union into the d classes.

    Two gaps belong to the same class iff they sit inside the same
    complementary arc of every block: the blocks' chords cut the disk,
    and a class is one of the resulting faces read off on the circle.
    """
    union = sorted(set(p.union.angles))
    n = len(union)
    gaps = [Arc(union[i], union[(i + 1) % n]) for i in range(n)]

    block_vals = [list(b.angles) for b in p.blocks]

    def signature(g: Arc) -> tuple[int, ...]:
        sig = []
        for vals in block_vals:
            # index of the block arc whose closure holds the gap: the gap
            # either starts at a block angle or strictly inside a block arc
            sig.append((bisect_right(vals, g.lo) - 1) % len(vals))
        return tuple(sig)

    by_sig: dict[tuple[int, ...], list[Arc]] = {}
    for g in gaps:
        by_sig.setdefault(signature(g), []).append(g)
    classes = [tuple(arcs) for arcs in by_sig.values()]
    if len(classes) != p.d:
        raise AssertionError(
            f"{len(classes)} classes for degree {p.d}; portrait not validated?"
        )

    def holds_zero(cls: tuple[Arc, ...]) -> bool:
        return any(
            arc.lo == ZERO or cyclic_between(ZERO, arc) for arc in cls
        )

    first = [c for c in classes if holds_zero(c)]
    rest = sorted(
        (c for c in classes if not holds_zero(c)),
        key=lambda cls: min(a.lo.fraction for a in cls),
    )
    assert len(first) == 1
    ordered = tuple(first + rest)
    return UnlinkedClasses(p.d, ordered)


def contains_closed_set(class_arcs: Sequence[Arc], s: AngleSet) -> bool:
    """True iff every angle of s lies in the closure of the arc union."""
    return all(
        any(arc.closure_contains(x) for arc in class_arcs) for x in s
    )


def rate_constraints(p: CriticalPortrait) -> tuple[tuple[int, int, int], ...]:
    """All (n, i, j) with the n-th image of block i landing in block j.

    Collected over one preperiod+period sweep of each block's common
    image; later hits repeat with weaker inequalities, so this set is
    complete for feasibility.
    """
    owner: dict[Angle, int] = {}
    for j, b in enumerate(p.blocks):
        for a in b:
            owner[a] = j
    out: set[tuple[int, int, int]] = set()
    for i, b in enumerate(p.blocks):
        v = next(iter(b.image(p.d)))
        ell, per = preperiod_period(v, p.d)
        u = v
        for n in range(1, ell + per + 1):
            if u in owner:
                out.add((n, i, owner[u]))
            u = times_d(u, p.d)
    return tuple(sorted(out))


def escape_rates_feasible(p: CriticalPortrait, rates: Sequence[float]) -> bool:
    """Decide whether the rate vector satisfies every d^n*r_i > r_j."""
    if len(rates) != len(p.blocks):
        raise ValueError(
            f"{len(rates)} rates for {len(p.blocks)} blocks"
        )
    if any(r <= 0 for r in rates):
        raise ValueError("rates must be strictly positive")
    return all(
        p.d**n * rates[i] > rates[j] for n, i, j in rate_constraints(p)
    )
