"""Numerics for monic centered polynomials: escape rates and external rays.

Angles stay exact rationals throughout; only plane coordinates are
floating point.  Rays are traced by iterated pullback of points on a
geometric potential grid, selecting at each level the preimage nearest
the previous pass.

Pullbacks near a critical point suffer catastrophic cancellation: the
quantity that matters is the tiny offset between the incoming point and
the critical value, and in a chain of ramified landings (critical point
mapping onto another critical point) the offsets compound, leaving a
double-precision resolution floor as coarse as eps^(1/4) ~ 1e-4.  The
opt-in extended mode therefore solves the lowest pullback levels in
192-bit arithmetic (gmpy2), which pushes that floor far below every
tolerance used here; levels deeper in the chain have grown their offsets
well clear of double precision and stay fast.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np

from .angles import Angle, AngleSet, preimages as angle_preimages, times_d
from .portrait import CriticalPortrait, validate_portrait

_MP_BITS = 192
_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)
# pullback levels solved in extended precision when enabled; offsets at
# deeper levels have expanded by the derivative along the orbit and fit
# comfortably in doubles
_EXT_LEVELS = 24


def _mp_ctx():
    ctx = gmpy2.get_context()
    if ctx.precision != _MP_BITS:
        ctx.precision = _MP_BITS
    return ctx


def _mp_omega():
    _mp_ctx()
    return gmpy2.mpc(gmpy2.mpfr("-0.5"), gmpy2.sqrt(gmpy2.mpfr(3)) / 2)


class NonConvergence(RuntimeError):
    pass


class Ambiguous(RuntimeError):
    """Preimage selection fell inside the safety margin of a branch point."""


class Diverged(RuntimeError):
    """A pulled-back point left any plausible neighborhood of the Julia set."""


class OnBoundary(RuntimeError):
    """The queried point sits within tolerance of a bounding ray."""


class NotEscaping(ValueError):
    pass


class NotUnicritical(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Polynomial:
    """Monic centered polynomial z^d + a_{d-2} z^{d-2} + ... + a_0.

    coeffs stores (a_{d-2}, ..., a_0); the z^{d-1} coefficient is
    identically zero by convention.
    """

    degree: int
    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        if self.degree < 2:
            raise ValueError(f"degree must be >= 2, got {self.degree}")
        if len(self.coeffs) != self.degree - 1:
            raise ValueError(
                f"degree {self.degree} needs {self.degree - 1} coefficients, "
                f"got {len(self.coeffs)}"
            )

    def __call__(self, z):
        acc = 1
        for c in (0, *self.coeffs):
            acc = acc * z + c
        return acc

    def deriv(self, z):
        # f' has coefficient vector [d, 0, (d-2) a_{d-2}, ..., 1 a_1]
        acc = self.degree
        acc = acc * z
        for k, c in zip(range(self.degree - 2, 0, -1), self.coeffs[:-1]):
            acc = acc * z + k * c
        return acc

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        s = text.replace(" ", "").replace("\t", "").replace("**", "^").replace("*", "")
        if not s:
            raise ValueError("empty polynomial")
        parts: list[str] = []
        cur = ""
        for ch in s:
            if ch in "+-" and cur and cur[-1] not in "eE^":
                parts.append(cur)
                cur = ch
            else:
                cur += ch
        parts.append(cur)
        term_re = re.compile(
            r"([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(i)?(z(?:\^(\d+))?)?"
        )
        powers: dict[int, complex] = {}
        for term in parts:
            m = term_re.fullmatch(term)
            if not m or (m.group(2) is None and m.group(3) is None and m.group(4) is None):
                raise ValueError(f"cannot parse term {term!r}")
            sign, num, imag, zpart, pw = m.groups()
            mag = float(num) if num is not None else 1.0
            c = complex(0.0, mag) if imag else complex(mag)
            if sign == "-":
                c = -c
            k = int(pw) if pw else (1 if zpart else 0)
            powers[k] = powers.get(k, 0j) + c
        d = max(powers)
        if d < 2:
            raise ValueError(f"degree must be >= 2, got {d}")
        if powers[d] != 1:
            raise ValueError(f"leading coefficient must be 1, got {powers[d]}")
        if powers.get(d - 1, 0j) != 0:
            raise ValueError(f"centered form required: z^{d - 1} term must vanish")
        coeffs = tuple(complex(powers.get(k, 0j)) for k in range(d - 2, -1, -1))
        return cls(d, coeffs)

    def __str__(self) -> str:
        # one term per nonzero real/imag part so parse() can read it back
        terms = [f"z^{self.degree}"]
        for k, c in zip(range(self.degree - 2, -1, -1), self.coeffs):
            zs = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if c.real != 0:
                terms.append(f"{c.real:+.17g}{zs}")
            if c.imag != 0:
                terms.append(f"{c.imag:+.17g}i{zs}")
        return "".join(terms)


def _eval_vec(vec, z):
    acc = vec[0]
    for c in vec[1:]:
        acc = acc * z + c
    return acc


def critical_points(f: Polynomial, max_iter: int = 60) -> list[complex]:
    """Roots of f', closed form through degree 3, then Newton-polished to
    residual below 1e-12 times the derivative's coefficient scale."""
    d = f.degree
    dvec = [complex(d), 0j] + [complex(k * c) for k, c in zip(range(d - 2, 0, -1), f.coeffs[:-1])]
    if d == 2:
        return [0j]
    if d == 3:
        a1 = f.coeffs[0]
        r = cmath.sqrt(-a1 / 3)
        roots = [r, -r]
    else:
        roots = [complex(r) for r in np.roots(np.array(dvec, dtype=complex))]
    scale = max(1.0, max(abs(c) for c in dvec))
    d2vec = [c * k for c, k in zip(dvec[:-1], range(len(dvec) - 1, 0, -1))]
    out = []
    for z in roots:
        for _ in range(max_iter):
            fz = _eval_vec(dvec, z)
            if abs(fz) < 1e-12 * scale:
                break
            dfz = _eval_vec(d2vec, z)
            if dfz == 0:
                break
            z = z - fz / dfz
        if abs(_eval_vec(dvec, z)) >= 1e-12 * scale:
            raise NonConvergence(f"critical point polish stalled at {z}")
        out.append(z)
    out.sort(key=lambda w: (round(w.real, 12), round(w.imag, 12)))
    return out


def green_with_flag(f: Polynomial, z: complex, budget: int = 1000) -> tuple[float, bool]:
    """Escape rate of z and a bounded-orbit flag.

    Iterates until |w| clears 1e8, then adds three exact-ratio
    corrections, leaving a relative error near machine precision.  Orbits
    still small after the budget are reported bounded with rate 0.
    """
    d = f.degree
    w = complex(z)
    n = 0
    while abs(w) <= 1e8:
        if n >= budget:
            return 0.0, True
        w = f(w)
        n += 1
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise Diverged(f"orbit of {z} overflowed after {n} steps")
    # keep the d^-n scale in floats: the int power overflows the
    # conversion for slow escapers, and underflow to 0.0 is the right
    # answer at double precision anyway
    inv = float(d) ** -n
    g = math.log(abs(w)) * inv
    cap = 10.0 ** (250.0 / d)
    for _ in range(3):
        if abs(w) > cap:
            break
        fw = f(w)
        ratio = fw / w**d
        inv /= d
        g += math.log(abs(ratio)) * inv
        w = fw
        n += 1
    return g, False


def green(f: Polynomial, z: complex, budget: int = 1000) -> float:
    return green_with_flag(f, z, budget)[0]


def _cubic_roots(p, q, ext: bool):
    """Roots of z^3 + p z + q, inputs already in the working precision."""
    if ext:
        sqrt_, log_, exp_ = gmpy2.sqrt, gmpy2.log, gmpy2.exp
        omega = _mp_omega()
        zero = gmpy2.mpc(0)
    else:
        sqrt_, log_, exp_ = cmath.sqrt, cmath.log, cmath.exp
        omega = _OMEGA
        zero = 0j

    def cbrt(x):
        return zero if x == 0 else exp_(log_(x) / 3)

    if p == 0:
        u = cbrt(-q)
        return [u, u * omega, u * omega.conjugate()]
    disc = (q / 2) ** 2 + (p / 3) ** 3
    s = sqrt_(disc)
    c1 = -q / 2 + s
    c2 = -q / 2 - s
    u = cbrt(c1 if abs(c1) >= abs(c2) else c2)
    v = -p / (3 * u)
    wbar = omega.conjugate()
    return [u + v, u * omega + v * wbar, u * wbar + v * omega]


@lru_cache(maxsize=64)
def _coeff_vectors(f: Polynomial, ext: bool):
    """(f, f') Horner vectors coerced to the working precision.

    Coefficients may be handed in as any complex-like numbers, including
    gmpy2 values carrying more than double precision; the double path
    rounds them, the extended path keeps everything it was given.
    """
    if ext:
        _mp_ctx()
        conv = gmpy2.mpc
    else:
        conv = complex
    fvec = tuple(conv(c) for c in (1, 0, *f.coeffs))
    dvec = tuple(
        [conv(f.degree), conv(0)]
        + [conv(k) * conv(c) for k, c in zip(range(f.degree - 2, 0, -1), f.coeffs[:-1])]
    )
    return fvec, dvec


def preimages_of(f: Polynomial, y, ext: bool = False) -> list:
    """All d solutions of f(z) = y, Newton-polished in the working precision."""
    d = f.degree
    fvec, dvec = _coeff_vectors(f, ext)
    if ext:
        y = gmpy2.mpc(y)
    polish_rounds = 1
    if d == 2:
        t = y - fvec[2]
        r = gmpy2.sqrt(t) if ext else cmath.sqrt(t)
        roots = [r, -r]
    elif d == 3:
        roots = _cubic_roots(fvec[2], fvec[3] - y, ext)
    else:
        vec = [1.0, 0.0, *(complex(c) for c in f.coeffs[:-1]), complex(f.coeffs[-1]) - complex(y)]
        roots = [complex(r) for r in np.roots(np.array(vec, dtype=complex))]
        if ext:
            # double seeds; quadratic convergence wants a few rounds
            roots = [gmpy2.mpc(r) for r in roots]
            polish_rounds = 3
    polished = []
    for r in roots:
        for _ in range(polish_rounds):
            fr = _eval_vec(fvec, r) - y
            d1 = _eval_vec(dvec, r)
            if d1 == 0:
                break
            r = r - fr / d1
        polished.append(r)
    return polished


class RayStatus(Enum):
    LANDED = "landed"
    ESCAPED_BUDGET = "escaped-budget"
    BOUNCED = "bounced"


@dataclass(frozen=True, slots=True)
class TraceOptions:
    g0: float = 4.0
    substeps: int = 12
    tol: float = 1e-8
    budget: int = 100_000
    margin: float = 0.25
    strict: bool = False
    extended: bool = False


@dataclass(frozen=True, slots=True)
class TracedRay:
    argument: Angle
    potentials: tuple[float, ...]
    samples: tuple[complex, ...]
    landing: complex | None
    status: RayStatus


def _top_point(theta: Angle, g: float, ext: bool):
    if ext:
        _mp_ctx()
        arg = 2 * gmpy2.const_pi() * theta.num / theta.den
        return gmpy2.exp(gmpy2.mpc(gmpy2.mpfr(g), arg))
    return cmath.exp(complex(g, 2.0 * math.pi * (theta.num / theta.den)))


def trace_ray(f: Polynomial, t: Angle, opts: TraceOptions | None = None) -> TracedRay:
    """Trace the external ray at angle t inward until it lands or gives up.

    Points at potential g are produced as exact d^N-fold forward images
    pulled back N times; the exact angle multiplication keeps the ray
    from drifting to a neighbor under the chaotic forward dynamics.
    Landing is declared when the samples move less than opts.tol over a
    full decade of potential.
    """
    opts = opts or TraceOptions()
    d = f.degree
    if opts.g0 <= 0:
        raise ValueError("g0 must be positive")

    fwd_angles = [t]

    def fwd(k: int) -> Angle:
        while len(fwd_angles) <= k:
            fwd_angles.append(times_d(fwd_angles[-1], d))
        return fwd_angles[k]

    # one decade of potential in substeps of 2^(1/substeps)
    window = math.ceil(opts.substeps * math.log2(10.0))
    escape_cap = math.exp(opts.g0) * 20.0
    shrink = 1.0 - 2.0 ** (1.0 / opts.substeps)

    potentials: list[float] = []
    samples: list[complex] = []
    prev_chain: list | None = None
    budget = opts.budget
    status: RayStatus | None = None
    landing: complex | None = None
    i = 0
    while status is None:
        g = opts.g0 * 2.0 ** (-i / opts.substeps)
        depth = 0
        while g * d**depth < opts.g0 * (1.0 - 1e-12):
            depth += 1
        chain: list = [None] * (depth + 1)
        chain[depth] = _top_point(fwd(depth), g * d**depth, opts.extended and depth < _EXT_LEVELS)
        bounced_at = None
        level_g = g * d**depth
        for k in range(depth - 1, -1, -1):
            y = chain[k + 1]
            level_g /= d
            # depth grows by at most one per substep, so a reference from
            # the previous pass always exists below the top level; it sits
            # one substep higher in potential, so shrink it radially to
            # where this pass expects the point.  Near the top the map is
            # radial and the correction is exact; near landing it tends to
            # 1.  Without it a coarse substep reads as a branch bounce.
            ref = prev_chain[k] * math.exp(level_g * shrink)
            ext_here = opts.extended and k < _EXT_LEVELS
            roots = preimages_of(f, y, ext_here)
            budget -= 1
            dists = sorted(range(len(roots)), key=lambda idx: abs(roots[idx] - ref))
            best = roots[dists[0]]
            if len(roots) > 1:
                rival = roots[dists[1]]
                gap = abs(best - rival)
                if abs(best - ref) > opts.margin * gap:
                    bounced_at = (k, g)
                    break
            chain[k] = best
        if bounced_at is not None:
            if opts.strict:
                raise Ambiguous(
                    f"ray {t}: preimage choice at level {bounced_at[0]}, "
                    f"potential {bounced_at[1]:.6g}, fell inside the margin"
                )
            status = RayStatus.BOUNCED
            break
        z0 = complex(chain[0])
        if not (math.isfinite(z0.real) and math.isfinite(z0.imag)) or abs(z0) > escape_cap:
            raise Diverged(f"ray {t}: sample {z0} at potential {g:.6g}")
        potentials.append(g)
        samples.append(z0)
        if len(samples) > window:
            recent = samples[-window - 1 :]
            if max(abs(s - z0) for s in recent) < opts.tol:
                status = RayStatus.LANDED
                landing = z0
                break
        if budget <= 0:
            status = RayStatus.ESCAPED_BUDGET
            break
        prev_chain = chain
        i += 1
    return TracedRay(t, tuple(potentials), tuple(samples), landing, status)


def ray_csv(ray: TracedRay) -> str:
    lines = ["potential,re,im"]
    for g, z in zip(ray.potentials, ray.samples):
        lines.append(f"{g:.17g},{z.real:.17g},{z.imag:.17g}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EmpiricalLamination:
    """Landing-point grouping of a batch of rays, plus per-ray failures."""

    groups: tuple[AngleSet, ...]
    tol: float
    landings: dict[Angle, complex]
    errors: dict[Angle, str]
    comparison: tuple[str, ...] | None = None


def empirical_lamination(
    f: Polynomial,
    angles,
    tol: float,
    opts: TraceOptions | None = None,
    predicted=None,
) -> EmpiricalLamination:
    """Trace every angle, group landings by single linkage at tol, and
    optionally diff the grouping against a predicted lamination."""
    landings: dict[Angle, complex] = {}
    errors: dict[Angle, str] = {}
    for a in AngleSet(angles):
        try:
            ray = trace_ray(f, a, opts)
        except (Ambiguous, Diverged) as exc:
            errors[a] = f"{type(exc).__name__}: {exc}"
            continue
        if ray.status is not RayStatus.LANDED:
            errors[a] = ray.status.value
            continue
        landings[a] = ray.landing

    items = sorted(landings)
    parent = {a: a for a in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for idx, a in enumerate(items):
        for b in items[idx + 1 :]:
            if abs(landings[a] - landings[b]) <= tol:
                parent[find(a)] = find(b)
    buckets: dict[Angle, list[Angle]] = {}
    for a in items:
        buckets.setdefault(find(a), []).append(a)
    groups = tuple(
        AngleSet(v) for v in sorted(buckets.values(), key=lambda v: min(v))
    )

    comparison = None
    if predicted is not None:
        comparison = _compare_groups(groups, predicted, set(landings))
    return EmpiricalLamination(groups, tol, landings, errors, comparison)


def _compare_groups(groups, predicted, universe: set[Angle]) -> tuple[str, ...]:
    emp: dict[Angle, frozenset[Angle]] = {}
    for g in groups:
        members = frozenset(x for x in g if x in universe)
        for a in g:
            emp[a] = members
    msgs: list[str] = []
    reported: set[frozenset[Angle]] = set()
    for a in sorted(universe):
        cls = predicted.class_containing(a)
        if cls is None:
            continue
        want = frozenset(x for x in cls.elems if x in universe)
        got = emp[a]
        if got != want and got not in reported:
            reported.add(got)
            msgs.append(
                f"{a}: rays land as {AngleSet(got)} but classes give {AngleSet(want)}"
            )
    return tuple(msgs)


def point_in_sector(
    rays: tuple[TracedRay, TracedRay],
    z: complex,
    boundary_tol: float = 1e-9,
    landing_tol: float = 1e-6,
) -> bool:
    """Whether z lies in the sector bounded by two co-landing rays.

    The sector runs counterclockwise from the first ray's angle to the
    second's, capped by an equipotential arc at the rays' top potential.
    Decided by crossing parity against that closed curve; points within
    boundary_tol of it raise OnBoundary.
    """
    ra, rb = rays
    if ra.status is not RayStatus.LANDED or rb.status is not RayStatus.LANDED:
        raise ValueError("both rays must have landed")
    if abs(ra.landing - rb.landing) > landing_tol:
        raise ValueError(
            f"rays land {abs(ra.landing - rb.landing):.3g} apart, "
            f"beyond {landing_tol:.3g}"
        )
    mid = (ra.landing + rb.landing) / 2.0
    ta = Fraction(ra.argument.num, ra.argument.den)
    tb = Fraction(rb.argument.num, rb.argument.den)
    span = float((tb - ta) % 1)
    g_top = ra.potentials[0]
    steps = 90
    cap = [
        cmath.exp(complex(g_top, 2.0 * math.pi * (float(ta) + span * j / steps)))
        for j in range(steps, -1, -1)
    ]
    poly: list[complex] = list(ra.samples) + [mid] + list(reversed(rb.samples)) + cap

    # boundary proximity first; parity is meaningless on the curve itself
    for p, q in zip(poly, poly[1:] + poly[:1]):
        seg = q - p
        L2 = seg.real**2 + seg.imag**2
        if L2 == 0:
            dist = abs(z - p)
        else:
            u = ((z - p).real * seg.real + (z - p).imag * seg.imag) / L2
            u = min(1.0, max(0.0, u))
            dist = abs(z - (p + u * seg))
        if dist < boundary_tol:
            raise OnBoundary(f"point {z} is {dist:.3g} from the sector boundary")

    inside = False
    for p, q in zip(poly, poly[1:] + poly[:1]):
        if (p.imag > z.imag) != (q.imag > z.imag):
            x_cross = p.real + (z.imag - p.imag) * (q.real - p.real) / (q.imag - p.imag)
            if z.real < x_cross:
                inside = not inside
    return inside


def unicritical_portrait(
    f: Polynomial,
    max_denominator: int = 10**6,
    budget: int = 1000,
) -> CriticalPortrait:
    """Critical portrait of z^d + c with escaping critical point.

    The external argument of the critical value is accumulated as a
    convergent series of argument corrections along the escaping orbit,
    then snapped to the nearest fraction within max_denominator; the
    portrait block is its full preimage set.
    """
    if any(c != 0 for c in f.coeffs[:-1]):
        raise NotUnicritical(f"{f} has intermediate terms")
    d = f.degree
    a0 = f.coeffs[-1]
    if a0 == 0:
        raise NotEscaping("critical point 0 is fixed")
    _, bounded = green_with_flag(f, 0j, budget)
    if bounded:
        raise NotEscaping("critical orbit stays bounded within the budget")
    z = a0
    theta = cmath.phase(z) / (2.0 * math.pi)
    inv = 1.0  # float d^-n scale; the int power overflows for slow escapers
    n = 0
    while abs(z) <= 1e10 and n < budget:
        inv /= d
        theta += cmath.phase(1 + a0 / z**d) * inv / (2.0 * math.pi)
        z = f(z)
        n += 1
    tv = Fraction(theta % 1.0).limit_denominator(max_denominator)
    base = Angle(tv.numerator, tv.denominator)
    block = AngleSet(angle_preimages(base, d))
    return validate_portrait(d, [block])
