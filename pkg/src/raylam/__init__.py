"""Exact combinatorics of critical portraits with a numerical ray tracer.

The exact side (angles, portraits, laminations, orbit portraits) never
touches floating point; the numerical side (polynomials, rays) never
invents angles.  The two meet in `empirical_lamination` and the CLI
verify command, which compare ray landing patterns against the
combinatorially predicted classes.
"""

from .angles import (
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
from .diagram import render_svg
from .dynamics import (
    Ambiguous,
    Diverged,
    EmpiricalLamination,
    NonConvergence,
    NotEscaping,
    NotUnicritical,
    OnBoundary,
    Polynomial,
    RayStatus,
    TraceOptions,
    TracedRay,
    critical_points,
    empirical_lamination,
    green,
    green_with_flag,
    point_in_sector,
    preimages_of,
    ray_csv,
    trace_ray,
    unicritical_portrait,
)
from .lamination import (
    AngleClass,
    BudgetExceeded,
    Itinerary,
    Kneading,
    RationalLamination,
    check_R_properties,
    class_of,
    classes_up_to,
    itinerary,
    kneading,
    parse_dump,
)
from .orbit_portrait import (
    DegenerateSectorWarning,
    NotBijective,
    NotInvariant,
    NotPeriodic,
    OrbitPortrait,
    OrbitPortraitError,
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
from .portrait import (
    BadImage,
    BoundaryAngle,
    CriticalPortrait,
    PortraitError,
    TooSmall,
    UnlinkedClasses,
    WrongCount,
    escape_rates_feasible,
    parse_portrait_text,
    portrait_to_text,
    rate_constraints,
    unlinked_classes,
    validate_portrait,
)

# portrait.Linked and orbit_portrait.Linked are both meaningful; import
# them from their modules to avoid shadowing

__version__ = "0.1.0"

__all__ = [
    "Ambiguous",
    "Angle",
    "AngleClass",
    "AngleSet",
    "Arc",
    "BadImage",
    "BoundaryAngle",
    "BudgetExceeded",
    "CriticalPortrait",
    "DegenerateSectorWarning",
    "Diverged",
    "EmpiricalLamination",
    "Itinerary",
    "Kneading",
    "NonConvergence",
    "NotBijective",
    "NotDisjoint",
    "NotEscaping",
    "NotInvariant",
    "NotPeriodic",
    "NotUnicritical",
    "OnBoundary",
    "OrbitPortrait",
    "OrbitPortraitError",
    "OrderViolation",
    "Polynomial",
    "PortraitError",
    "RationalLamination",
    "RayStatus",
    "Sector",
    "TooSmall",
    "TraceOptions",
    "TracedRay",
    "UnlinkedClasses",
    "WrongCount",
    "check_R_properties",
    "check_cycle_bounds",
    "class_of",
    "classes_up_to",
    "critical_points",
    "critical_weight",
    "cycle_count",
    "cyclic_between",
    "empirical_lamination",
    "escape_rates_feasible",
    "green",
    "green_with_flag",
    "itinerary",
    "kneading",
    "orbit_to_text",
    "parse_angle",
    "parse_dump",
    "parse_orbit_text",
    "parse_portrait_text",
    "point_in_sector",
    "portrait_to_text",
    "preimages",
    "preimages_of",
    "preperiod_period",
    "rate_constraints",
    "ray_csv",
    "render_svg",
    "rotation_number",
    "sector_length_step",
    "sector_map",
    "sector_nesting",
    "sectors",
    "times_d",
    "trace_ray",
    "unicritical_portrait",
    "unlinked",
    "unlinked_classes",
    "validate_orbit_portrait",
    "validate_portrait",
]
