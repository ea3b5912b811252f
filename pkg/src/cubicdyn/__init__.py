"""cubicdyn: computational dynamics of the cubic family z^3 - 3a^2 z + b.

Subpackages cover exact/numeric critical orbits, Green functions and
canonical heights over Q, symbolic relation curves and PCF parameter search,
Laurent pole analysis at punctures of parametrized curves, formal Boettcher
coordinates, and desk-scale equidistribution experiments.
"""

from .dynamics import (
    CubicParam,
    Escaping,
    OrbitTail,
    Preperiodic,
    Undecided,
    critical_orbit,
    escape_bound,
    eval_f,
    find_orbit_relation,
    is_preperiodic_exact,
)

__all__ = [
    "CubicParam",
    "Escaping",
    "OrbitTail",
    "Preperiodic",
    "Undecided",
    "critical_orbit",
    "escape_bound",
    "eval_f",
    "find_orbit_relation",
    "is_preperiodic_exact",
]

__version__ = "0.1.0"
