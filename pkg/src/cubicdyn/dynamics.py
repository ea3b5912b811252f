"""Iteration of the cubic family f_{a,b}(z) = z^3 - 3a^2 z + b.

Critical points are +a and -a by construction.  Exact (rational) orbits give
certified preperiodicity / escape verdicts; numeric orbits back the Green
function machinery in `heights`.

Escape certificates use B = max(1, sqrt(3|a|^2 + |b| + 2)).  For |z| >= B
(and B >= 1):

    |f(z)| >= |z|^3 - 3|a|^2 |z| - |b| >= |z| (|z|^2 - 3|a|^2 - |b|) >= 2|z|,

so once an orbit passes B it doubles forever; Escaping verdicts are proofs,
not heuristics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import BudgetExceededError
from .util import bit_size

#: exact-iteration budget: total numerator+denominator bits of any orbit value
DEFAULT_BIT_BUDGET = 1 << 20

Scalar = Union[Fraction, complex, float]


@dataclass(frozen=True)
class CubicParam:
    """Parameter (a, b) of f_{a,b}; any pair of scalars is valid."""

    a: Scalar
    b: Scalar

    def critical_point(self, sign: int) -> Scalar:
        return self.a if sign > 0 else -self.a


def eval_f(p: CubicParam, z: Scalar) -> Scalar:
    """One application of f_{a,b}: z^3 - 3 a^2 z + b, in the scalar domain."""
    return z * z * z - 3 * p.a * p.a * z + p.b


def escape_bound(p: CubicParam) -> float:
    """Certified escape radius B = max(1, sqrt(3|a|^2 + |b| + 2))."""
    return max(1.0, math.sqrt(3.0 * abs(p.a) ** 2 + abs(p.b) + 2.0))


def escape_bound_sq(p: CubicParam) -> Fraction:
    """B^2 as an exact rational, for certified comparisons (rational params).

    3a^2 + |b| + 2 >= 2 always, so the max-with-1 clamp never binds.
    """
    return 3 * p.a * p.a + abs(p.b) + 2


def _check_bits(value: Fraction, budget: int) -> None:
    if bit_size(value) > budget:
        raise BudgetExceededError(
            f"orbit value exceeds {budget}-bit budget", budget=budget
        )


def critical_orbit(p: CubicParam, sign: int, n: int,
                   bit_budget: int = DEFAULT_BIT_BUDGET) -> list:
    """Orbit segment [c_0, ..., c_n] of the critical point sign*a.

    Uses the recursion c_{k+1} = c_k^3 - 3 a^2 c_k + b.  Exact scalars are
    subject to the bit-size budget (rational orbits grow cubically).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = p.critical_point(sign)
    orbit = [c]
    exact = isinstance(c, Fraction)
    for _ in range(n):
        c = eval_f(p, c)
        if exact:
            _check_bits(c, bit_budget)
        orbit.append(c)
    return orbit


@dataclass(frozen=True)
class OrbitTail:
    """Certificate c_m = c_{m+p} with m, p minimal."""

    preperiod: int
    period: int
    enter_value: Fraction
    return_value: Fraction


@dataclass(frozen=True)
class Preperiodic:
    tail: OrbitTail


@dataclass(frozen=True)
class Escaping:
    step: int
    bound: float


@dataclass(frozen=True)
class Undecided:
    budget: int
    reason: str


Verdict = Union[Preperiodic, Escaping, Undecided]


def is_preperiodic_exact(p: CubicParam, start: Fraction, max_steps: int,
                         bit_budget: int = DEFAULT_BIT_BUDGET) -> Verdict:
    """Decide the fate of an exact rational orbit.

    Preperiodic on exact value repetition (dict-based cycle detection, so the
    reported (m, p) are minimal), Escaping as soon as |c_k|^2 exceeds B^2 (an
    exact rational comparison; no floating point is involved in the
    certificate), Undecided when the step or bit budget runs out first.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    b2 = escape_bound_sq(p)
    seen: dict[Fraction, int] = {}
    c = start
    for k in range(max_steps + 1):
        if c in seen:
            m = seen[c]
            return Preperiodic(OrbitTail(m, k - m, c, c))
        if c * c > b2:
            return Escaping(k, math.sqrt(float(b2)))
        seen[c] = k
        if bit_size(c) > bit_budget:
            return Undecided(bit_budget, "bit budget exhausted")
        c = eval_f(p, c)
    return Undecided(max_steps, "step budget exhausted")


def find_orbit_relation(p: CubicParam, N: int,
                        bit_budget: int = DEFAULT_BIT_BUDGET) -> list:
    """All exact critical-orbit relations with indices up to N.

    Returns pairs ((s1, n), (s2, m)) with c_n^{s1} = c_m^{s2}: n > m for equal
    signs, all n, m for mixed signs (reported once, as (+, n), (-, m)).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    plus = critical_orbit(p, +1, N, bit_budget)
    minus = critical_orbit(p, -1, N, bit_budget)
    relations = []
    for n in range(N + 1):
        for m in range(n):
            if plus[n] == plus[m]:
                relations.append(((+1, n), (+1, m)))
            if minus[n] == minus[m]:
                relations.append(((-1, n), (-1, m)))
    for n in range(N + 1):
        for m in range(N + 1):
            if plus[n] == minus[m]:
                relations.append(((+1, n), (-1, m)))
    return relations
