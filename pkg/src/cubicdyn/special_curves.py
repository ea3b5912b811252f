"""Orbit polynomials c_n(a, b), relation curves, and PCF parameter search.

The three relation families cut out the special curves:

    I  : c_n^+ = c_m^+   (n > m >= 0)
    II : c_n^- = c_m^-   (n > m >= 0)
    III: c_n^+ = c_m^-   (n, m >= 0)

together with the line b = 0, on which the two critical orbits are swapped
by z -> -z.  PCF parameters arise as intersections of a +-constraining curve
with a --constraining curve; they are found by eliminating one variable with
a resultant, isolating roots, and certifying the 2x2 system.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dynamics import CubicParam, Preperiodic, critical_orbit, is_preperiodic_exact
from .errors import CommonComponentError
from .polynomials import (
    BivarPoly,
    UPoly,
    resultant_prs,
    squarefree_part,
)
from .rootfind import aberth_roots

#: default degree cap: orbit polynomials have degree 3^n in a
DEFAULT_N_MAX = 7


@functools.lru_cache(maxsize=64)
def _orbit_poly_plus(n: int) -> BivarPoly:
    c = BivarPoly.var_a()
    a = BivarPoly.var_a()
    b = BivarPoly.var_b()
    three_a2 = 3 * (a * a)
    for _ in range(n):
        c = c * c * c - three_a2 * c + b
    return c


def orbit_poly(sign: int, n: int, n_max: int = DEFAULT_N_MAX) -> BivarPoly:
    """c_n^{sign}(a, b) as an exact polynomial; c_0 = sign * a.

    The - orbit is the + orbit with a negated: f_{a,b} depends on a^2 only
    and c_0^- = -a = c_0^+(-a), so c_n^-(a, b) = c_n^+(-a, b).
    """
    if not 0 <= n <= n_max:
        raise ValueError(f"orbit polynomial index {n} outside [0, {n_max}]")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    p = _orbit_poly_plus(n)
    return p if sign > 0 else p.subs_a_negated()


@dataclass(frozen=True)
class RelationKind:
    """One of the relation families I/II/III with its indices."""

    kind: str  # "I" | "II" | "III"
    n: int
    m: int

    def __post_init__(self):
        if self.kind not in ("I", "II", "III"):
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if self.kind in ("I", "II"):
            if not self.n > self.m >= 0:
                raise ValueError(f"kind {self.kind} requires n > m >= 0")
        elif not (self.n >= 0 and self.m >= 0):
            raise ValueError("kind III requires n, m >= 0")

    @property
    def signs(self) -> tuple[int, int]:
        return {"I": (1, 1), "II": (-1, -1), "III": (1, -1)}[self.kind]

    def constrains(self, sign: int) -> bool:
        """Whether vanishing of this relation forces sign*a preperiodic."""
        return sign in self.signs

    def __str__(self):
        return f"{self.kind}({self.n},{self.m})"


def relation_poly(k: RelationKind, n_max: int = DEFAULT_N_MAX) -> BivarPoly:
    """Normalized defining polynomial of the relation curve.

    c_n - c_m for the indicated signs, with integer content removed and the
    squarefree part taken; the vanishing locus is untouched.
    """
    s1, s2 = k.signs
    diff = orbit_poly(s1, k.n, n_max) - orbit_poly(s2, k.m, n_max)
    if diff.is_zero():
        return diff
    return squarefree_part(diff.remove_integer_content()).remove_integer_content()


def resultant_elim(P: BivarPoly, Q: BivarPoly, eliminate: str) -> UPoly:
    """Res(P, Q) w.r.t. the eliminated variable, by subresultant PRS.

    A zero result is the common-component signal, reported as-is (callers
    distinguish it from failure); see `resultant_interp` in `polynomials`
    for the independent evaluation/interpolation route.
    """
    if P.is_zero() or Q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    dp = P.deg_a() if eliminate == "a" else P.deg_b()
    dq = Q.deg_a() if eliminate == "a" else Q.deg_b()
    if dp < 1 or dq < 1:
        raise ValueError(f"both inputs must have positive degree in {eliminate}")
    return resultant_prs(P, Q, eliminate)


@dataclass
class PcfCandidate:
    """A numerically isolated intersection of two relation curves."""

    a: complex
    b: complex
    residuals: tuple[float, float]
    certified: bool
    rational: Optional[tuple[Fraction, Fraction]] = None
    exact_verified: bool = False


def _newton_2x2(P: BivarPoly, Q: BivarPoly, a: complex, b: complex,
                steps: int = 40) -> tuple[complex, complex]:
    Pa, Pb = P.derivative("a"), P.derivative("b")
    Qa, Qb = Q.derivative("a"), Q.derivative("b")
    for _ in range(steps):
        f1 = complex(P.eval(a, b))
        f2 = complex(Q.eval(a, b))
        j11, j12 = complex(Pa.eval(a, b)), complex(Pb.eval(a, b))
        j21, j22 = complex(Qa.eval(a, b)), complex(Qb.eval(a, b))
        det = j11 * j22 - j12 * j21
        if det == 0:
            break
        da = (f1 * j22 - f2 * j12) / det
        db = (j11 * f2 - j21 * f1) / det
        a, b = a - da, b - db
        if abs(da) + abs(db) < 1e-15 * (1 + abs(a) + abs(b)):
            break
    return a, b


def _as_rational(x: complex, tol: float = 1e-9,
                 max_den: int = 10**6) -> Optional[Fraction]:
    if abs(x.imag) > tol:
        return None
    fr = Fraction(x.real).limit_denominator(max_den)
    return fr if abs(float(fr) - x.real) <= tol else None


def pcf_candidates(k1: RelationKind, k2: RelationKind,
                   cert_tol: float = 1e-10,
                   n_max: int = DEFAULT_N_MAX) -> list[PcfCandidate]:
    """Intersections of two relation curves: candidate PCF parameters.

    k1 must constrain the + orbit (kind I or III) and k2 the - orbit (kind
    II or III).  One variable is eliminated by resultant, complex roots are
    isolated, the partner coordinate is recovered, and the 2x2 system is
    Newton-refined; rational candidates are re-verified exactly through the
    core iteration.
    """
    if not k1.constrains(+1):
        raise ValueError(f"{k1} does not constrain the + orbit")
    if not k2.constrains(-1):
        raise ValueError(f"{k2} does not constrain the - orbit")
    P = relation_poly(k1, n_max)
    Q = relation_poly(k2, n_max)
    if P.is_zero() or Q.is_zero():
        raise CommonComponentError("a relation polynomial vanishes identically")

    # prefer eliminating b: orbit polynomials are much shallower in b
    if P.deg_b() > 0 and Q.deg_b() > 0:
        elim, keep = "b", "a"
    else:
        elim, keep = "a", "b"
    if (P.deg_a() if elim == "a" else P.deg_b()) < 1:
        # first polynomial free of the eliminated variable: its roots pin `keep`
        elim, keep = keep, elim
    eliminant = (resultant_elim(P, Q, elim)
                 if min(P.deg_a() if elim == "a" else P.deg_b(),
                        Q.deg_a() if elim == "a" else Q.deg_b()) >= 1
                 else None)
    if eliminant is None:
        # degenerate: P (say) is univariate in `keep`; use it directly
        eliminant = P.subs_b_zero() if keep == "a" else UPoly(
            [c.coeffs[0] if c.coeffs else 0 for c in P.coeffs_in("b")])
    if eliminant.is_zero():
        raise CommonComponentError(
            "zero resultant: the relation curves share a component")

    keep_roots = aberth_roots([complex(c) for c in eliminant.coeffs])

    out: list[PcfCandidate] = []
    for r in keep_roots:
        # recover the partner coordinate: roots of P specialized at r
        spec = _specialize(P, keep, r)
        if spec.degree < 1:
            spec = _specialize(Q, keep, r)
            if spec.degree < 1:
                continue
        partners = aberth_roots(list(spec.coeffs))
        for s in partners:
            a0, b0 = (r, s) if keep == "a" else (s, r)
            a1, b1 = _newton_2x2(P, Q, a0, b0)
            r1 = abs(complex(P.eval(a1, b1)))
            r2 = abs(complex(Q.eval(a1, b1)))
            if max(r1, r2) > math.sqrt(cert_tol):
                continue  # spurious pairing of eliminant/partner roots
            cand = PcfCandidate(a1, b1, (r1, r2),
                                certified=max(r1, r2) <= cert_tol)
            ra, rb = _as_rational(a1), _as_rational(b1)
            if ra is not None and rb is not None:
                exact = _verify_exact(k1, k2, ra, rb)
                if exact:
                    cand.rational = (ra, rb)
                    cand.exact_verified = True
                    cand.certified = True
            out.append(cand)
    return _dedupe(out)


def _specialize(P: BivarPoly, var: str, value: complex) -> UPoly:
    """P with `var` fixed to a complex value, as a complex-coefficient UPoly."""
    coeffs = []
    main = "b" if var == "a" else "a"
    for up in P.coeffs_in(main):
        coeffs.append(complex(up.eval(value)))
    return UPoly(coeffs) if any(c != 0 for c in coeffs) else UPoly()


def _verify_exact(k1: RelationKind, k2: RelationKind,
                  a: Fraction, b: Fraction) -> bool:
    p = CubicParam(a, b)
    N = max(k1.n, k1.m, k2.n, k2.m)
    try:
        plus = critical_orbit(p, +1, N)
        minus = critical_orbit(p, -1, N)
    except Exception:
        return False

    def holds(k: RelationKind) -> bool:
        s1, s2 = k.signs
        o1 = plus if s1 > 0 else minus
        o2 = plus if s2 > 0 else minus
        return o1[k.n] == o2[k.m]

    if not (holds(k1) and holds(k2)):
        return False
    # both critical points must then be genuinely preperiodic
    for sign in (+1, -1):
        v = is_preperiodic_exact(p, p.critical_point(sign), 200)
        if not isinstance(v, Preperiodic):
            return False
    return True


def _dedupe(cands: list[PcfCandidate], tol: float = 1e-7) -> list[PcfCandidate]:
    kept: list[PcfCandidate] = []
    for c in sorted(cands, key=lambda c: (c.a.real, c.a.imag, c.b.real, c.b.imag)):
        for k in kept:
            if abs(c.a - k.a) < tol and abs(c.b - k.b) < tol:
                if c.exact_verified and not k.exact_verified:
                    k.rational = c.rational
                    k.exact_verified = True
                    k.certified = True
                break
        else:
            kept.append(c)
    return kept


@dataclass(frozen=True)
class SpecialCurveMembership:
    """First relation (by (n+m, n) lex order) vanishing at a parameter."""

    relation: Optional[RelationKind]
    on_line_b0: bool


def check_point_on_special_curve(p: CubicParam, N: int) -> SpecialCurveMembership:
    """Scan relations with indices <= N at an exact rational parameter.

    Works on exact orbit values (equivalent to evaluating the relation
    polynomials, whose normalization preserves the vanishing locus).
    Candidates are ordered by (n+m, n), then I < II < III.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    plus = critical_orbit(p, +1, N)
    minus = critical_orbit(p, -1, N)
    candidates = []
    for n in range(N + 1):
        for m in range(n):
            candidates.append((n + m, n, 0, RelationKind("I", n, m)))
            candidates.append((n + m, n, 1, RelationKind("II", n, m)))
        for m in range(N + 1):
            candidates.append((n + m, n, 2, RelationKind("III", n, m)))
    candidates.sort(key=lambda t: t[:3])
    found = None
    for _, _, _, k in candidates:
        s1, s2 = k.signs
        o1 = plus if s1 > 0 else minus
        o2 = plus if s2 > 0 else minus
        if o1[k.n] == o2[k.m]:
            found = k
            break
    return SpecialCurveMembership(found, on_line_b0=(p.b == 0))
