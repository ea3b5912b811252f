"""Truncated Laurent series over Q and pole analysis at curve punctures.

A puncture of a parametrized curve (a(t), b(t)) is a point where a or b has
a pole.  The pole orders gamma_n of the critical orbit there either triple
forever past an onset (the divisor-building case) or stay pinned at
gamma_a = -ord(a) with gamma_b = 3 gamma_a; the two cases are told apart by
exact series iteration.  Divisors D_n collect the tripling punctures with
multiplicity gamma_n and satisfy D_{n+i} = 3^i D_n past the onset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    CubicDynError,
    DomainError,
    PrecisionExhaustedError,
    PunctureEnumerationError,
)
from .polynomials import UPoly, upoly_gcd
from .util import factor_int, format_rational, parse_rational

#: default number of retained series terms
DEFAULT_PRECISION = 64
#: classification horizon is 3*gamma_max + this slack
HORIZON_SLACK = 16

_INF = math.inf


class LaurentSeries:
    """Exact-coefficient Laurent series, truncated or exact.

    Nonzero series know the window [v, abs_prec): `coeffs[k]` is the
    coefficient of t^(v+k), the leading coefficient is nonzero, and for
    truncated series len(coeffs) == abs_prec - v.  Exact series (finite
    Laurent polynomials, e.g. expansions of rational functions with monomial
    denominator) have abs_prec = inf.  A series that is zero to precision is
    an empty window with v = abs_prec = the O(t^v) bound; the exact zero has
    empty coefficients and abs_prec = inf.

    Every operation tracks precision: a product of relative-precision-N
    series keeps relative precision N up to the leading-zero shift it
    exposes, which is asserted in the test suite.
    """

    __slots__ = ("v", "coeffs", "exact")

    def __init__(self, v: int, coeffs, exact: bool = False):
        cs = [Fraction(c) if not isinstance(c, (int, Fraction)) else c
              for c in coeffs]
        while cs and cs[0] == 0:
            cs.pop(0)
            v += 1
        if exact:
            while cs and cs[-1] == 0:
                cs.pop()
        self.v = v
        self.coeffs = tuple(cs)
        self.exact = exact

    # -- constructors ------------------------------------------------------

    @classmethod
    def exact_zero(cls):
        return cls(0, (), exact=True)

    @classmethod
    def zero_ball(cls, bound: int):
        return cls(bound, (), exact=False)

    @classmethod
    def const(cls, c, exact: bool = True):
        return cls(0, (c,), exact=exact)

    # -- structure ---------------------------------------------------------

    @property
    def abs_prec(self):
        if self.exact:
            return _INF
        return self.v + len(self.coeffs)

    @property
    def rel_prec(self):
        if self.exact:
            return _INF
        return len(self.coeffs)

    def is_zero(self) -> bool:
        """Zero to available precision (exactly zero if also .exact)."""
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return self.exact and not self.coeffs

    def valuation(self) -> int:
        if self.is_zero():
            raise PrecisionExhaustedError(
                "valuation of a series that is zero to precision"
                if not self.exact else "valuation of the zero series")
        return self.v

    def leading_coeff(self) -> Fraction:
        if self.is_zero():
            raise PrecisionExhaustedError("leading coefficient unavailable")
        return Fraction(self.coeffs[0])

    def coeff(self, k: int):
        """Coefficient of t^k; raises if k is beyond the known window."""
        if k >= self.abs_prec:
            raise PrecisionExhaustedError(f"coefficient of t^{k} beyond precision")
        if k < self.v:
            return Fraction(0)
        return Fraction(self.coeffs[k - self.v])

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _build(v: int, coeffs: list, e, exact: bool) -> "LaurentSeries":
        if e != _INF:
            coeffs = coeffs[:max(0, e - v)]
            # pad the known window with explicit zeros
            coeffs = coeffs + [0] * (e - v - len(coeffs))
        s = LaurentSeries(v, coeffs, exact=exact)
        if s.is_zero() and not exact and e != _INF:
            return LaurentSeries.zero_ball(e)
        return s

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        e = min(self.abs_prec, other.abs_prec)
        v = min(self.v, other.v)
        top = e if e != _INF else max(self.abs_window_end(), other.abs_window_end())
        out = [0] * max(0, top - v)
        for s in (self, other):
            for k, c in enumerate(s.coeffs):
                idx = s.v + k - v
                if idx < len(out):
                    out[idx] = out[idx] + c
        return self._build(v, out, e, self.exact and other.exact)

    def abs_window_end(self) -> int:
        return self.v + len(self.coeffs)

    def __neg__(self) -> "LaurentSeries":
        s = LaurentSeries.__new__(LaurentSeries)
        s.v = self.v
        s.coeffs = tuple(-c for c in self.coeffs)
        s.exact = self.exact
        return s

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            # scalar
            if other == 0:
                return LaurentSeries.exact_zero()
            s = LaurentSeries.__new__(LaurentSeries)
            s.v = self.v
            s.coeffs = tuple(c * other for c in self.coeffs)
            s.exact = self.exact
            return s
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.exact_zero()
        v = self.v + other.v
        if self.is_zero() or other.is_zero():
            # zero ball times anything: O(t^(bound + valuation))
            return LaurentSeries.zero_ball(v)
        e = min(self.abs_prec + other.v, other.abs_prec + self.v)
        n = (len(self.coeffs) + len(other.coeffs) - 1 if e == _INF
             else e - v)
        out = [0] * n
        for i, ci in enumerate(self.coeffs):
            if ci == 0:
                continue
            jmax = min(len(other.coeffs), n - i)
            for j in range(jmax):
                cj = other.coeffs[j]
                if cj != 0:
                    out[i + j] = out[i + j] + ci * cj
        return self._build(v, out, e, self.exact and other.exact)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            raise ValueError("use invert() for negative powers")
        out = LaurentSeries.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def invert(self, terms: Optional[int] = None) -> "LaurentSeries":
        """Multiplicative inverse to `terms` relative precision.

        Exact monomials invert exactly; otherwise the result carries
        min(terms, own relative precision) terms.
        """
        if self.is_zero():
            raise PrecisionExhaustedError("cannot invert a zero-to-precision series")
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries(-self.v, (Fraction(1, 1) / Fraction(self.coeffs[0]),),
                                 exact=True)
        if self.exact:
            if terms is None:
                terms = DEFAULT_PRECISION
            n = terms
        else:
            n = len(self.coeffs) if terms is None else min(terms, len(self.coeffs))
        c0 = Fraction(self.coeffs[0])
        inv0 = 1 / c0
        out = [inv0] + [Fraction(0)] * (n - 1)
        for k in range(1, n):
            acc = Fraction(0)
            for j in range(1, min(k, len(self.coeffs) - 1) + 1):
                cj = self.coeffs[j]
                if cj != 0:
                    acc += Fraction(cj) * out[k - j]
            out[k] = -inv0 * acc
        return LaurentSeries(-self.v, out, exact=False)

    def div(self, other: "LaurentSeries", terms: Optional[int] = None):
        return self * other.invert(terms)

    def truncate(self, terms: int) -> "LaurentSeries":
        """Restrict to `terms` relative precision (marks the result inexact).

        Exact series are padded with their (known zero) tail coefficients.
        """
        if self.is_zero():
            return self
        cs = list(self.coeffs[:terms])
        if self.exact and len(cs) < terms:
            cs += [0] * (terms - len(cs))
        return LaurentSeries(self.v, cs, exact=False)

    def __eq__(self, other):
        if isinstance(other, LaurentSeries):
            return (self.v == other.v and self.coeffs == other.coeffs
                    and self.exact == other.exact)
        return NotImplemented

    def __repr__(self):
        tag = "exact" if self.exact else f"O(t^{self.abs_prec})"
        return f"LaurentSeries(v={self.v}, {len(self.coeffs)} terms, {tag})"

    def __str__(self):
        if self.is_exact_zero():
            return "0"
        if self.is_zero():
            return f"O(t^{self.v})"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.v + k
            if e == 0:
                parts.append(f"{c}")
            elif e == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{e}")
        body = " + ".join(parts) if parts else "0"
        if not self.exact:
            body += f" + O(t^{self.abs_prec})"
        return body


# ---------------------------------------------------------------------------
# parametrized curves (a(t), b(t)) over Q
# ---------------------------------------------------------------------------

Puncture = Union[Fraction, str]  # a rational point or "inf"


@dataclass(frozen=True)
class ParamCurve:
    """A plane curve given by univariate rational functions a(t), b(t)."""

    a_num: UPoly
    a_den: UPoly
    b_num: UPoly
    b_den: UPoly

    def __post_init__(self):
        if self.a_den.is_zero() or self.b_den.is_zero():
            raise ValueError("zero denominator in curve definition")
        for num_attr, den_attr in (("a_num", "a_den"), ("b_num", "b_den")):
            num, den = getattr(self, num_attr), getattr(self, den_attr)
            g = upoly_gcd(num, den) if not num.is_zero() else UPoly()
            if not g.is_zero() and g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            # normalize: monic denominator
            lc = Fraction(den.lc())
            den = den.monic()
            num = num * (1 / lc)
            object.__setattr__(self, num_attr, num)
            object.__setattr__(self, den_attr, den)
        a_const = self.a_num.degree <= 0 and self.a_den.degree <= 0
        b_const = self.b_num.degree <= 0 and self.b_den.degree <= 0
        if a_const and b_const:
            raise ValueError("degenerate curve: a and b both constant")

    @classmethod
    def from_polys(cls, a_coeffs, b_coeffs):
        """Polynomial parametrization a(t), b(t) from coefficient lists."""
        return cls(UPoly(a_coeffs), UPoly.const(1), UPoly(b_coeffs), UPoly.const(1))

    def eval_a(self, t):
        den = self.a_den.eval(t)
        if den == 0:
            raise DomainError(f"a(t) has a pole at t={t}")
        return self.a_num.eval(t) / den

    def eval_b(self, t):
        den = self.b_den.eval(t)
        if den == 0:
            raise DomainError(f"b(t) has a pole at t={t}")
        return self.b_num.eval(t) / den

    def punctures(self) -> list[Puncture]:
        """Poles of a or b on P^1: rational denominator roots, plus t=inf.

        Raises PunctureEnumerationError when a denominator has irrational
        roots (exact Laurent data at such centers is out of reach here).
        """
        locs: set[Puncture] = set()
        for den in (self.a_den, self.b_den):
            if den.degree > 0:
                roots, leftover = _rational_roots(den)
                if leftover > 0:
                    raise PunctureEnumerationError(
                        f"denominator {den} has irrational roots; supply a "
                        "parametrization with rational poles")
                locs.update(roots)
        if (self.a_num.degree > self.a_den.degree
                or self.b_num.degree > self.b_den.degree):
            locs.add("inf")
        return sorted(locs, key=lambda x: (x == "inf", x if x != "inf" else 0))

    def local_series(self, puncture: Puncture,
                     prec: int = DEFAULT_PRECISION) -> tuple[LaurentSeries, LaurentSeries]:
        """Laurent expansions of a and b in the local parameter at a puncture.

        Finite punctures use s = t - t0; infinity uses s = 1/t.
        """
        return (_expand_rational(self.a_num, self.a_den, puncture, prec),
                _expand_rational(self.b_num, self.b_den, puncture, prec))

    # -- shared curve-definition file format -------------------------------

    def to_lines(self) -> list[str]:
        def fmt(u: UPoly) -> str:
            cs = u.coeffs if u.coeffs else (0,)
            return " ".join(format_rational(Fraction(c)) for c in cs)

        return [
            f"a_num: {fmt(self.a_num)}",
            f"a_den: {fmt(self.a_den)}",
            f"b_num: {fmt(self.b_num)}",
            f"b_den: {fmt(self.b_den)}",
        ]

    @classmethod
    def from_lines(cls, lines) -> "ParamCurve":
        fields = {}
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(":")
            key = key.strip()
            if key not in ("a_num", "a_den", "b_num", "b_den"):
                raise ValueError(f"unknown curve field {key!r}")
            fields[key] = UPoly([parse_rational(tok) for tok in rest.split()])
        missing = {"a_num", "a_den", "b_num", "b_den"} - set(fields)
        if missing:
            raise ValueError(f"curve definition missing fields: {sorted(missing)}")
        return cls(fields["a_num"], fields["a_den"], fields["b_num"], fields["b_den"])

    def to_file(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("\n".join(self.to_lines()) + "\n")

    @classmethod
    def from_file(cls, path) -> "ParamCurve":
        with open(path) as fh:
            return cls.from_lines(fh.read().splitlines())


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, k in factor_int(n).items():
        out = [d * p**e for d in out for e in range(k + 1)]
    return sorted(set(out))


def _rational_roots(u: UPoly) -> tuple[list[Fraction], int]:
    """(rational roots without multiplicity, degree of the irrational part)."""
    roots: list[Fraction] = []
    work = u.primitive()
    # roots at zero
    k = 0
    while work.coeffs and work.coeffs[0] == 0:
        work = UPoly(work.coeffs[1:])
        k += 1
    if k:
        roots.append(Fraction(0))
    if work.degree <= 0:
        return roots, 0
    c0 = int(Fraction(work.coeffs[0]))
    lead = int(Fraction(work.lc()))
    for p in _divisors(abs(c0)):
        for q in _divisors(abs(lead)):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if work.eval(cand) == 0:
                    roots.append(cand)
                    lin = UPoly([-cand, 1])
                    while work.eval(cand) == 0 and work.degree > 0:
                        work = work.exact_div(lin)
    return sorted(set(roots)), max(0, work.degree)


def _expand_rational(num: UPoly, den: UPoly, puncture: Puncture,
                     prec: int) -> LaurentSeries:
    if num.is_zero():
        return LaurentSeries.exact_zero()
    if puncture == "inf":
        # t = 1/s: num(1/s)/den(1/s) = s^(deg den - deg num) rev(num)/rev(den)
        shift = den.degree - num.degree
        n, d = num.reversed_coeffs(), den.reversed_coeffs()
        return _series_div(n, d, shift, prec)
    t0 = Fraction(puncture)
    n = num.taylor_shift(t0)
    d = den.taylor_shift(t0)
    return _series_div(n, d, 0, prec)


def _series_div(num: UPoly, den: UPoly, extra_v: int, prec: int) -> LaurentSeries:
    kn = 0
    ncs = list(num.coeffs)
    while ncs and ncs[0] == 0:
        ncs.pop(0)
        kn += 1
    kd = 0
    dcs = list(den.coeffs)
    while dcs and dcs[0] == 0:
        dcs.pop(0)
        kd += 1
    v = kn - kd + extra_v
    if len(dcs) == 1:
        inv = 1 / Fraction(dcs[0])
        return LaurentSeries(v, [Fraction(c) * inv for c in ncs], exact=True)
    unit_num = LaurentSeries(0, ncs, exact=True)
    unit_den = LaurentSeries(0, dcs, exact=True)
    quot = unit_num * unit_den.invert(prec)
    return LaurentSeries(v + quot.v, quot.coeffs, exact=False)


# ---------------------------------------------------------------------------
# gamma sequences and puncture classification
# ---------------------------------------------------------------------------

def laurent_orbit(a: LaurentSeries, b: LaurentSeries, sign: int, n: int,
                  terms: Optional[int] = None) -> list[LaurentSeries]:
    """Series orbit [c_0, ..., c_n] with c_0 = sign*a.

    If `terms` is given, the inputs are truncated to that relative precision
    first.  A step whose result is zero to (finite) precision raises
    PrecisionExhaustedError: the data cannot decide the valuation.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if terms is not None:
        a = a.truncate(terms) if not a.is_zero() else a
        b = b.truncate(terms) if not b.is_zero() else b
    three_a2 = (a * a) * 3
    c = a if sign > 0 else -a
    orbit = [c]
    for _ in range(n):
        c = c * c * c - three_a2 * c + b
        if c.is_zero() and not c.is_exact_zero():
            raise PrecisionExhaustedError(
                "orbit series vanished to precision; increase the number of terms")
        orbit.append(c)
    return orbit


def gamma_sequence(a: LaurentSeries, b: LaurentSeries, sign: int, n: int,
                   terms: Optional[int] = DEFAULT_PRECISION) -> list[Optional[int]]:
    """Pole orders gamma_k = -ord(c_k) for k = 1..n (None for exact zero).

    Valuations from truncated arithmetic are exact whenever no step vanishes
    to precision (which raises instead of guessing).
    """
    orbit = laurent_orbit(a, b, sign, n, terms=terms)
    return [None if c.is_exact_zero() else -c.v for c in orbit[1:]]


@dataclass(frozen=True)
class NotPole:
    gamma_max: int
    gamma_a: Optional[int]
    gamma_b: Optional[int]


@dataclass(frozen=True)
class GoodPole:
    """Certified tripling: gamma_{n} = 3^(n - onset) * gamma_onset for n >= onset."""

    onset: int
    gamma_onset: int
    gamma_max: int
    gammas: tuple

    def gamma_at(self, n: int) -> int:
        if n < self.onset:
            raise ValueError(f"gamma_at below the certified onset {self.onset}")
        return self.gamma_onset * 3 ** (n - self.onset)


@dataclass(frozen=True)
class BadPole:
    """Stationary pattern gamma_n = gamma_a with gamma_b = 3 gamma_a.

    Certification is finite-horizon: the dichotomy leaves a residual risk
    that tripling begins beyond the horizon, recorded in `note`.
    """

    gamma_a: int
    gamma_max: int
    gammas: tuple
    horizon: int
    note: str = field(default="finite-horizon certificate; tripling past the "
                              "horizon is excluded only heuristically")


PunctureClass = Union[NotPole, GoodPole, BadPole]


def classify_puncture(a: LaurentSeries, b: LaurentSeries, sign: int,
                      horizon: Optional[int] = None,
                      terms: Optional[int] = DEFAULT_PRECISION) -> PunctureClass:
    """Decide NotPole / GoodPole / BadPole for the orbit of sign*a.

    GoodPole is certified at the first n with 3 gamma_n > gamma_max (tripling
    is then forced at every later step).  BadPole requires the stationary
    pattern to persist to the horizon (default 3*gamma_max + 16).  Inputs are
    truncated to `terms` working precision (exact inputs would otherwise grow
    threefold in support per step).  Raises PrecisionExhaustedError when the
    precision cannot decide, and never guesses silently.
    """
    gamma_a = None if a.is_exact_zero() else -a.valuation()
    gamma_b = None if b.is_exact_zero() else -b.valuation()
    cands = []
    if gamma_a is not None:
        cands.append(3 * gamma_a)
    if gamma_b is not None:
        cands.append(gamma_b)
    if not cands:
        raise ValueError("a and b are both identically zero")
    gamma_max = max(cands)
    if gamma_max <= 0:
        return NotPole(gamma_max, gamma_a, gamma_b)
    if horizon is None:
        horizon = 3 * gamma_max + HORIZON_SLACK
    if terms is not None:
        if not a.is_zero():
            a = a.truncate(terms)
        if not b.is_zero():
            b = b.truncate(terms)

    three_a2 = (a * a) * 3
    c = a if sign > 0 else -a
    gammas: list[Optional[int]] = []
    stationary_possible = (gamma_a is not None and gamma_b == 3 * gamma_a)
    for k in range(1, horizon + 1):
        c = c * c * c - three_a2 * c + b
        if c.is_zero() and not c.is_exact_zero():
            raise PrecisionExhaustedError(
                f"series precision exhausted at step {k}; increase terms")
        g = None if c.is_exact_zero() else -c.v
        gammas.append(g)
        if g is not None and 3 * g > gamma_max:
            return GoodPole(onset=k, gamma_onset=g, gamma_max=gamma_max,
                            gammas=tuple(gammas))
    if stationary_possible and all(g == gamma_a for g in gammas):
        return BadPole(gamma_a=gamma_a, gamma_max=gamma_max,
                       gammas=tuple(gammas), horizon=horizon)
    raise CubicDynError(
        "classification horizon exhausted without certified decision")


# ---------------------------------------------------------------------------
# divisors D_n and their 3-adic growth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Divisor:
    """Punctures with positive integer multiplicities."""

    entries: tuple  # sorted ((puncture, multiplicity), ...)

    @classmethod
    def from_dict(cls, d: dict) -> "Divisor":
        items = tuple(sorted(((k, m) for k, m in d.items() if m),
                             key=lambda km: (km[0] == "inf",
                                             km[0] if km[0] != "inf" else 0)))
        return cls(items)

    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def scaled(self, factor: int) -> "Divisor":
        return Divisor(tuple((k, m * factor) for k, m in self.entries))

    def is_empty(self) -> bool:
        return not self.entries

    def __str__(self):
        if not self.entries:
            return "0"
        return " + ".join(f"{m}*[{k}]" for k, m in self.entries)


def classify_curve_puncture(C: ParamCurve, puncture: Puncture, sign: int,
                            prec: int = DEFAULT_PRECISION,
                            horizon: Optional[int] = None) -> PunctureClass:
    """classify_puncture on local expansions, retrying at higher precision."""
    attempt = prec
    last: Exception | None = None
    for _ in range(4):
        a, b = C.local_series(puncture, attempt)
        try:
            return classify_puncture(a, b, sign, horizon)
        except PrecisionExhaustedError as exc:
            last = exc
            attempt *= 4
    raise PrecisionExhaustedError(
        f"puncture {puncture}: precision {attempt // 4} still insufficient"
    ) from last


def divisor_Dn(C: ParamCurve, sign: int, n: int,
               prec: int = DEFAULT_PRECISION) -> Divisor:
    """D_n = sum of gamma_n * [puncture] over tripling (GoodPole) punctures.

    Requires n at or past the tripling onset of every GoodPole puncture, so
    multiplicities follow exactly from gamma_onset * 3^(n - onset).
    """
    entries: dict = {}
    for t0 in C.punctures():
        cls = classify_curve_puncture(C, t0, sign, prec)
        if isinstance(cls, GoodPole):
            if n < cls.onset:
                raise ValueError(
                    f"n={n} is below the tripling onset {cls.onset} at {t0}")
            entries[t0] = cls.gamma_at(n)
    return Divisor.from_dict(entries)


def check_divisor_growth(C: ParamCurve, sign: int, n: int, i: int,
                         prec: int = DEFAULT_PRECISION) -> bool:
    """Whether D_{n+i} = 3^i * D_n holds componentwise."""
    if i < 0:
        raise ValueError("i must be >= 0")
    dn = divisor_Dn(C, sign, n, prec)
    dni = divisor_Dn(C, sign, n + i, prec)
    return dni == dn.scaled(3 ** i)


# ---------------------------------------------------------------------------
# stationary-pole coefficient structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientLemmaReport:
    """Observed x_{n,i} data of t^gamma_a c_n at a stationary (BadPole) puncture."""

    gamma_a: int
    b_tilde_constant: Fraction
    constant_terms: tuple  # x_{n,0} for n = 1..N
    constants_ok: bool     # all constant terms in {1, -2}
    coefficient_sets: dict  # i -> sorted tuple of observed x_{n,i}
    steps: int


def coefficient_lemma_check(a: LaurentSeries, b: LaurentSeries, sign: int,
                            n: int,
                            terms: Optional[int] = None) -> CoefficientLemmaReport:
    """Check the stationary-pole coefficient constraints for n steps.

    In the normalized frame (b~ = b/a^3 with constant term 2) the constant
    terms x_{k,0} of c_k/a must be roots of x^3 - 3x + 2 = (x-1)^2 (x+2),
    i.e. lie in {1, -2}; coefficients up to order gamma_a are reported for
    the finite-range stability check.  Raises when the normalization fails
    (lim 2a^3/b != 1), which signals upstream misclassification.
    """
    gamma_a = -a.valuation()
    if gamma_a <= 0:
        raise CubicDynError("not a pole of a: coefficient check does not apply")
    if b.is_exact_zero() or -b.valuation() != 3 * gamma_a:
        raise CubicDynError("gamma_b != 3 gamma_a: normalization impossible")
    if terms is None:
        # stationary steps cancel 2*gamma_a orders each; budget for n of them
        terms = 2 * gamma_a * n + gamma_a + 8
    a = a.truncate(terms)
    if not b.is_zero():
        b = b.truncate(terms)
    a_inv = a.invert(terms)
    b_tilde0 = (b * (a_inv ** 3)).coeff(0)
    if b_tilde0 != 2:
        raise CubicDynError(
            f"normalization impossible: constant term of b/a^3 is {b_tilde0}, "
            "expected 2 (lim 2a^3/b != 1)")
    orbit = laurent_orbit(a, b, sign, n)
    constants = []
    sets: dict[int, set] = {i: set() for i in range(gamma_a + 1)}
    for k in range(1, n + 1):
        ck = orbit[k]
        if -ck.valuation() != gamma_a:
            raise CubicDynError(
                f"gamma_{k} = {-ck.valuation()} != gamma_a: not a stationary pole")
        y = ck * a_inv
        constants.append(y.coeff(0))
        for i in range(gamma_a + 1):
            sets[i].add(y.coeff(i))
    ok = all(x in (1, -2) for x in constants)
    return CoefficientLemmaReport(
        gamma_a=gamma_a,
        b_tilde_constant=Fraction(b_tilde0),
        constant_terms=tuple(constants),
        constants_ok=ok,
        coefficient_sets={i: tuple(sorted(s)) for i, s in sets.items()},
        steps=n,
    )
