"""Green (escape-rate) functions at all places of Q; canonical/critical heights.

Archimedean values carry certified error bounds from the per-step Cauchy
increments:  with M >= max(B, 3|a|^2 + |b|, 2),

    | log+|c_{n+1}| / 3^(n+1) - log+|c_n| / 3^n |  <  log(3 M^3) / 3^(n+1)

while |c_n| < M, and < log(2) / 3^(n+1) once |c_n| >= M (then
|3 a^2/c^2 - b/c^3| <= (3|a|^2+|b|)/M^2 <= 1/M <= 1/2).  Summing the tail
yields the reported error.  q-adic values on rationals are exact: once
|c|_q exceeds max(|a|_q, |b|_q^(1/3), 1), the ultrametric inequality forces
|f(c)|_q = |c|_q^3 and the limit value (1/3^n) log|c_n|_q is attained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dynamics import CubicParam, Preperiodic, escape_bound, is_preperiodic_exact
from .errors import PrecisionExhaustedError, ToleranceNotReachedError
from .laurent import ParamCurve
from .util import primes_of, val_fraction

LOG2 = math.log(2.0)

#: q-adic stabilization: 64 iterations plus input-bit-size slack (config knob)
NONARCH_BASE_HORIZON = 64


@dataclass(frozen=True)
class Place:
    """A place of Q: archimedean (p=None) or the p-adic place of a prime."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and self.p < 2:
            raise ValueError(f"not a prime: {self.p}")

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    def abs_value(self, x: Fraction) -> float:
        """|x|_v with the standard normalization (product formula holds)."""
        if self.is_archimedean:
            return abs(float(x))
        if x == 0:
            return 0.0
        return float(self.p) ** (-val_fraction(x, self.p))

    def __str__(self):
        return "inf" if self.is_archimedean else f"p={self.p}"


ARCH = Place()


@dataclass(frozen=True)
class GreenValue:
    """An escape-rate value with a certified error bound.

    Finite-place values of rational data are exact (error 0) and carry the
    exact multiple of log q in `log_multiple`.
    """

    value: float
    error: float
    place: Place
    steps: int
    log_multiple: Optional[Fraction] = None


def _cx(x) -> complex:
    if isinstance(x, complex):
        return x
    return complex(float(x))


def green_arch(p: CubicParam, z, tol: float, max_steps: int = 1000) -> GreenValue:
    """G(z) = lim (1/3^n) log+ |f^n(z)| with certified error <= tol."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = _cx(p.a), _cx(p.b)
    zc = _cx(z)
    pc = CubicParam(a, b)
    B = escape_bound(pc)
    S = 3.0 * abs(a) ** 2 + abs(b)
    M = max(B, S, 2.0)
    log3m3 = math.log(3.0 * M**3)
    c = zc
    best = (0.0, math.inf)
    for n in range(max_steps + 1):
        ac = abs(c)
        if ac >= M:
            # escape regime: |x_k| <= S/|c_k|^2 shrinks 4x per step, and
            # |log|1-x|| <= 2|x| for |x| <= 1/2: geometric tail sum
            s = S / (ac * ac) if ac < 1e150 else 0.0
            err = 2.4 * s / 3 ** (n + 1)
            val = math.log(ac) / 3**n
        else:
            err = log3m3 / (2 * 3**n)
            val = (math.log(ac) if ac > 1.0 else 0.0) / 3**n
        if err <= tol:
            return GreenValue(val, err, ARCH, n)
        if err < best[1]:
            best = (val, err)
        if ac > 1e100:
            # double precision cannot certify any further
            break
        c = c * c * c - 3 * a * a * c + b
    raise ToleranceNotReachedError(
        f"certified error {best[1]:.3e} > tol {tol:.3e} within {max_steps} steps",
        best_value=best[0], achieved_error=best[1])


class _QadicBall:
    """q-adic value u q^v + O(q^(v+prec)); exact zero has u None.

    A ball whose known digits all cancel becomes O(q^bound) with u = 0,
    which downstream reads as "precision exhausted" when its valuation is
    needed.
    """

    __slots__ = ("q", "v", "u", "prec")

    def __init__(self, q: int, v: int, u, prec: int):
        if u is not None and u != 0:
            # normalize: strip q factors into the valuation
            while u % q == 0 and prec > 0:
                u //= q
                v += 1
                prec -= 1
            if prec <= 0:
                u = 0
            else:
                u %= q ** prec
        self.q = q
        self.v = v
        self.u = u
        self.prec = prec if u not in (None, 0) else 0

    @classmethod
    def exact_zero(cls, q: int):
        return cls(q, 0, None, 0)

    @classmethod
    def from_fraction(cls, x: Fraction, q: int, prec: int):
        if x == 0:
            return cls.exact_zero(q)
        v = val_fraction(x, q)
        num = x.numerator // q ** _val_int_signed(x.numerator, q)
        den = x.denominator // q ** _val_int_signed(x.denominator, q)
        mod = q ** prec
        u = num % mod * pow(den % mod, -1, mod) % mod
        return cls(q, v, u, prec)

    def is_exact_zero(self):
        return self.u is None

    def is_dead(self):
        """All digits cancelled: valuation unknown beyond the O() bound."""
        return self.u == 0

    def __mul__(self, o: "_QadicBall") -> "_QadicBall":
        if self.is_exact_zero() or o.is_exact_zero():
            return _QadicBall.exact_zero(self.q)
        if self.is_dead() or o.is_dead():
            return _QadicBall(self.q, self.v + o.v, 0, 0)
        prec = min(self.prec, o.prec)
        return _QadicBall(self.q, self.v + o.v,
                          self.u * o.u % self.q ** prec, prec)

    def __add__(self, o: "_QadicBall") -> "_QadicBall":
        q = self.q
        if self.is_exact_zero():
            return o
        if o.is_exact_zero():
            return self
        # absolute precision bounds
        ea = self.v + self.prec if not self.is_dead() else self.v
        eb = o.v + o.prec if not o.is_dead() else o.v
        e = min(ea, eb)
        v = min(self.v if not self.is_dead() else e,
                o.v if not o.is_dead() else e)
        if v >= e:
            return _QadicBall(q, e, 0, 0)
        mod = q ** (e - v)
        total = 0
        if not self.is_dead():
            total += self.u * q ** (self.v - v)
        if not o.is_dead():
            total += o.u * q ** (o.v - v)
        total %= mod
        if total == 0:
            return _QadicBall(q, e, 0, 0)
        return _QadicBall(q, v, total, e - v)

    def __neg__(self):
        if self.is_exact_zero() or self.is_dead():
            return self
        return _QadicBall(self.q, self.v, -self.u % self.q ** self.prec, self.prec)

    def __sub__(self, o):
        return self + (-o)


def _val_int_signed(n: int, q: int) -> int:
    if n == 0:
        return 0
    v = 0
    n = abs(n)
    while n % q == 0:
        n //= q
        v += 1
    return v


def green_nonarch(p: CubicParam, z: Fraction, q: int,
                  horizon: Optional[int] = None) -> GreenValue:
    """Exact q-adic escape rate of a rational point.

    Decision: integral data stays integral (value 0); otherwise iterate in
    q-adic balls until |c_n|_q crosses max(|a|_q, |b|_q^(1/3), 1), where the
    value (1/3^n) log|c_n|_q is exact, or the valuations stay bounded to the
    stabilization horizon (value 0).  Precision is retried geometrically and
    exhaustion raises, never guesses.
    """
    from .util import is_probable_prime
    if not is_probable_prime(q):
        raise ValueError(f"{q} is not prime")
    a, b, z = Fraction(p.a), Fraction(p.b), Fraction(z)
    wa = -val_fraction(a, q) if a != 0 else None
    wb = -val_fraction(b, q) if b != 0 else None
    wz = -val_fraction(z, q) if z != 0 else None

    def crossed(w: int) -> bool:
        if w <= 0:
            return False
        if wa is not None and w <= wa:
            return False
        if wb is not None and 3 * w <= wb:
            return False
        return True

    place = Place(q)
    if all(w is None or w <= 0 for w in (wa, wb, wz)):
        return GreenValue(0.0, 0.0, place, 0, Fraction(0))
    if wz is not None and crossed(wz):
        mult = Fraction(wz)
        return GreenValue(float(mult) * math.log(q), 0.0, place, 0, mult)
    if horizon is None:
        from .util import bit_size
        horizon = NONARCH_BASE_HORIZON + bit_size(a) + bit_size(b) + bit_size(z)

    for prec in (128, 512, 2048, 8192):
        try:
            ball_a = _QadicBall.from_fraction(a, q, prec)
            ball_b = _QadicBall.from_fraction(b, q, prec)
            three_a2 = _QadicBall.from_fraction(3 * a * a, q, prec) \
                if a != 0 else _QadicBall.exact_zero(q)
            c = _QadicBall.from_fraction(z, q, prec)
            for n in range(1, horizon + 1):
                c = c * c * c - three_a2 * c + ball_b
                if c.is_exact_zero():
                    return GreenValue(0.0, 0.0, place, n, Fraction(0))
                if c.is_dead():
                    raise PrecisionExhaustedError(
                        f"q-adic precision {prec} exhausted at step {n}")
                w = -c.v
                if crossed(w):
                    mult = Fraction(w, 3**n)
                    return GreenValue(float(mult) * math.log(q), 0.0,
                                      place, n, mult)
            return GreenValue(0.0, 0.0, place, horizon, Fraction(0))
        except PrecisionExhaustedError:
            continue
    raise PrecisionExhaustedError(
        f"q-adic Green value at q={q} undecided at precision 8192; "
        "raise the horizon/precision knobs")


def canonical_height(p: CubicParam, z: Fraction, tol: float,
                     max_steps: int = 1000) -> float:
    """Canonical height of a rational point: sum of local escape rates.

    Exactly zero on certified preperiodic points.  Only primes dividing a
    numerator or denominator of a, b, z can contribute (good reduction
    elsewhere); the archimedean term carries the whole error budget.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b, z = Fraction(p.a), Fraction(p.b), Fraction(z)
    verdict = is_preperiodic_exact(CubicParam(a, b), z, max_steps=2000)
    if isinstance(verdict, Preperiodic):
        return 0.0
    total = green_arch(p, z, tol, max_steps).value
    for q in sorted(primes_of(a) | primes_of(b) | primes_of(z)):
        total += green_nonarch(p, z, q).value
    return total


def critical_height(p: CubicParam, tol: float) -> float:
    """Sum of the canonical heights of the two critical points +-a."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    return (canonical_height(p, p.critical_point(+1), tol / 2)
            + canonical_height(p, p.critical_point(-1), tol / 2))


def green_on_curve(C: ParamCurve, t, sign: int, tol: float) -> GreenValue:
    """G^{sign}(a(t), b(t)) along a parametrized curve (archimedean)."""
    a = C.eval_a(t)
    b = C.eval_b(t)
    pc = CubicParam(complex(a), complex(b))
    return green_arch(pc, pc.critical_point(sign), tol)
