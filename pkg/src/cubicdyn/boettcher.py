"""Formal Boettcher coordinate of the cubic family near infinity.

Phi(z) = z + sum_i alpha_i z^(-i) is pinned down by Phi(f(z)) = Phi(z)^3 and
Phi(z) = z + o(1); each alpha_i is an exact polynomial in (a, b).  Writing
w = 1/z, u(w) = 1 - 3a^2 w^2 + b w^3 and A(w) = sum_i alpha_i w^(i+1), the
functional equation becomes

    u + sum_i alpha_i w^(3i+3) u^(-i)  =  (1 + A)^3,

whose order-(m+1) coefficient determines alpha_m from earlier data (the
right side contributes 3 alpha_m plus products of lower alphas).  Powers
Phi^k split into a polynomial part P_k of degree k (P_3 = f) plus a tail;
log|Phi| equals the escape-rate function on the enforced evaluation region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dynamics import CubicParam, escape_bound
from .errors import CubicDynError, DomainError
from .laurent import (
    DEFAULT_PRECISION,
    GoodPole,
    LaurentSeries,
    ParamCurve,
    classify_curve_puncture,
    laurent_orbit,
)
from .polynomials import BivarPoly

#: coefficient polynomials grow; default order cap (config knob)
DEFAULT_ORDER_CAP = 48

_ZERO = BivarPoly.zero()
_ONE = BivarPoly.const(1)


def _ser_mul(A: list, B: list, order: int) -> list:
    out = [_ZERO] * order
    for i, ai in enumerate(A):
        if i >= order or ai.is_zero():
            continue
        for j, bj in enumerate(B):
            if i + j >= order:
                break
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj
    return out


def _ser_invert(U: list, order: int) -> list:
    if U[0] != _ONE:
        raise ValueError("series inversion requires unit constant term 1")
    out = [_ZERO] * order
    out[0] = _ONE
    for k in range(1, order):
        acc = _ZERO
        for j in range(1, min(k, len(U) - 1) + 1):
            if not U[j].is_zero():
                acc = acc + U[j] * out[k - j]
        out[k] = -acc
    return out


@dataclass(frozen=True)
class BoettcherExpansion:
    """Coefficients alpha_1..alpha_N of Phi(z) = z + sum alpha_i z^(-i)."""

    order: int
    alphas: tuple  # alphas[i-1] = alpha_i, a BivarPoly

    def alpha(self, i: int) -> BivarPoly:
        if not 1 <= i <= self.order:
            raise IndexError(f"alpha_{i} beyond computed order {self.order}")
        return self.alphas[i - 1]

    def to_lines(self) -> list[str]:
        from .polynomials import poly_to_lines
        lines = []
        for i, al in enumerate(self.alphas, start=1):
            lines.append(f"alpha {i}")
            lines.extend(poly_to_lines(al))
        return lines

    @classmethod
    def from_lines(cls, lines) -> "BoettcherExpansion":
        from .polynomials import poly_from_lines
        blocks: list[list[str]] = []
        for line in lines:
            line = line.rstrip("\n")
            if line.startswith("alpha "):
                blocks.append([])
            elif blocks:
                blocks[-1].append(line)
            elif line.strip():
                raise ValueError("expansion file must start with an index header")
        alphas = tuple(poly_from_lines(b) for b in blocks)
        return cls(order=len(alphas), alphas=alphas)


def _u_series(order: int) -> list:
    a, b = BivarPoly.var_a(), BivarPoly.var_b()
    U = [_ZERO] * max(order, 4)
    U[0] = _ONE
    U[2] = -3 * (a * a)
    U[3] = b
    return U[:order] if order >= 4 else U


def boettcher_coeffs(N: int, order_cap: int = DEFAULT_ORDER_CAP) -> BoettcherExpansion:
    """Solve the functional equation order by order up to alpha_N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > order_cap:
        raise CubicDynError(f"order {N} beyond the configured cap {order_cap}")
    top = N + 2
    U = _u_series(top)
    inv_u = _ser_invert(U, top)
    # u^(-i) for 3i+3 <= N+1
    upows = {}
    imax = max(0, (N - 2) // 3)
    cur = inv_u
    for i in range(1, imax + 1):
        upows[i] = cur
        cur = _ser_mul(cur, inv_u, top)

    A = [_ZERO] * (top + 1)  # A[j]: coefficient of w^j in sum alpha_i w^(i+1)
    A2 = [_ZERO] * (top + 1)
    alphas: list[BivarPoly] = []
    third = Fraction(1, 3)
    for m in range(1, N + 1):
        k = m + 1
        rhs = U[k] if k < len(U) else _ZERO
        for i in range(1, imax + 1):
            off = k - (3 * i + 3)
            if off < 0:
                break
            al = alphas[i - 1]
            if not al.is_zero() and not upows[i][off].is_zero():
                rhs = rhs + al * upows[i][off]
        # subtract (3 A^2 + A^3)_k, both known from alpha_1..alpha_{m-1}
        a2k = _ZERO
        for p in range(2, k - 1):
            if p <= m and k - p <= m and not A[p].is_zero() and not A[k - p].is_zero():
                a2k = a2k + A[p] * A[k - p]
        A2[k] = a2k
        a3k = _ZERO
        for p in range(2, k - 3):
            if not A[p].is_zero() and not A2[k - p].is_zero():
                a3k = a3k + A[p] * A2[k - p]
        rhs = rhs - (3 * a2k + a3k)
        alpha_m = rhs * third
        alphas.append(alpha_m)
        A[m + 1] = alpha_m
    return BoettcherExpansion(order=N, alphas=tuple(alphas))


def functional_equation_residual(N: int) -> Optional[int]:
    """First w-order where the truncated Phi fails its functional equation.

    The truncation at alpha_N leaves the identity exact through order N+1 in
    w (i.e. z^-(N-2) after clearing z^3); returns None when every computed
    coefficient up to that order vanishes, else the first bad order.
    """
    exp = boettcher_coeffs(N)
    top = N + 2
    U = _u_series(top)
    inv_u = _ser_invert(U, top)
    lhs = list(U)
    cur = inv_u
    for i in range(1, N + 1):
        base = 3 * i + 3
        if base < top:
            al = exp.alpha(i)
            for j in range(top - base):
                if not cur[j].is_zero() and not al.is_zero():
                    lhs[base + j] = lhs[base + j] + al * cur[j]
        cur = _ser_mul(cur, inv_u, top)
    A = [_ZERO] * top
    A[0] = _ONE
    for i in range(1, N + 1):
        if i + 1 < top:
            A[i + 1] = exp.alpha(i)
    rhs = _ser_mul(_ser_mul(A, A, top), A, top)
    for k in range(top):
        if not (lhs[k] - rhs[k]).is_zero():
            return k
    return None


@dataclass(frozen=True)
class PhiPower:
    """Phi^k = P_k(z) + sum_i alpha_{k,i} z^(-i)."""

    k: int
    poly_coeffs: tuple   # poly_coeffs[d] = coefficient of z^d, len k+1
    tail: tuple          # tail[i-1] = alpha_{k,i}

    def alpha(self, i: int) -> BivarPoly:
        return self.tail[i - 1]


def phi_power(k: int, N: int) -> PhiPower:
    """Expand Phi^k formally; polynomial part has degree k, leading coeff 1."""
    if k < 1 or N < 1:
        raise ValueError("k and N must be >= 1")
    exp = boettcher_coeffs(N)
    top = k + N + 1
    A = [_ZERO] * top
    A[0] = _ONE
    for i in range(1, N + 1):
        if i + 1 < top:
            A[i + 1] = exp.alpha(i)
    # (1 + A)^k by repeated squaring
    out = [_ZERO] * top
    out[0] = _ONE
    base = A
    e = k
    while e:
        if e & 1:
            out = _ser_mul(out, base, top)
        e >>= 1
        if e:
            base = _ser_mul(base, base, top)
    poly = tuple(out[k - d] for d in range(k + 1))  # z^d coefficient
    tail = tuple(out[k + i] for i in range(1, N + 1))
    return PhiPower(k=k, poly_coeffs=poly, tail=tail)


@dataclass(frozen=True)
class PhiEval:
    value: complex
    truncation_estimate: float
    order: int


def phi_eval(p: CubicParam, z, N: int = 16) -> PhiEval:
    """Numerically evaluate the truncated Phi on the enforced region.

    Requires |z| >= 4 * escape_bound (the truncated tail is then provably
    dominated); the truncation estimate doubles the last retained term,
    covering a geometric tail of ratio <= 1/2.
    """
    a = complex(p.a) if isinstance(p.a, complex) else complex(float(p.a))
    b = complex(p.b) if isinstance(p.b, complex) else complex(float(p.b))
    zc = complex(z)
    B = escape_bound(CubicParam(a, b))
    if abs(zc) < 4 * B:
        raise DomainError(
            f"|z| = {abs(zc):.6g} inside the enforced region |z| >= {4 * B:.6g}")
    exp = boettcher_coeffs(N)
    acc = zc
    last = 0.0
    for i in range(1, N + 1):
        term = complex(exp.alpha(i).eval(a, b)) / zc**i
        acc += term
        last = abs(term)
    return PhiEval(value=acc, truncation_estimate=2.0 * last, order=N)


def _eval_bivar_at_series(P: BivarPoly, sa: LaurentSeries,
                          sb: LaurentSeries) -> LaurentSeries:
    """P(a(t), b(t)) for Laurent series arguments."""
    if P.is_zero():
        return LaurentSeries.exact_zero()
    out = LaurentSeries.exact_zero()
    by_j: dict[int, dict[int, object]] = {}
    for (i, j), c in P.terms.items():
        by_j.setdefault(j, {})[i] = c
    a_pows = {0: LaurentSeries.const(1)}
    b_pows = {0: LaurentSeries.const(1)}

    def pw(cache, s, n):
        if n not in cache:
            cache[n] = pw(cache, s, n - 1) * s
        return cache[n]

    for j, inner in by_j.items():
        ha = LaurentSeries.exact_zero()
        for i, c in inner.items():
            ha = ha + pw(a_pows, sa, i) * c
        out = out + ha * pw(b_pows, sb, j)
    return out


@dataclass(frozen=True)
class ZetaReport:
    """Limit ratio of leading orbit coefficients at a tripling puncture."""

    value: Fraction
    n: int
    deg_plus: int
    deg_minus: int
    is_root_of_unity: bool      # exact certification (rational: +-1)
    abs_deviation: float        # | |zeta| - 1 |, numerically
    order_candidate: Optional[int]


def zeta_limit(C: ParamCurve, puncture, n: int, deg_plus: int, deg_minus: int,
               prec: int = DEFAULT_PRECISION) -> ZetaReport:
    """zeta = lim (c_n^-)^deg_plus / (c_n^+)^deg_minus at a GoodPole puncture.

    Both signs must be GoodPole and the Laurent valuations must cancel in the
    stated ratio (checked; mismatch signals inconsistent degree inputs).  The
    value is the exact ratio of leading coefficients; root-of-unity
    certification is exact exactly when the rational value is +-1.
    """
    for sign in (+1, -1):
        cls = classify_curve_puncture(C, puncture, sign, prec)
        if not isinstance(cls, GoodPole):
            raise CubicDynError(
                f"puncture {puncture} is not GoodPole for sign {sign:+d}")
    a, b = C.local_series(puncture, prec)
    plus = laurent_orbit(a, b, +1, n, terms=prec)[n]
    minus = laurent_orbit(a, b, -1, n, terms=prec)[n]
    v_plus, v_minus = plus.valuation(), minus.valuation()
    if deg_plus * v_minus != deg_minus * v_plus:
        raise CubicDynError(
            f"valuation mismatch: deg_plus*ord(c_n^-) = {deg_plus * v_minus} "
            f"!= deg_minus*ord(c_n^+) = {deg_minus * v_plus}; degree inputs "
            "inconsistent with the divisor proportionality")
    zeta = (minus.leading_coeff() ** deg_plus) / (plus.leading_coeff() ** deg_minus)
    is_ru = zeta in (1, -1)
    order = {Fraction(1): 1, Fraction(-1): 2}.get(zeta)
    return ZetaReport(value=zeta, n=n, deg_plus=deg_plus, deg_minus=deg_minus,
                      is_root_of_unity=is_ru,
                      abs_deviation=abs(abs(float(zeta)) - 1.0),
                      order_candidate=order)


@dataclass(frozen=True)
class OrderGrowthReport:
    k: int
    orders: tuple          # ord(Phi_N(c_n)^k - P_k(c_n)) per n
    n_range: tuple
    strictly_increasing: bool
    truncation_order: int


def order_growth_check(C: ParamCurve, puncture, k: int, n_range,
                       sign: int = +1, N: int = 8,
                       prec: Optional[int] = None) -> OrderGrowthReport:
    """ord_t0(Phi_N(c_n)^k - P_k(c_n)) along n, asserting monotone growth.

    Needs a GoodPole puncture; the working precision defaults to a budget
    covering the (k+1)*gamma_n cancellation depth at the largest n.
    """
    ns = sorted(n_range)
    if not ns or ns[0] < 1:
        raise ValueError("n_range must contain integers >= 1")
    cls = classify_curve_puncture(C, puncture, sign)
    if not isinstance(cls, GoodPole):
        raise CubicDynError(f"puncture {puncture} is not in the tripling set")
    gamma_top = cls.gamma_at(max(ns)) if max(ns) >= cls.onset else cls.gamma_max
    if prec is None:
        prec = (k + 1) * gamma_top + 16 * (N + 1)
    a, b = C.local_series(puncture, prec)
    pk = phi_power(k, N)
    exp = boettcher_coeffs(N)
    alpha_series = [_eval_bivar_at_series(exp.alpha(i), a, b)
                    for i in range(1, N + 1)]
    pk_series = [_eval_bivar_at_series(c, a, b) for c in pk.poly_coeffs]
    orbit = laurent_orbit(a, b, sign, max(ns), terms=prec)
    orders = []
    for n in ns:
        c = orbit[n]
        cinv = c.invert()
        phi = c
        ipow = cinv
        for i in range(N):
            phi = phi + alpha_series[i] * ipow
            ipow = ipow * cinv
        phik = phi ** k
        horner = LaurentSeries.exact_zero()
        for coeff in reversed(pk_series):
            horner = horner * c + coeff
        diff = phik - horner
        orders.append(diff.valuation())
    increasing = all(o2 > o1 for o1, o2 in zip(orders, orders[1:]))
    return OrderGrowthReport(k=k, orders=tuple(orders), n_range=tuple(ns),
                             strictly_increasing=increasing,
                             truncation_order=N)
