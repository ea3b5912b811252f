"""Boettcher coefficients, Phi powers, numeric evaluation, zeta limits."""

import math
from fractions import Fraction

import pytest

from cubicdyn.boettcher import (
    BoettcherExpansion,
    boettcher_coeffs,
    functional_equation_residual,
    order_growth_check,
    phi_eval,
    phi_power,
    zeta_limit,
)
from cubicdyn.dynamics import CubicParam, escape_bound
from cubicdyn.errors import CubicDynError, DomainError
from cubicdyn.heights import green_arch
from cubicdyn.laurent import ParamCurve
from cubicdyn.polynomials import BivarPoly, UPoly

F = Fraction
A = BivarPoly.var_a()
B = BivarPoly.var_b()


def test_first_coefficients():
    exp = boettcher_coeffs(3)
    assert exp.alpha(1) == -(A * A)                      # -a^2
    assert exp.alpha(2) == BivarPoly({(0, 1): F(1, 3)})  # b/3
    assert exp.alpha(3) == -(A * A * A * A)              # -a^4


def test_functional_equation_residual_vanishes():
    for N in (4, 8, 12):
        assert functional_equation_residual(N) is None


def test_phi_power_polynomial_parts():
    p1 = phi_power(1, 6)
    assert [c for c in p1.poly_coeffs] == [BivarPoly.zero(), BivarPoly.const(1)]

    p3 = phi_power(3, 6)
    # P_3 = f: z^3 - 3a^2 z + b
    assert p3.poly_coeffs[3] == BivarPoly.const(1)
    assert p3.poly_coeffs[2].is_zero()
    assert p3.poly_coeffs[1] == -3 * (A * A)
    assert p3.poly_coeffs[0] == B

    p2 = phi_power(2, 6)
    # P_2 = z^2 - 2a^2 (twice the alpha_1 cross term)
    assert p2.poly_coeffs[2] == BivarPoly.const(1)
    assert p2.poly_coeffs[1].is_zero()
    assert p2.poly_coeffs[0] == -2 * (A * A)


def test_p3k_functional_relation():
    # P_9 should be P_3 composed with f up to tail terms: check on values.
    # Phi^9 = (Phi^3) applied at f, so P_9(z) agrees with P_3(f(z)) = f(f(z))
    p9 = phi_power(9, 10)
    a0, b0 = F(1, 2), F(-2, 3)
    z = F(7, 2)
    fz = z**3 - 3 * a0 * a0 * z + b0
    ffz = fz**3 - 3 * a0 * a0 * fz + b0
    val = sum(c.eval(a0, b0) * z**d for d, c in enumerate(p9.poly_coeffs))
    assert val == ffz


def test_phi_eval_identity_for_pure_cube():
    p = CubicParam(0.0, 0.0)
    r = phi_eval(p, 10.0, N=12)
    assert r.value == 10.0
    assert r.truncation_estimate == 0.0


def test_phi_eval_domain_enforcement():
    p = CubicParam(1.0, 0.0)
    with pytest.raises(DomainError):
        phi_eval(p, 1.0, N=8)


def test_log_phi_matches_green():
    for (a, b, z) in [(1.0, 0.0, 100.0), (1.0, 1.0, 50.0), (0.5, -2.0, 25.0)]:
        p = CubicParam(a, b)
        assert abs(z) >= 4 * escape_bound(p)
        r = phi_eval(p, z, N=12)
        g = green_arch(p, z, 1e-12)
        combined = g.error + r.truncation_estimate / abs(r.value) * 2 + 1e-12
        assert abs(math.log(abs(r.value)) - g.value) <= combined


def test_expansion_serialization_roundtrip():
    exp = boettcher_coeffs(5)
    lines = exp.to_lines()
    back = BoettcherExpansion.from_lines(lines)
    assert back == exp


def test_zeta_limit_b0_symmetric_curve():
    # a = 1/t, b = 0: on b=0 the orbits are antisymmetric: zeta = -1
    c = ParamCurve(UPoly.const(1), UPoly([0, 1]), UPoly.const(0), UPoly.const(1))
    rep = zeta_limit(c, F(0), 2, deg_plus=3, deg_minus=3)
    assert rep.value == -1
    assert rep.is_root_of_unity
    assert rep.order_candidate == 2
    assert rep.abs_deviation == 0.0


def test_zeta_limit_degenerate_a0():
    # a = 0, b = 1/t: c_n^+ = c_n^-: zeta = 1
    c = ParamCurve(UPoly.const(0), UPoly.const(1), UPoly.const(1), UPoly([0, 1]))
    rep = zeta_limit(c, F(0), 2, deg_plus=1, deg_minus=1)
    assert rep.value == 1
    assert rep.is_root_of_unity


def test_zeta_tripling_law():
    # zeta_{n+1} = zeta_n^3 on two tripling test curves
    curves = [
        ParamCurve(UPoly.const(1), UPoly([0, 1]), UPoly.const(0), UPoly.const(1)),
        ParamCurve(UPoly.const(1), UPoly([0, 1]), UPoly.const(1), UPoly([0, 1])),
    ]
    for c in curves:
        for n in (1, 2, 3):
            r1 = zeta_limit(c, F(0), n, 1, 1)
            r2 = zeta_limit(c, F(0), n + 1, 1, 1)
            assert r2.value == r1.value ** 3


def test_zeta_valuation_mismatch_error():
    c = ParamCurve(UPoly.const(1), UPoly([0, 1]), UPoly.const(0), UPoly.const(1))
    with pytest.raises(CubicDynError):
        zeta_limit(c, F(0), 2, deg_plus=1, deg_minus=2)


def test_zeta_requires_goodpole():
    # persistent curve: + orbit frozen, not a tripling puncture
    c = ParamCurve.from_polys([0, 1], [0, 1, 0, 2])
    with pytest.raises(CubicDynError):
        zeta_limit(c, "inf", 2, 1, 1)


def test_order_growth_strictly_increasing():
    c = ParamCurve(UPoly.const(1), UPoly([0, 1]), UPoly.const(1), UPoly([0, 1]))
    rep = order_growth_check(c, F(0), k=1, n_range=range(2, 5))
    assert rep.strictly_increasing
    assert rep.orders == tuple(sorted(rep.orders))


def test_order_growth_k3_vs_k1_shift():
    # Phi^3(c_n) = Phi(c_{n+1}): the k=3 order at n is at least the k=1
    # order at n+1
    c = ParamCurve(UPoly.const(1), UPoly([0, 1]), UPoly.const(1), UPoly([0, 1]))
    r1 = order_growth_check(c, F(0), k=1, n_range=[2, 3, 4])
    r3 = order_growth_check(c, F(0), k=3, n_range=[2, 3])
    # r3.orders correspond to n=2,3; r1.orders to n=2,3,4
    assert r3.orders[0] >= r1.orders[1]
    assert r3.orders[1] >= r1.orders[2]


def test_order_growth_pure_cube_is_exact():
    # a = b = 0 specialization: Phi is the identity, difference identically 0.
    # The expansion coefficients all vanish at (0,0):
    exp = boettcher_coeffs(10)
    for i in range(1, 11):
        assert exp.alpha(i).eval(F(0), F(0)) == 0
