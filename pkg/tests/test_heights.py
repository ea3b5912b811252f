"""Green functions at all places, canonical and critical heights."""

import math
import random
from fractions import Fraction

import pytest

from cubicdyn.dynamics import CubicParam, escape_bound, eval_f
from cubicdyn.errors import ToleranceNotReachedError
from cubicdyn.heights import (
    ARCH,
    Place,
    canonical_height,
    critical_height,
    green_arch,
    green_nonarch,
    green_on_curve,
)
from cubicdyn.laurent import ParamCurve
from cubicdyn.polynomials import UPoly
from cubicdyn.util import factor_int

F = Fraction


from helpers import exact_orbit_height_oracle


def test_green_arch_pure_cube():
    g = green_arch(CubicParam(0.0, 0.0), 2.0, 1e-12)
    assert abs(g.value - math.log(2)) <= 1e-12
    assert g.error <= 1e-12


def test_green_arch_bounded_orbit_is_zero():
    g = green_arch(CubicParam(1.0, 0.0), 1.0, 1e-9)
    assert abs(g.value) <= 1e-9


def test_green_arch_matches_direct_iteration():
    # oracle: (1/3^n) log|c_n| once |c_n| > 1e10
    a, b, z = 1.0, 1.0, 1.0
    c, n = z, 0
    while abs(c) < 1e10:
        c = c**3 - 3 * a * a * c + b
        n += 1
    oracle = math.log(abs(c)) / 3**n
    g = green_arch(CubicParam(a, b), z, 1e-9)
    assert abs(g.value - oracle) <= 1e-9 + 1e-12


def test_green_arch_monotone_error_and_steps():
    p = CubicParam(0.3 + 0.1j, 0.7j)
    g1 = green_arch(p, 0.5, 1e-6)
    g2 = green_arch(p, 0.5, 1e-12)
    assert g2.error <= g1.error
    assert g2.steps >= g1.steps
    assert abs(g1.value - g2.value) <= g1.error + g2.error


def test_green_arch_cauchy_increments_respect_bounds():
    rng = random.Random(53)
    for _ in range(50):
        a = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        S = 3 * abs(a) ** 2 + abs(b)
        M = max(escape_bound(CubicParam(a, b)), S, 2.0)
        bound_low = math.log(3 * M**3)
        c = z
        glog = [max(0.0, math.log(abs(c))) if c != 0 else 0.0]
        for n in range(40):
            below = abs(c) < M
            c = c * c * c - 3 * a * a * c + b
            if abs(c) > 1e100:
                break
            glog.append(max(0.0, math.log(abs(c))) if c != 0 else 0.0)
            inc = abs(glog[-1] / 3 ** (n + 1) - glog[-2] / 3**n)
            bound = (bound_low if below else math.log(2)) / 3 ** (n + 1)
            assert inc <= bound * (1 + 1e-9) + 1e-18


def test_green_scaling_law():
    # G(f(z)) = 3 G(z) at the archimedean place
    p = CubicParam(0.5, 1.25)
    z = 0.75 + 0.5j
    g = green_arch(p, z, 1e-11)
    gf = green_arch(p, eval_f(p, z), 1e-11)
    assert abs(gf.value - 3 * g.value) <= 3 * (g.error + gf.error) + 1e-12


def test_green_arch_tolerance_error():
    with pytest.raises(ToleranceNotReachedError) as ei:
        green_arch(CubicParam(1.0, 1.0), 1.0, 1e-12, max_steps=3)
    assert ei.value.best_value >= 0
    assert ei.value.achieved_error > 1e-12


def test_place_product_formula():
    rng = random.Random(59)
    for _ in range(30):
        r = F(rng.randint(1, 400), rng.randint(1, 400)) * rng.choice([1, -1])
        if r == 0:
            continue
        places = [ARCH] + [Place(q) for q in sorted(factor_int(r.numerator) |
                                                    factor_int(r.denominator))]
        total = sum(math.log(pl.abs_value(r)) for pl in places)
        assert abs(total) < 1e-9


def test_green_nonarch_examples():
    # integral data: all finite places vanish
    g = green_nonarch(CubicParam(F(1), F(0)), F(2), 5)
    assert g.value == 0.0 and g.log_multiple == 0

    # a=0, b=1/2, z=0: c_1 = 1/2, |c_1|_2 = 2 crosses: G = (1/3) log 2
    g = green_nonarch(CubicParam(F(0), F(1, 2)), F(0), 2)
    assert g.log_multiple == F(1, 3)
    assert abs(g.value - math.log(2) / 3) < 1e-14

    # a=b=0, z=1/3 at q=3: G = log+|z|_3 = log 3
    g = green_nonarch(CubicParam(F(0), F(0)), F(1, 3), 3)
    assert g.log_multiple == 1
    assert abs(g.value - math.log(3)) < 1e-14


def test_green_nonarch_representability():
    # values lie in (log q) * 3^-n * Z: denominator of the multiple is a 3-power
    rng = random.Random(61)
    for _ in range(40):
        p = CubicParam(F(rng.randint(-6, 6), rng.randint(1, 6)),
                       F(rng.randint(-6, 6), rng.randint(1, 6)))
        z = F(rng.randint(-6, 6), rng.randint(1, 6))
        for q in (2, 3, 5):
            g = green_nonarch(p, z, q)
            assert g.error == 0.0
            den = g.log_multiple.denominator
            while den % 3 == 0:
                den //= 3
            assert den == 1
            assert g.value >= 0.0


def test_green_nonarch_scaling_law():
    rng = random.Random(67)
    for _ in range(25):
        p = CubicParam(F(rng.randint(-5, 5), rng.randint(1, 4)),
                       F(rng.randint(-5, 5), rng.randint(1, 4)))
        z = F(rng.randint(-5, 5), rng.randint(1, 4))
        for q in (2, 3):
            g = green_nonarch(p, z, q)
            gf = green_nonarch(p, eval_f(p, z), q)
            assert gf.log_multiple == 3 * g.log_multiple


def test_green_nonarch_rejects_composite():
    with pytest.raises(ValueError):
        green_nonarch(CubicParam(F(1), F(0)), F(1), 6)


def test_canonical_height_values():
    # preperiodic: exactly zero
    assert canonical_height(CubicParam(F(1), F(0)), F(1), 1e-9) == 0.0
    # pure cube: height of 2 is log 2
    h = canonical_height(CubicParam(F(0), F(0)), F(2), 1e-10)
    assert abs(h - math.log(2)) <= 1e-10
    # escaping integer orbit matches the independent all-places oracle
    h = canonical_height(CubicParam(F(1), F(1)), F(1), 1e-9)
    oracle = exact_orbit_height_oracle(1, 1, 1, tol=1e-10)
    assert h > 0
    assert abs(h - oracle) <= 1e-8


def test_canonical_height_with_denominators():
    # denominators engage the finite places: ĥ(z) for z^3 at z = 2/3
    h = canonical_height(CubicParam(F(0), F(0)), F(2, 3), 1e-10)
    # ĥ_{z^3} = standard Weil height: log max(|2|, |3|) = log 3
    assert abs(h - math.log(3)) <= 1e-9
    # bounded orbits keep the oracle in the slow branch: modest tolerance
    oracle = exact_orbit_height_oracle(0, 0, F(2, 3), tol=1e-5)
    assert abs(h - oracle) <= 2e-5


def test_canonical_height_random_vs_oracle():
    rng = random.Random(71)
    done = 0
    attempts = 0
    while done < 8 and attempts < 40:
        attempts += 1
        a = F(rng.randint(-4, 4), rng.randint(1, 3))
        b = F(rng.randint(-4, 4), rng.randint(1, 3))
        z = F(rng.randint(-4, 4), rng.randint(1, 3))
        try:
            oracle = exact_orbit_height_oracle(a, b, z, tol=1e-9)
        except RuntimeError:
            continue  # bounded non-preperiodic orbit: oracle budget exceeded
        h = canonical_height(CubicParam(a, b), z, 1e-9)
        assert abs(h - oracle) <= 1e-7, (a, b, z)
        done += 1
    assert done >= 8


def test_critical_height():
    assert critical_height(CubicParam(F(1), F(0)), 1e-10) == 0.0
    assert critical_height(CubicParam(F(0), F(0)), 1e-10) == 0.0
    tol = 1e-8
    h = critical_height(CubicParam(F(1), F(1)), tol)
    parts = (canonical_height(CubicParam(F(1), F(1)), F(1), tol)
             + canonical_height(CubicParam(F(1), F(1)), F(-1), tol))
    assert h > 0
    assert abs(h - parts) <= 2 * tol


def test_green_on_curve():
    # a = t, b = 0 at t = 0: the cube map, critical orbit at 0
    c = ParamCurve.from_polys([0, 1], [0])
    g = green_on_curve(c, 0.0, +1, 1e-10)
    assert abs(g.value) <= 1e-10
    # at t = 3 it matches the direct call
    g3 = green_on_curve(c, 3.0, +1, 1e-10)
    direct = green_arch(CubicParam(3.0, 0.0), 3.0, 1e-10)
    assert abs(g3.value - direct.value) <= g3.error + direct.error
    assert g3.value > 0


def test_green_on_curve_sign_symmetry_a0():
    # on the curve a = 0 the critical points coincide: G+ = G- pointwise
    c = ParamCurve(UPoly.const(0), UPoly.const(1), UPoly([0, 1]), UPoly.const(1))
    for t in (0.5, 2.0, -1.0 + 0.5j):
        gp = green_on_curve(c, t, +1, 1e-10)
        gm = green_on_curve(c, t, -1, 1e-10)
        assert gp.value == gm.value


def test_green_nonnegative_everywhere():
    rng = random.Random(73)
    for _ in range(30):
        p = CubicParam(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                       complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        assert green_arch(p, z, 1e-8).value >= 0.0
