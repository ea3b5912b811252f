"""Exact polynomial core: ring axioms, resultants vs. oracles, serialization."""

import random
from fractions import Fraction

import pytest

from cubicdyn.polynomials import (
    BivarPoly,
    UPoly,
    bivar_exact_div,
    bivar_gcd,
    det_fraction,
    lagrange_interpolate,
    poly_from_lines,
    poly_to_lines,
    resultant_at,
    resultant_interp,
    resultant_prs,
    squarefree_part,
    sylvester_matrix,
    upoly_gcd,
)

F = Fraction
A = BivarPoly.var_a()
B = BivarPoly.var_b()


def rand_upoly(rng, deg, frac=False):
    cs = [rng.randint(-6, 6) for _ in range(deg + 1)]
    if frac:
        cs = [F(c, rng.randint(1, 4)) for c in cs]
    return UPoly(cs)


def rand_bivar(rng, da, db, density=0.6):
    terms = {}
    for i in range(da + 1):
        for j in range(db + 1):
            if rng.random() < density:
                terms[(i, j)] = rng.randint(-5, 5)
    return BivarPoly(terms)


def test_upoly_divmod_roundtrip():
    rng = random.Random(3)
    for _ in range(50):
        p = rand_upoly(rng, rng.randint(0, 6), frac=True)
        d = rand_upoly(rng, rng.randint(0, 4))
        if d.is_zero():
            continue
        q, r = p.divmod(d)
        assert q * d + r == p
        assert r.is_zero() or r.degree < d.degree


def test_upoly_gcd_properties():
    rng = random.Random(5)
    for _ in range(30):
        g = rand_upoly(rng, rng.randint(1, 3))
        if g.is_zero():
            continue
        p = g * rand_upoly(rng, rng.randint(0, 3))
        q = g * rand_upoly(rng, rng.randint(0, 3))
        h = upoly_gcd(p, q)
        if p.is_zero() and q.is_zero():
            continue
        # gcd divides both and is divisible by g
        if not p.is_zero():
            assert (p % h).is_zero()
        if not q.is_zero():
            assert (q % h).is_zero()
        assert (h % upoly_gcd(g, h)).is_zero()


def test_bivar_ring_axioms_random_triples():
    rng = random.Random(11)
    for _ in range(40):
        p = rand_bivar(rng, 3, 2)
        q = rand_bivar(rng, 2, 3)
        r = rand_bivar(rng, 2, 2)
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + BivarPoly.zero() == p
        assert p * BivarPoly.const(1) == p


def test_no_zero_terms_stored():
    p = BivarPoly({(1, 0): 1, (0, 1): F(0), (2, 2): 0})
    assert set(p.terms) == {(1, 0)}
    q = p - p
    assert q.is_zero() and q.terms == {}


def test_eval_matches_expansion():
    rng = random.Random(13)
    for _ in range(20):
        p = rand_bivar(rng, 3, 3)
        a0, b0 = F(rng.randint(-4, 4), 3), F(rng.randint(-4, 4), 5)
        direct = sum(c * a0**i * b0**j for (i, j), c in p.terms.items())
        assert p.eval(a0, b0) == direct


def test_lagrange_interpolation():
    pts = [(F(0), F(2)), (F(1), F(0)), (F(2), F(0)), (F(3), F(8))]
    p = lagrange_interpolate(pts)
    for x, y in pts:
        assert p.eval(x) == y


def test_sylvester_trivial():
    # Res_a(a, b) = b (up to unit): matrix [[b]] in the 1x1 case
    r = resultant_prs(A, B, "a")
    assert r == UPoly([0, 1]) or r == UPoly([0, -1])


def test_resultant_fixed_pair():
    # P = -2a^3 + b - a, Q = 2a^3 + b + a; Res_b roots satisfy 4a^3 + 2a = 0
    P = BivarPoly({(3, 0): -2, (0, 1): 1, (1, 0): -1})
    Q = BivarPoly({(3, 0): 2, (0, 1): 1, (1, 0): 1})
    r = resultant_prs(P, Q, "b")
    assert r == UPoly([0, 2, 0, 4]) or r == UPoly([0, -2, 0, -4])
    # and the same thing through the interpolation route
    assert resultant_interp(P, Q, "b") == r


def test_resultant_prs_vs_sylvester_oracle():
    # random bivariate pairs of degree <= 6 in the eliminated variable,
    # checked against exact Sylvester determinants at specializations
    rng = random.Random(17)
    done = 0
    while done < 25:
        P = rand_bivar(rng, rng.randint(1, 6), rng.randint(0, 2), 0.5)
        Q = rand_bivar(rng, rng.randint(1, 6), rng.randint(0, 2), 0.5)
        if P.deg_a() < 1 or Q.deg_a() < 1:
            continue
        res = resultant_prs(P, Q, "a")
        pa = P.coeffs_in("a")[-1]
        qa = Q.coeffs_in("a")[-1]
        for x in range(8):
            v = F(x)
            if pa.eval(v) == 0 or qa.eval(v) == 0:
                continue
            assert res.eval(v) == resultant_at(P, Q, "a", v)
        done += 1


def test_resultant_interp_vs_prs_random():
    rng = random.Random(19)
    done = 0
    while done < 10:
        P = rand_bivar(rng, rng.randint(1, 3), rng.randint(0, 2), 0.7)
        Q = rand_bivar(rng, rng.randint(1, 3), rng.randint(0, 2), 0.7)
        if P.deg_a() < 1 or Q.deg_a() < 1:
            continue
        assert resultant_prs(P, Q, "a") == resultant_interp(P, Q, "a")
        done += 1


def test_resultant_common_factor_is_zero():
    g = BivarPoly({(1, 0): 1, (0, 1): -1})  # a - b
    P = g * BivarPoly({(1, 0): 1, (0, 0): 2})
    Q = g * BivarPoly({(2, 0): 1, (0, 1): 1})
    assert resultant_prs(P, Q, "a").is_zero()


def test_det_fraction_known():
    rows = [[2, 1], [1, 2]]
    assert det_fraction(rows) == 3
    assert det_fraction([[0, 1], [1, 0]]) == -1


def test_sylvester_shape():
    m = sylvester_matrix([1, 2, 3], [4, 5])  # deg 2, deg 1 -> 3x3
    assert len(m) == 3 and all(len(r) == 3 for r in m)


def test_bivar_gcd_and_exact_div():
    rng = random.Random(23)
    for _ in range(15):
        g = rand_bivar(rng, 1, 1, 0.8)
        if g.is_zero() or g.total_degree() == 0:
            continue
        p = g * rand_bivar(rng, 2, 1, 0.7)
        q = g * rand_bivar(rng, 1, 2, 0.7)
        if p.is_zero() or q.is_zero():
            continue
        h = bivar_gcd(p, q)
        assert not h.is_zero()
        # h divides both, and g divides h
        bivar_exact_div(p, h)
        bivar_exact_div(q, h)
        assert bivar_gcd(g, h).total_degree() == g.remove_integer_content().total_degree()


def test_squarefree_part():
    base = BivarPoly({(1, 0): 1, (0, 1): 1, (0, 0): 1})  # a + b + 1
    other = BivarPoly({(1, 0): 1, (0, 0): -2})  # a - 2
    p = base * base * other
    s = squarefree_part(p)
    assert s.total_degree() == 2
    # same vanishing locus: base and other both divide s
    bivar_exact_div(s, base.remove_integer_content())
    bivar_exact_div(s, other.remove_integer_content())


def test_x3_minus_3x_plus_2_factors():
    # (x-1)^2 (x+2) expanded equals x^3 - 3x + 2; gcd with derivative is x-1
    x = UPoly.x()
    poly = UPoly([2, -3, 0, 1])
    expanded = (x - UPoly.const(1)) ** 2 * (x + UPoly.const(2))
    assert expanded == poly
    assert upoly_gcd(poly, poly.derivative()) == UPoly([-1, 1])


def test_serialization_bit_exact_roundtrip():
    p = BivarPoly({(3, 0): F(-2), (0, 1): F(1, 3), (1, 2): F(7, 11),
                   (0, 0): F(-123456789123456789, 987654321)})
    lines = poly_to_lines(p)
    assert lines[0] == "a b"
    q = poly_from_lines(lines)
    assert q == p


def test_serialization_rejects_bad_header():
    with pytest.raises(ValueError):
        poly_from_lines(["x y", "0 0 1/1"])
