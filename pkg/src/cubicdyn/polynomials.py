"""Exact polynomial arithmetic: univariate over Q and sparse bivariate in (a, b).

Coefficients are Python ints when integral and Fractions otherwise; mixed
arithmetic keeps orbit polynomials (which are integral) on the fast int path.

The resultant comes in three independent flavours used to cross-check each
other: subresultant PRS (production), evaluation/interpolation of Sylvester
determinants (production alternative), and a plain rational Sylvester
determinant at a specialization (test oracle).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd

from .util import format_rational, parse_rational


def _norm_coeff(c):
    """Fractions with denominator 1 collapse to int (fast-path arithmetic)."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


# ---------------------------------------------------------------------------
# univariate polynomials over Q
# ---------------------------------------------------------------------------

class UPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_norm_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @property
    def degree(self):
        """Degree, with deg 0 = -1 by the usual zero-polynomial convention."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly(out)

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UPoly):
            if not self.coeffs or not other.coeffs:
                return UPoly()
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, ci in enumerate(self.coeffs):
                if ci == 0:
                    continue
                for j, cj in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + ci * cj
            return UPoly(out)
        return UPoly([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n):
        out = UPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other):
        """Exact field division over Q: (quotient, remainder)."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UPoly(), self
        quot = [0] * (dq + 1)
        olc = Fraction(other.lc())
        for k in range(dq, -1, -1):
            c = rem[k + other.degree]
            if c == 0:
                continue
            q = Fraction(c) / olc
            quot[k] = q
            for j, oc in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - q * oc
        return UPoly(quot), UPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def derivative(self):
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation; works for Fraction, float and complex."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, k):
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return UPoly((0,) * k + self.coeffs)

    def taylor_shift(self, c):
        """p(x + c), exactly."""
        if self.is_zero() or c == 0:
            return self
        out = [0] * len(self.coeffs)
        # synthetic evaluation: repeated division by (x - (-c))
        work = list(self.coeffs)
        for k in range(len(self.coeffs)):
            for i in range(len(work) - 2, -1, -1):
                work[i] = work[i] + c * work[i + 1]
            out[k] = work[0]
            work = work[1:]
        return UPoly(out)

    def reversed_coeffs(self):
        """x^deg * p(1/x): the coefficient list reversed."""
        return UPoly(tuple(reversed(self.coeffs)))

    def monic(self):
        if self.is_zero():
            return self
        lc = Fraction(self.lc())
        return UPoly([Fraction(c) / lc for c in self.coeffs])

    def content_int(self):
        """Positive rational c with self/c integral, primitive and gcd 1."""
        if self.is_zero():
            return Fraction(1)
        num = 0
        den = 1
        for c in self.coeffs:
            f = Fraction(c)
            num = _igcd(num, abs(f.numerator))
            den = den * f.denominator // _igcd(den, f.denominator)
        return Fraction(num, den)

    def primitive(self):
        c = self.content_int()
        if c == 1 or self.is_zero():
            return self
        return UPoly([Fraction(x) / c for x in self.coeffs])

    def __repr__(self):
        return f"UPoly({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{i}")
        return " + ".join(parts)


def upoly_gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd over Q by the Euclidean algorithm."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def upoly_from_fractions(values) -> UPoly:
    return UPoly([Fraction(v) for v in values])


def lagrange_interpolate(points) -> UPoly:
    """Exact Lagrange interpolation through [(x_i, y_i)] with rational x, y."""
    result = UPoly()
    xs = [x for x, _ in points]
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num = UPoly.const(1)
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * UPoly([-xj, 1])
            den *= Fraction(xi) - Fraction(xj)
        result = result + num * (Fraction(yi) / den)
    return result


# ---------------------------------------------------------------------------
# sparse bivariate polynomials in (a, b)
# ---------------------------------------------------------------------------

class BivarPoly:
    """Sparse exact polynomial in (a, b): {(deg_a, deg_b): coeff}.

    No zero coefficients are stored; coefficients are int or Fraction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for key, c in terms.items():
                c = _norm_coeff(c)
                if c != 0:
                    t[key] = c
        self.terms = t

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def var_a(cls):
        return cls({(1, 0): 1})

    @classmethod
    def var_b(cls):
        return cls({(0, 1): 1})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BivarPoly):
            return self.terms == other.terms
        return NotImplemented

    def total_degree(self):
        return max((i + j for i, j in self.terms), default=-1)

    def deg_a(self):
        return max((i for i, _ in self.terms), default=-1)

    def deg_b(self):
        return max((j for _, j in self.terms), default=-1)

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, 0) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return BivarPoly(out)

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BivarPoly):
            if not self.terms or not other.terms:
                return BivarPoly()
            if (len(self.terms) * len(other.terms) > 1_000_000
                    and self._all_int() and other._all_int()):
                return _mul_kronecker(self, other)
            out: dict = {}
            if len(self.terms) > len(other.terms):
                big, small = self.terms, other.terms
            else:
                big, small = other.terms, self.terms
            for (i1, j1), c1 in small.items():
                for (i2, j2), c2 in big.items():
                    key = (i1 + i2, j1 + j2)
                    s = out.get(key, 0) + c1 * c2
                    if s == 0:
                        out.pop(key, None)
                    else:
                        out[key] = s
            return BivarPoly(out)
        if other == 0:
            return BivarPoly()
        return BivarPoly({k: c * other for k, c in self.terms.items()})

    def _all_int(self):
        return all(isinstance(c, int) for c in self.terms.values())

    __rmul__ = __mul__

    def __pow__(self, n):
        out = BivarPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def eval(self, a, b):
        """Evaluate at scalars (exact for Fractions, numeric for complex)."""
        if not self.terms:
            return 0 * a
        by_j: dict[int, dict[int, object]] = {}
        for (i, j), c in self.terms.items():
            by_j.setdefault(j, {})[i] = c
        acc = 0 * a
        for j in range(self.deg_b(), -1, -1):
            inner = by_j.get(j)
            if inner:
                ha = 0 * a
                for i in range(max(inner), -1, -1):
                    ha = ha * a + inner.get(i, 0)
            else:
                ha = 0
            acc = acc * b + ha
        return acc

    def subs_a_negated(self):
        """P(-a, b): flips the sign of odd-a-degree terms."""
        return BivarPoly({(i, j): (-c if i % 2 else c)
                          for (i, j), c in self.terms.items()})

    def subs_b_zero(self) -> UPoly:
        """P(a, 0) as a univariate polynomial in a."""
        out = [0] * (self.deg_a() + 1) if self.terms else []
        for (i, j), c in self.terms.items():
            if j == 0:
                out[i] = c
        return UPoly(out)

    def derivative(self, var: str):
        out = {}
        for (i, j), c in self.terms.items():
            if var == "a" and i > 0:
                out[(i - 1, j)] = i * c
            elif var == "b" and j > 0:
                out[(i, j - 1)] = j * c
        return BivarPoly(out)

    def coeffs_in(self, var: str) -> list[UPoly]:
        """Coefficient list in the chosen main variable, entries in the other."""
        if var == "a":
            deg, key = self.deg_a(), lambda i, j: (i, j)
        else:
            deg, key = self.deg_b(), lambda i, j: (j, i)
        out: list[dict] = [dict() for _ in range(deg + 1)]
        for (i, j), c in self.terms.items():
            m, o = key(i, j)
            out[m][o] = c
        res = []
        for d in out:
            size = max(d, default=-1) + 1
            cs = [0] * size
            for o, c in d.items():
                cs[o] = c
            res.append(UPoly(cs))
        return res

    @classmethod
    def from_coeffs_in(cls, var: str, coeffs: list[UPoly]):
        terms = {}
        for m, up in enumerate(coeffs):
            for o, c in enumerate(up.coeffs):
                if c == 0:
                    continue
                key = (m, o) if var == "a" else (o, m)
                terms[key] = c
        return cls(terms)

    def remove_integer_content(self):
        """Divide by the positive rational content: integral, coprime coeffs."""
        if self.is_zero():
            return self
        num = 0
        den = 1
        for c in self.terms.values():
            f = Fraction(c)
            num = _igcd(num, abs(f.numerator))
            den = den * f.denominator // _igcd(den, f.denominator)
        content = Fraction(num, den)
        if content == 1:
            return self
        return BivarPoly({k: Fraction(c) / content for k, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return f"BivarPoly({self.terms!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (i, j), c in self.sorted_terms():
            mono = []
            if i:
                mono.append("a" if i == 1 else f"a^{i}")
            if j:
                mono.append("b" if j == 1 else f"b^{j}")
            body = "*".join(mono)
            if body:
                parts.append(f"{c}*{body}" if c != 1 else body)
            else:
                parts.append(str(c))
        return " + ".join(parts)


def _mul_kronecker(P: BivarPoly, Q: BivarPoly) -> BivarPoly:
    """Big integer-coefficient products via Kronecker substitution.

    Packs each factor into one bignum by a = 2^W, b = 2^(W*stride); one
    bignum multiply replaces the quadratic term-by-term loop.  W is sized so
    result digits fit a balanced window, which makes unpacking exact for
    signed coefficients.
    """
    da = P.deg_a() + Q.deg_a()
    stride = da + 1
    max_p = max(abs(c) for c in P.terms.values())
    max_q = max(abs(c) for c in Q.terms.values())
    pairs = min(len(P.terms), len(Q.terms))
    W = max_p.bit_length() + max_q.bit_length() + pairs.bit_length() + 2
    W = (W + 7) & ~7  # byte-aligned windows
    Wb = W // 8

    def pack(X: BivarPoly) -> int:
        nslots = X.deg_a() + 1 + stride * X.deg_b()
        pos = bytearray(Wb * (nslots + 1))
        neg = bytearray(Wb * (nslots + 1))
        for (i, j), c in X.terms.items():
            slot = i + stride * j
            buf, v = (pos, c) if c > 0 else (neg, -c)
            buf[slot * Wb:slot * Wb + Wb] = v.to_bytes(Wb, "little")
        return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")

    prod = pack(P) * pack(Q)
    sign = 1
    if prod < 0:
        sign = -1
        prod = -prod
    raw = prod.to_bytes((prod.bit_length() + 7) // 8 + Wb, "little")
    nslots = (len(raw) + Wb - 1) // Wb
    half = 1 << (W - 1)
    full = 1 << W
    out = {}
    carry = 0
    for slot in range(nslots):
        window = raw[slot * Wb:(slot + 1) * Wb]
        val = int.from_bytes(window, "little") + carry
        if val >= half:
            digit = val - full
            carry = 1
        else:
            digit = val
            carry = 0
        if digit:
            out[(slot % stride, slot // stride)] = sign * digit
    assert carry == 0
    return BivarPoly(out)


# ---------------------------------------------------------------------------
# resultants and gcd in the main variable
# ---------------------------------------------------------------------------

def _prem(A: list[UPoly], B: list[UPoly]):
    """Pseudo-remainder of coefficient lists (highest degree last)."""
    dA, dB = len(A) - 1, len(B) - 1
    lcB = B[-1]
    R = list(A)
    for k in range(dA - dB, -1, -1):
        top = R[k + dB]
        R = [c * lcB for c in R]
        if not top.is_zero():
            for j in range(dB + 1):
                R[k + j] = R[k + j] - top * B[j]
        del R[k + dB]
    while R and R[-1].is_zero():
        R.pop()
    return R


def _ring_div(x: UPoly, y: UPoly) -> UPoly:
    return x.exact_div(y)


def resultant_prs(P: BivarPoly, Q: BivarPoly, var: str) -> UPoly:
    """Res_var(P, Q) in the other variable, by the subresultant PRS.

    Follows the classical subresultant bookkeeping (content split, pseudo
    remainders divided by g*h^delta); exact over Q[other var].
    """
    if P.is_zero() or Q.is_zero():
        return UPoly()
    A = P.coeffs_in(var)
    B = Q.coeffs_in(var)
    sign = 1
    if len(A) < len(B):
        A, B = B, A
        if ((len(A) - 1) * (len(B) - 1)) % 2 == 1:
            sign = -sign
    degA, degB = len(A) - 1, len(B) - 1
    if degB < 0:
        return UPoly()
    if degA == 0:
        # both constant in var: resultant of constants is 1 (empty Sylvester)
        return UPoly.const(sign)
    if degB == 0:
        return UPoly.const(sign) * B[0] ** degA

    def cont(L):
        g = UPoly()
        for c in L:
            g = upoly_gcd(g, c)
        return g if not g.is_zero() else UPoly.const(1)

    ca, cb = cont(A), cont(B)
    A = [_ring_div(c, ca) for c in A]
    B = [_ring_div(c, cb) for c in B]
    t = (ca ** degB) * (cb ** degA)

    g = UPoly.const(1)
    h = UPoly.const(1)
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 == 1 and dB % 2 == 1:
            sign = -sign
        R = _prem(A, B)
        A = B
        divisor = g * h ** delta
        B = [_ring_div(c, divisor) for c in R]
        g = A[-1]
        if delta == 0:
            pass  # h unchanged: h^{1-0} g^0 ... h = h
        elif delta == 1:
            h = g
        else:
            h = _ring_div(g ** delta, h ** (delta - 1))
        if not B:
            return UPoly()  # common factor: resultant vanishes identically
        if len(B) - 1 == 0:
            dA = len(A) - 1
            if dA == 1:
                res = B[0]
            else:
                res = _ring_div(B[0] ** dA, h ** (dA - 1))
            return UPoly.const(sign) * t * res


def sylvester_matrix(pc: list, qc: list):
    """Sylvester matrix rows from coefficient lists (lowest degree first)."""
    m, n = len(pc) - 1, len(qc) - 1
    if m < 0 or n < 0:
        raise ValueError("zero polynomial has no Sylvester matrix")
    size = m + n
    rows = []
    for k in range(n):
        row = [0] * size
        for i, c in enumerate(reversed(pc)):
            row[k + i] = c
        rows.append(row)
    for k in range(m):
        row = [0] * size
        for i, c in enumerate(reversed(qc)):
            row[k + i] = c
        rows.append(row)
    return rows


def det_fraction(rows) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(rows)
    mat = [[Fraction(c) for c in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        pv = mat[col][col]
        det *= pv
        inv = 1 / pv
        for r in range(col + 1, n):
            f = mat[r][col] * inv
            if f == 0:
                continue
            for c in range(col, n):
                mat[r][c] -= f * mat[col][c]
    return det


def resultant_at(P: BivarPoly, Q: BivarPoly, var: str, value: Fraction) -> Fraction:
    """Sylvester-determinant resultant after specializing the other variable.

    Only valid when neither leading coefficient in `var` vanishes at `value`.
    """
    other = "b" if var == "a" else "a"

    def specialize(X):
        cs = [up.eval(Fraction(value)) for up in X.coeffs_in(var)]
        return cs

    pc, qc = specialize(P), specialize(Q)
    if pc[-1] == 0 or qc[-1] == 0:
        raise ValueError(f"leading coefficient vanishes at {other}={value}")
    return det_fraction(sylvester_matrix(pc, qc))


def resultant_interp(P: BivarPoly, Q: BivarPoly, var: str) -> UPoly:
    """Res_var(P, Q) by evaluation at rational points + Lagrange interpolation.

    Independent of the PRS path; used as the production cross-check.
    """
    if P.is_zero() or Q.is_zero():
        return UPoly()
    dp, dq = (P.deg_a(), Q.deg_a()) if var == "a" else (P.deg_b(), Q.deg_b())
    op, oq = (P.deg_b(), Q.deg_b()) if var == "a" else (P.deg_a(), Q.deg_a())
    if dp < 0 or dq < 0:
        return UPoly()
    bound = dp * oq + dq * op + 1
    points = []
    x = 0
    lead_p = P.coeffs_in(var)[-1]
    lead_q = Q.coeffs_in(var)[-1]
    while len(points) < bound:
        v = Fraction(x)
        x += 1
        if lead_p.eval(v) == 0 or lead_q.eval(v) == 0:
            continue
        points.append((v, resultant_at(P, Q, var, v)))
    return lagrange_interpolate(points)


def bivar_gcd(P: BivarPoly, Q: BivarPoly, var: str = "a") -> BivarPoly:
    """gcd over Q[a,b] via primitive PRS in the chosen main variable.

    Normalized so the result is integral with positive content-free leading
    coefficient (by lexicographic term order).
    """
    if P.is_zero():
        return _normalize_gcd(Q)
    if Q.is_zero():
        return _normalize_gcd(P)
    A = P.coeffs_in(var)
    B = Q.coeffs_in(var)
    if len(A) < len(B):
        A, B = B, A

    def cont(L):
        g = UPoly()
        for c in L:
            g = upoly_gcd(g, c)
        return g

    ca, cb = cont(A), cont(B)
    cg = upoly_gcd(ca, cb)
    A = [_ring_div(c, ca) for c in A]
    B = [_ring_div(c, cb) for c in B]
    while True:
        if not B:
            break
        if len(B) == 1:
            # nontrivial constant-in-var gcd only through the contents
            A = [UPoly.const(1)]
            break
        R = _prem(A, B)
        A = B
        cr = cont(R)
        B = [_ring_div(c, cr) for c in R] if R else []
    pp = BivarPoly.from_coeffs_in(var, [c * cg for c in A]) if A else BivarPoly()
    return _normalize_gcd(pp)


def _normalize_gcd(P: BivarPoly) -> BivarPoly:
    if P.is_zero():
        return P
    P = P.remove_integer_content()
    lead_key = max(P.terms)
    if Fraction(P.terms[lead_key]) < 0:
        P = -P
    return P


def squarefree_part(P: BivarPoly) -> BivarPoly:
    """P divided by gcd(P, dP/da, dP/db); vanishing locus is unchanged."""
    if P.is_zero() or P.total_degree() <= 0:
        return P
    g = bivar_gcd(P, P.derivative("a"))
    if not g.is_zero() and g.total_degree() > 0:
        g = bivar_gcd(g, P.derivative("b"))
    if g.is_zero() or g.total_degree() <= 0:
        return P
    return bivar_exact_div(P, g)


def bivar_exact_div(P: BivarPoly, D: BivarPoly) -> BivarPoly:
    """Exact division in Q[a,b] (raises if not divisible)."""
    if D.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    var = "a" if D.deg_a() > 0 else "b"
    A = P.coeffs_in(var)
    B = D.coeffs_in(var)
    dB = len(B) - 1
    quot: list[UPoly] = []
    R = list(A)
    while len(R) - 1 >= dB and R:
        k = len(R) - 1 - dB
        q = R[-1].exact_div(B[-1])
        while len(quot) <= k:
            quot.append(UPoly())
        quot[k] = q
        for j in range(dB + 1):
            R[k + j] = R[k + j] - q * B[j]
        while R and R[-1].is_zero():
            R.pop()
    if any(not c.is_zero() for c in R):
        raise ArithmeticError("inexact bivariate division")
    return BivarPoly.from_coeffs_in(var, quot)


# ---------------------------------------------------------------------------
# serialization: line-delimited {deg_a, deg_b, coeff} records
# ---------------------------------------------------------------------------

POLY_HEADER = "a b"


def poly_to_lines(P: BivarPoly) -> list[str]:
    """Serialize: one-line variable header, then "deg_a deg_b p/q" records."""
    lines = [POLY_HEADER]
    for (i, j), c in P.sorted_terms():
        lines.append(f"{i} {j} {format_rational(Fraction(c))}")
    return lines


def poly_from_lines(lines) -> BivarPoly:
    it = iter(lines)
    header = next(it).strip()
    if header.split() != POLY_HEADER.split():
        raise ValueError(f"unexpected polynomial header: {header!r}")
    terms = {}
    for line in it:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, j, c = line.split()
        terms[(int(i), int(j))] = parse_rational(c)
    return BivarPoly(terms)


def write_poly_file(P: BivarPoly, path) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(poly_to_lines(P)) + "\n")


def read_poly_file(path) -> BivarPoly:
    with open(path) as fh:
        return poly_from_lines(fh.read().splitlines())
