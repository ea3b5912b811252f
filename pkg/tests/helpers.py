"""Shared independent oracles for the test suite.

These deliberately avoid the production code paths: exact big-rational
iteration with valuation bookkeeping at every place, stopped by explicit
tail bounds computed from the exact iterate.
"""

import math
from fractions import Fraction

from cubicdyn.dynamics import CubicParam, eval_f
from cubicdyn.util import log_abs_fraction, primes_of, val_fraction

F = Fraction


def exact_orbit_height_oracle(a, b, z, tol=1e-9, max_steps=300,
                              bit_cap=1 << 21):
    """Sum over places of (1/3^n) log+ |c_n|_v by exact iteration.

    Stops when the tail is provably below tol: while |c_n| < M the
    archimedean increments are below log(3 M^3)/3^(n+1); once past the
    escape radius they are below 2 S / (|c_n|^2 3^(n+1)) and shrink
    geometrically (S = 3|a|^2 + |b|).  Finite places contribute at most
    theta_w(q) log(q)/3^n more than their limit until they cross.  Raises
    if neither the step nor the bit budget suffices.
    """
    p = CubicParam(F(a), F(b))
    c = F(z)
    primes = sorted(primes_of(p.a) | primes_of(p.b) | primes_of(F(z)))
    B2 = 3 * p.a * p.a + abs(p.b) + 2
    S = 3 * abs(float(p.a)) ** 2 + abs(float(p.b))
    M = max(math.sqrt(float(B2)), S, 2.0)
    log3m3 = math.log(3 * M**3)

    # finite-place crossing thresholds: w > w_a, 3w > w_b, w > 0
    theta = {}
    wa = {}
    wb = {}
    for q in primes:
        wa[q] = -val_fraction(p.a, q) if p.a else None
        wb[q] = -val_fraction(p.b, q) if p.b else None
        theta[q] = max(1,
                       (wa[q] + 1) if wa[q] is not None else 1,
                       ((wb[q] + 2) // 3 + 1) if wb[q] is not None else 1)

    def crossed(q, w):
        if w <= 0:
            return False
        if wa[q] is not None and w <= wa[q]:
            return False
        if wb[q] is not None and 3 * w <= wb[q]:
            return False
        return True

    for n in range(max_steps + 1):
        escaped = c != 0 and c * c > B2
        if escaped:
            ac2 = math.exp(min(700.0, 2 * log_abs_fraction(c)))
            arch_tail = 2.4 * (S / ac2) / 3 ** (n + 1)
        else:
            arch_tail = log3m3 / (2 * 3**n)
        nonarch_tail = 0.0
        for q in primes:
            w = -val_fraction(c, q) if c != 0 else 0
            if crossed(q, w):
                continue  # exact from here on: (1/3^k) w_k log q is constant
            if (w <= 0 and (wa[q] is None or wa[q] <= 0)
                    and (wb[q] is None or wb[q] <= 0)):
                continue  # q-integral forever: contributes exactly 0
            nonarch_tail += 2 * theta[q] * math.log(q) / 3**n
        if arch_tail + nonarch_tail <= tol:
            arch = max(0.0, log_abs_fraction(c)) / 3**n if c != 0 else 0.0
            local = 0.0
            for q in primes:
                if c != 0:
                    w = -val_fraction(c, q)
                    local += max(0, w) * math.log(q) / 3**n
            return arch + local
        if (abs(c.numerator).bit_length() + c.denominator.bit_length()) > bit_cap:
            raise RuntimeError("height oracle bit budget exceeded")
        c = eval_f(p, c)
    raise RuntimeError("height oracle did not converge in max_steps")
