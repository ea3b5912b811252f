"""Shared numerics/parsing helpers: exact logs, valuations, small factoring."""

from __future__ import annotations

import math
import re
from fractions import Fraction

LOG2 = math.log(2.0)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def log_abs_int(n: int) -> float:
    """log|n| for a nonzero integer of arbitrary bit size (never overflows)."""
    n = abs(n)
    if n == 0:
        raise ValueError("log of zero")
    bits = n.bit_length()
    if bits <= 512:
        return math.log(n)
    shift = bits - 64
    return math.log(n >> shift) + shift * LOG2


def log_abs_fraction(x: Fraction) -> float:
    """log|x| for a nonzero rational, safe for huge numerators/denominators."""
    return log_abs_int(x.numerator) - log_abs_int(x.denominator)


def bit_size(x: Fraction) -> int:
    """Numerator plus denominator bit length; the exact-iteration budget unit."""
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


def val_int(n: int, q: int) -> int:
    """q-adic valuation of a nonzero integer (power-doubling: O(log v) divisions)."""
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    if n % q:
        return 0
    powers = [(q, 1)]
    while True:
        p2, s2 = powers[-1][0] ** 2, powers[-1][1] * 2
        if n % p2 == 0:
            powers.append((p2, s2))
        else:
            break
    v = 0
    for p, s in reversed(powers):
        while n % p == 0:
            n //= p
            v += s
    return v


def val_fraction(x: Fraction, q: int) -> int:
    """q-adic valuation of a nonzero rational."""
    return val_int(x.numerator, q) - val_int(x.denominator, q)


def abs_q(x: Fraction, q: int) -> float:
    """q-adic absolute value |x|_q = q^(-v_q(x)); |0|_q = 0."""
    if x == 0:
        return 0.0
    return float(q) ** (-val_fraction(x, q))


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for n < 3.3e24 with the fixed base set."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_int(n: int, trial_limit: int = 1 << 20) -> dict[int, int]:
    """Factor |n| by trial division; prime cofactors beyond the limit are
    accepted via Miller-Rabin, anything else raises."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n and f <= trial_limit:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        if not is_probable_prime(n):
            raise ValueError(f"composite cofactor {n} beyond trial limit")
        out[n] = out.get(n, 0) + 1
    return out


def primes_of(x: Fraction) -> set[int]:
    """Primes dividing the numerator or denominator of x."""
    out: set[int] = set()
    if x.numerator != 0:
        out.update(factor_int(x.numerator))
    out.update(factor_int(x.denominator))
    return out


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or plain integer strings as used on the command line."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x: Fraction) -> str:
    """Serialize a rational as "p/q" (bit-exact round trip with parse)."""
    return f"{x.numerator}/{x.denominator}"


_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"\s*(?P<im>[+-]\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?\s*(?P<i>i)?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse decimals of the form "re+imi", "re", "imi"."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty complex literal")
    if t.endswith("i") or t.endswith("I"):
        body = t[:-1]
        # split off the trailing signed imaginary part
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                re_part, im_part = body[:k], body[k:]
                break
        else:
            re_part, im_part = "", body
        if im_part in ("", "+"):
            im = 1.0
        elif im_part == "-":
            im = -1.0
        else:
            im = float(im_part)
        return complex(float(re_part) if re_part else 0.0, im)
    return complex(float(t), 0.0)


def format_float(x: float) -> str:
    """Shortest round-trip decimal; deterministic across runs."""
    return repr(float(x))


def ordered_map(fn, items):
    """Deterministic map used wherever the modules advertise a parallel-map
    contract: tasks are independent and results are assembled in input order."""
    return [fn(item) for item in items]
