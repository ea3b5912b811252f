"""Aberth-Ehrlich simultaneous root finding.

Two entry points: `aberth_roots` for explicit coefficient lists (eliminants
from resultants, specialized relation polynomials), and `aberth_engine` for
huge-degree polynomials given only through a vectorized Newton-ratio oracle
(orbit-difference polynomials are evaluated by the dynamical recursion, never
expanded).  Everything is deterministic: fixed initial configurations, no RNG.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

_EPS = np.finfo(float).eps
_GOLDEN = 0.6180339887498949


def _to_float_pow2(fr: Fraction, shift: int) -> float:
    """float(fr / 2^shift) without overflow for huge numerators/denominators."""
    num, den = fr.numerator, fr.denominator
    if num == 0:
        return 0.0
    sign = -1.0 if num < 0 else 1.0
    num = abs(num)
    e = num.bit_length() - den.bit_length()
    if e >= 0:
        den <<= e
    else:
        num <<= -e
    return sign * math.ldexp(num / den, e - shift)  # num/den in [0.5, 2)


def coeffs_to_floats(coeffs) -> np.ndarray:
    """Scale-normalize exact coefficients to a complex array (max |c| ~ 1)."""
    if any(isinstance(c, complex) for c in coeffs):
        return np.asarray([complex(c) for c in coeffs])
    fracs = [Fraction(c) for c in coeffs]
    shift = 0
    for f in fracs:
        if f != 0:
            shift = max(shift, f.numerator.bit_length() - f.denominator.bit_length())
    return np.asarray([complex(_to_float_pow2(f, shift)) for f in fracs])


def _pairwise_repulsion(z: np.ndarray, active=None, chunk: int = 2048) -> np.ndarray:
    """S_i = sum_{j != i} 1/(z_i - z_j) for active rows, in blocks.

    Converged points still repel (they appear in every column) but need no
    correction of their own, so their rows are skipped.  The pair sums run
    in real float32 arithmetic (1/(x+iy) = (x-iy)/(x^2+y^2)): the repulsion
    only steers the sweeps, final accuracy comes from the Newton ratio.
    """
    n = len(z)
    S = np.zeros(n, dtype=complex)
    zr = z.real.astype(np.float32)
    zi = z.imag.astype(np.float32)
    rows_all = np.arange(n) if active is None else np.flatnonzero(active)
    for lo in range(0, len(rows_all), chunk):
        rows = rows_all[lo:lo + chunk]
        dx = zr[rows, None] - zr[None, :]
        dy = zi[rows, None] - zi[None, :]
        d2 = dx * dx + dy * dy
        d2[np.arange(len(rows)), rows] = np.inf  # exclude the diagonal
        inv = 1.0 / np.maximum(d2, np.float32(1e-30))
        S[rows] = ((dx * inv).sum(axis=1, dtype=np.float64)
                   - 1j * (dy * inv).sum(axis=1, dtype=np.float64))
    return S


def initial_points(degree: int, r_lo: float, r_hi: float) -> np.ndarray:
    """Deterministic quasi-uniform points on geometrically spread circles."""
    k = np.arange(degree)
    radii = r_lo * (r_hi / r_lo) ** ((k + 0.5) / degree)
    angles = 2 * np.pi * ((k * _GOLDEN) % 1.0) + 0.4
    return radii * np.exp(1j * angles)


def aberth_engine(newton_fn, z0: np.ndarray, tol: float = 1e-13,
                  max_sweeps: int = 200):
    """Run Aberth-Ehrlich sweeps from z0.

    newton_fn(z) -> (ratio, accept): ratio is p/p' elementwise; accept is a
    residual-based acceptance mask (True where z is already numerically a
    root, which is how multiple/clustered roots are allowed to stop).
    A point also converges after two consecutive sub-tolerance corrections
    (a single small step can be a transient of the repulsion denominator).
    Converged points are frozen but keep repelling the others.
    Returns (points, converged mask, sweeps used).
    """
    z = np.array(z0, dtype=complex)
    n = len(z)
    converged = np.zeros(n, dtype=bool)
    small_prev = np.zeros(n, dtype=bool)
    sweeps = 0
    best = 0
    stagnant = 0
    for sweeps in range(1, max_sweeps + 1):
        ratio, accept = newton_fn(z)
        S = _pairwise_repulsion(z, active=None if not converged.any()
                                else ~converged)
        denom = 1.0 - ratio * S
        denom = np.where(np.abs(denom) < 1e-290, 1.0, denom)
        w = ratio / denom
        w = np.where(np.isfinite(w), w, 0.0)
        w[converged] = 0.0
        small = np.abs(w) <= tol * (1.0 + np.abs(z))
        z = z - w
        converged |= accept | (small & small_prev)
        small_prev = small
        if converged.all():
            break
        got = int(converged.sum())
        if got > best:
            best = got
            stagnant = 0
        else:
            stagnant += 1
            if stagnant >= 60:
                break  # no progress for many sweeps: report the stragglers
    return z, converged, sweeps


def _deflation_sum(z: np.ndarray, found: np.ndarray,
                   chunk: int = 1024) -> np.ndarray:
    """sum_k 1/(z_i - r_k) over found roots, float32 pair arithmetic."""
    if len(found) == 0:
        return np.zeros(len(z), dtype=complex)
    S = np.zeros(len(z), dtype=complex)
    zr = z.real.astype(np.float32)
    zi = z.imag.astype(np.float32)
    fr = found.real.astype(np.float32)
    fi = found.imag.astype(np.float32)
    for lo in range(0, len(z), chunk):
        hi = min(lo + chunk, len(z))
        dx = zr[lo:hi, None] - fr[None, :]
        dy = zi[lo:hi, None] - fi[None, :]
        d2 = np.maximum(dx * dx + dy * dy, np.float32(1e-30))
        inv = 1.0 / d2
        S[lo:hi] = ((dx * inv).sum(axis=1, dtype=np.float64)
                    - 1j * (dy * inv).sum(axis=1, dtype=np.float64))
    return S


def deflation_engine(newton_fn, degree: int, r_lo: float, r_hi: float,
                     tol: float = 1e-13, batch_iters: int = 64,
                     max_rounds: int = 40, batch_cap: int = 8192,
                     trace=None):
    """Find all roots by Newton iteration with implicit deflation.

    Fresh batches of starting points are driven by w = N / (1 - N * D)
    where N = p/p' and D sums 1/(z - r) over the roots found so far: found
    roots repel (simple roots eject approaching points; genuine higher
    multiplicities admit one extra copy per pass).  Quadratic per-point
    convergence avoids the diffusive collective regime of the all-points
    Ehrlich sweep on large clustered root sets.  Deterministic seeding.
    Returns (roots array, possibly short of `degree` on stagnation).
    """
    found = np.empty(0, dtype=complex)
    stagnant = 0
    # probe radii cycle from sub-spacing to several spacings around the
    # found roots; the gaps between found roots are where the rest live
    scales = (0.35, 0.8, 1.8, 4.0, 9.0, 20.0)
    for round_no in range(max_rounds):
        need = degree - len(found)
        if need <= 0:
            break
        bsize = min(max(2 * need, 512), batch_cap)
        if round_no >= 1 and len(found):
            reps = -(-bsize // len(found))
            base = np.tile(found, reps)[:bsize]
            k = np.arange(bsize)
            rad = (4.0 / degree) * scales[(round_no - 1) % len(scales)] \
                * (0.5 + (k % 8) / 8.0)
            z = base + rad * np.exp(2j * np.pi * _GOLDEN * k)
        else:
            z = initial_points(bsize, r_lo * (1 + 0.1 * round_no),
                               r_hi * (1 + 0.07 * round_no))
            z = z * np.exp(1j * 0.61803 * round_no)
        locked = np.zeros(bsize, dtype=bool)
        small_prev = np.zeros(bsize, dtype=bool)
        for it in range(batch_iters):
            active = ~locked
            if active.sum() <= max(8, bsize // 64):
                break
            za = z[active]
            ratio_a, accept_a = newton_fn(za)
            S_a = _deflation_sum(za, found)
            denom = 1.0 - ratio_a * S_a
            denom = np.where(np.abs(denom) < 1e-290, 1.0, denom)
            w = ratio_a / denom
            w = np.where(np.isfinite(w), w, 0.0)
            small = np.abs(w) <= tol * (1.0 + np.abs(za))
            z[active] = za - w
            newly = np.zeros(bsize, dtype=bool)
            newly[active] = accept_a | (small & small_prev[active])
            locked |= newly
            small_prev[active] = small
        news = _dedupe_points(z[locked])
        if len(news) > need:
            news = news[:need]
        if len(news) < max(2, need // 20):
            stagnant += 1
            if stagnant >= 2:
                break  # probing saturated: switch to the collective endgame
        else:
            stagnant = 0
        found = np.concatenate([found, news])
        if trace is not None:
            trace(round_no, len(news), len(found))
    found = _deflation_endgame(newton_fn, degree, found, tol, trace)
    order = np.lexsort((found.imag, found.real))
    return found[order]


def _deflation_endgame(newton_fn, degree: int, found: np.ndarray, tol: float,
                       trace=None, max_sweeps: int = 2000):
    """Collective sweeps for the remaining roots against the found field.

    The stragglers live in gaps too tight for blind probing; mutual
    repulsion plus the deflation field of everything found so far herds
    exactly `need` points into the remaining slots.  Locked points join the
    field immediately, so no root is found twice (beyond genuine
    multiplicity).
    """
    need = degree - len(found)
    if need <= 0:
        return found
    # oversubscribe: basin-entry rate scales with the number of seekers
    flood = int(min(max(4 * need, 1024), 8192))
    k = np.arange(flood)
    if len(found):
        base = np.tile(found, -(-flood // len(found)))[:flood]
        z = base + (6.0 / degree) * (0.5 + (k % 8) / 4.0) \
            * np.exp(2j * np.pi * _GOLDEN * k)
    else:
        z = initial_points(flood, 0.05, 1.0)
    small_prev = np.zeros(len(z), dtype=bool)
    for sweep in range(1, max_sweeps + 1):
        if len(z) == 0 or len(found) >= degree:
            break
        ratio, accept = newton_fn(z)
        S = _deflation_sum(z, found) + _pairwise_repulsion(z)
        denom = 1.0 - ratio * S
        denom = np.where(np.abs(denom) < 1e-290, 1.0, denom)
        w = ratio / denom
        w = np.where(np.isfinite(w), w, 0.0)
        small = np.abs(w) <= tol * (1.0 + np.abs(z))
        z = z - w
        locked = accept | (small & small_prev)
        if locked.any():
            news = _dedupe_points(z[locked])
            excess = len(found) + len(news) - degree
            if excess > 0:
                news = news[:len(news) - excess]
            found = np.concatenate([found, news])
            z = z[~locked]
            small_prev = small[~locked]
            if trace is not None:
                trace(f"endgame@{sweep}", len(news), len(found))
            if len(found) >= degree:
                break
        else:
            small_prev = small
    return found


def _dedupe_points(z: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Collapse batch-internal duplicates (several starts on one root).

    Plane sweep over the real-sorted list: candidates are checked against
    every kept point whose real part is within tolerance (nearly equal real
    parts with distinct imaginary parts are NOT adjacent after sorting).
    """
    if len(z) == 0:
        return z
    order = np.lexsort((z.imag, z.real))
    z = z[order]
    keep: list[complex] = []
    for v in z:
        v = complex(v)
        dup = False
        eps = tol * (1 + abs(v))
        for u in reversed(keep):
            if v.real - u.real > eps:
                break
            if abs(v - u) <= eps:
                dup = True
                break
        if not dup:
            keep.append(v)
    return np.asarray(keep, dtype=complex)


def _poly_newton_factory(c: np.ndarray):
    d = len(c) - 1
    dc = c[1:] * np.arange(1, d + 1)
    abs_c = np.abs(c)

    def fn(z):
        p = np.zeros_like(z)
        for coef in c[::-1]:
            p = p * z + coef
        dp = np.zeros_like(z)
        for coef in dc[::-1]:
            dp = dp * z + coef
        scale = np.zeros(len(z), dtype=float)
        az = np.abs(z)
        for coef in abs_c[::-1]:
            scale = scale * az + coef
        accept = np.abs(p) <= 16 * d * _EPS * scale
        safe_dp = np.where(dp == 0, 1.0, dp)
        ratio = np.where(dp == 0, 1e-3 * (1 + np.abs(z)), p / safe_dp)
        return ratio, accept

    return fn


def aberth_roots(coeffs, tol: float = 1e-13, max_sweeps: int = 200,
                 return_status: bool = False):
    """All complex roots of a polynomial given lowest-degree-first coefficients.

    Coefficients may be exact (int/Fraction; scale-normalized before float
    conversion) or numeric.  Roots at zero are split off exactly.  Output is
    sorted by (re, im) and carries one entry per root with multiplicity.
    """
    c = list(coeffs)
    while c and (c[-1] == 0):
        c.pop()
    if not c:
        raise ValueError("zero polynomial has arbitrary roots")
    zeros_at_origin = 0
    while c and c[0] == 0:
        c.pop(0)
        zeros_at_origin += 1
    arr = coeffs_to_floats(c)
    d = len(arr) - 1
    roots: list[complex] = [0j] * zeros_at_origin
    status = [True] * zeros_at_origin
    if d == 1:
        roots.append(complex(-arr[0] / arr[1]))
        status.append(True)
    elif d >= 2:
        lead = abs(arr[-1])
        r_hi = 1.0 + max(np.abs(arr[:-1])) / lead
        tail = abs(arr[0])
        r_lo = tail / (tail + max(np.abs(arr[1:])))
        r_lo = max(r_lo, 1e-6)
        z0 = initial_points(d, r_lo, r_hi)
        z, conv, _ = aberth_engine(_poly_newton_factory(arr), z0, tol, max_sweeps)
        order = np.lexsort((z.imag, z.real))
        roots.extend(complex(v) for v in z[order])
        status.extend(bool(b) for b in conv[order])
    if return_status:
        return roots, status
    return roots
