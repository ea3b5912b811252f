"""Desk-scale equidistribution experiments on a parametrized curve.

Preperiodic parameters of fixed combinatorics (n, m) are the roots of
c_n(t) - c_m(t); empirical measures on them are compared against the
bifurcation density, obtained as a discrete Laplacian of the Green
potential.  The orbit-difference polynomial is never expanded: its Newton
ratio is evaluated through the dynamical recursion in renormalized
(mantissa, exponent) arithmetic, which survives the 3^n-fold coefficient
growth that would overflow doubles.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import GridInvalidError, PersistentRelationError
from .heights import green_on_curve
from .laurent import ParamCurve, laurent_orbit
from .polynomials import UPoly
from .rootfind import deflation_engine
from .util import format_float, is_probable_prime

#: residual acceptance is 1e-10 * degree (cluster-aware backward criterion)
RESIDUAL_FACTOR = 1e-10


@dataclass(frozen=True)
class Window:
    """Rectangle in the t-plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("degenerate window")

    @classmethod
    def square(cls, r: float) -> "Window":
        return cls(-r, r, -r, r)

    def contains(self, z: complex) -> bool:
        return (self.re_min <= z.real <= self.re_max
                and self.im_min <= z.imag <= self.im_max)

    def as_tuple(self):
        return (self.re_min, self.re_max, self.im_min, self.im_max)


# ---------------------------------------------------------------------------
# renormalized orbit-difference evaluation
# ---------------------------------------------------------------------------

def _renorm(v, e):
    av = np.abs(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        _, x = np.frexp(av)
    shift = np.where((av > 0) & (np.abs(x) > 256), x, 0).astype(float)
    v = v * np.exp2(-shift)
    e = e + shift
    return v, e


def _smul(v1, e1, v2, e2):
    return _renorm(v1 * v2, e1 + e2)


def _sadd(v1, e1, v2, e2):
    e = np.maximum(e1, e2)
    v = (v1 * np.exp2(np.maximum(e1 - e, -600.0))
         + v2 * np.exp2(np.maximum(e2 - e, -600.0)))
    return _renorm(v, e)


def _orbit_diff_eval(C: ParamCurve, sign: int, n: int, m: int, t: np.ndarray):
    """(value, log2|value|, newton ratio) of t -> c_n(t) - c_m(t).

    Value and derivative are carried as (mantissa, exponent) pairs through
    the recursion; the returned value is a plain complex (inf if it does not
    fit a double, which only happens far from roots).
    """
    def polyval(u: UPoly, x):
        acc = np.zeros_like(x)
        for c in reversed(u.coeffs):
            acc = acc * x + complex(float(Fraction(c)))
        return acc

    a_num, a_den = polyval(C.a_num, t), polyval(C.a_den, t)
    b_num, b_den = polyval(C.b_num, t), polyval(C.b_den, t)
    da_num, da_den = polyval(C.a_num.derivative(), t), polyval(C.a_den.derivative(), t)
    db_num, db_den = polyval(C.b_num.derivative(), t), polyval(C.b_den.derivative(), t)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = a_num / a_den
        b = b_num / b_den
        da = (da_num * a_den - a_num * da_den) / (a_den * a_den)
        db = (db_num * b_den - b_num * db_den) / (b_den * b_den)
    zero = np.zeros(len(t))
    three_a2 = 3 * a * a
    six_a_da = 6 * a * da
    cv, ce = sign * a, zero.copy()
    dv, de = sign * da, zero.copy()
    snap = {}
    for k in range(n + 1):
        if k == m:
            snap = {"cv": cv.copy(), "ce": ce.copy(),
                    "dv": dv.copy(), "de": de.copy()}
        if k == n:
            break
        c2v, c2e = _smul(cv, ce, cv, ce)
        # derivative first (uses current c): d' = (3c^2 - 3a^2) d - 6 a a' c + b'
        s1v, s1e = _sadd(3 * c2v, c2e, -three_a2, zero)
        t1v, t1e = _smul(s1v, s1e, dv, de)
        t2v, t2e = _smul(-six_a_da, zero, cv, ce)
        ndv, nde = _sadd(t1v, t1e, t2v, t2e)
        ndv, nde = _sadd(ndv, nde, db, zero)
        # value: c' = c^3 - 3a^2 c + b
        c3v, c3e = _smul(c2v, c2e, cv, ce)
        u1v, u1e = _smul(-three_a2, zero, cv, ce)
        ncv, nce = _sadd(c3v, c3e, u1v, u1e)
        ncv, nce = _sadd(ncv, nce, b, zero)
        cv, ce, dv, de = ncv, nce, ndv, nde
    pv, pe = _sadd(cv, ce, -snap["cv"], snap["ce"])
    qv, qe = _sadd(dv, de, -snap["dv"], snap["de"])
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log2p = np.where(np.abs(pv) > 0, np.log2(np.abs(pv)) + pe, -np.inf)
        log2cn = np.where(np.abs(cv) > 0, np.log2(np.abs(cv)) + ce, -np.inf)
        log2cm = np.where(np.abs(snap["cv"]) > 0,
                          np.log2(np.abs(snap["cv"])) + snap["ce"], -np.inf)
        log2scale = np.logaddexp2(log2cn, log2cm)
        ratio = np.where(qv != 0, pv / qv, 0.0) * np.exp2(
            np.clip(pe - qe, -900, 900))
        value = pv * np.exp2(np.clip(pe, -1020, 1020))
    ratio = np.where(np.isfinite(ratio), ratio, 0.0)
    return value, log2p, ratio, log2scale


def _orbit_diff_degree(C: ParamCurve, sign: int, n: int, m: int) -> int:
    """Exact degree of the cleared-numerator polynomial of c_n - c_m."""
    dA, dB = C.a_den.degree, C.b_den.degree
    deg_den = [0]
    for _ in range(max(n, m)):
        deg_den.append(3 * deg_den[-1] + 2 * dA + dB)
    sa, sb = C.local_series("inf", 24)
    orbit = laurent_orbit(sa, sb, sign, n, terms=24)
    diff = orbit[n] - orbit[m]
    if diff.is_zero():
        raise PersistentRelationError(
            f"c_{n} - c_{m} vanishes at infinity to precision; persistent "
            "relation suspected")
    return -diff.valuation() + deg_den[n] + deg_den[m]


def _relation_vanishes_exact(C: ParamCurve, sign: int, n: int, m: int) -> bool:
    """Exact rational-function check; only used for small n."""
    N, D = C.a_num * sign, C.a_den
    Ad, Bd = C.a_den, C.b_den
    An, Bn = C.a_num, C.b_num
    snap = None
    for k in range(n + 1):
        if k == m:
            snap = (N, D)
        if k == n:
            break
        N = (N * N * N * (Ad * Ad) * Bd
             - 3 * (An * An) * N * (D * D) * Bd
             + Bn * (D * D * D) * (Ad * Ad))
        D = D * D * D * (Ad * Ad) * Bd
    Nm, Dm = snap
    return (N * Dm - Nm * D).is_zero()


def _relation_vanishes_modular(C: ParamCurve, sign: int, n: int, m: int,
                               trials: int = 6) -> bool:
    """Schwartz-Zippel: evaluate the cleared numerator mod random primes."""
    rng = random.Random(0x5eed ^ (sign * 31 + n * 7 + m))
    done = 0
    while done < trials:
        p = rng.getrandbits(61) | (1 << 60) | 1
        if not is_probable_prime(p):
            continue
        t0 = rng.randrange(2, p - 2)

        def ev(u: UPoly) -> int:
            acc = 0
            for c in reversed(u.coeffs):
                f = Fraction(c)
                acc = (acc * t0 + f.numerator * pow(f.denominator, -1, p)) % p
            return acc

        try:
            a = ev(C.a_num) * pow(ev(C.a_den), -1, p) % p
            b = ev(C.b_num) * pow(ev(C.b_den), -1, p) % p
        except ValueError:
            continue  # denominator hit zero mod p: resample
        c = sign * a % p
        cm = None
        for k in range(n + 1):
            if k == m:
                cm = c
            if k == n:
                break
            c = (c * c % p * c - 3 * a * a % p * c + b) % p
        if (c - cm) % p != 0:
            return False
        done += 1
    return True


def relation_vanishes_on_curve(C: ParamCurve, sign: int, n: int, m: int) -> bool:
    """Does c_n = c_m hold identically on the curve (persistent relation)?"""
    if n <= 5:
        return _relation_vanishes_exact(C, sign, n, m)
    return _relation_vanishes_modular(C, sign, n, m)


@dataclass
class ParamRootSet:
    """Roots of c_n(t) - c_m(t) found in a window, with residuals."""

    sign: int
    n: int
    m: int
    window: Window
    roots: list            # complex, inside the window, converged
    residuals: list        # |c_n - c_m| at each root
    degree: int            # cleared-numerator degree (= total root count)
    nonconverged: list = field(default_factory=list)  # (point, residual)

    def count(self) -> int:
        return len(self.roots)


def preperiodic_params(C: ParamCurve, sign: int, n: int, m: int,
                       window: Window, batch_iters: int = 64) -> ParamRootSet:
    """All parameters in the window with c_n(t) = c_m(t).

    Simultaneous root finding on the cleared-numerator polynomial, evaluated
    through the recursion: Newton batches with implicit deflation against
    already-found roots, then Newton refinement; acceptance combines the
    1e-10 * degree residual rule with the cancellation floor of the
    evaluation.  Roots where a curve denominator vanishes are discarded; an
    identically-zero numerator raises the persistent-relation signal.
    """
    if not n > m >= 0:
        raise ValueError("need n > m >= 0")
    if relation_vanishes_on_curve(C, sign, n, m):
        raise PersistentRelationError(
            f"c_{n} = c_{m} identically on the curve for sign {sign:+d}")
    degree = _orbit_diff_degree(C, sign, n, m)
    if degree < 1:
        return ParamRootSet(sign, n, m, window, [], [], degree)
    span = max(abs(window.re_min), abs(window.re_max),
               abs(window.im_min), abs(window.im_max), 1.0)
    accept_log2 = math.log2(RESIDUAL_FACTOR * degree)
    # cancellation floor: |c_n - c_m| cannot be resolved below eps * scale
    backward_log2 = math.log2(64 * np.finfo(float).eps)

    def accept_mask(log2p, log2scale):
        return (log2p <= accept_log2) | (log2p <= backward_log2 + log2scale)

    def newton_fn(z):
        _, log2p, ratio, log2scale = _orbit_diff_eval(C, sign, n, m, z)
        return ratio, accept_mask(log2p, log2scale)

    z = deflation_engine(newton_fn, degree, 0.05, 1.2 * span,
                         batch_iters=batch_iters)
    converged = np.ones(len(z), dtype=bool)
    # Newton polish
    for _ in range(4):
        _, _, ratio, _ = _orbit_diff_eval(C, sign, n, m, z)
        z = z - np.where(converged, ratio, 0.0)
    value, log2p, ratio, log2scale = _orbit_diff_eval(C, sign, n, m, z)
    # final gate: residual acceptance, or Newton correction at rounding level
    ok_res = accept_mask(log2p, log2scale) | (
        np.abs(ratio) <= 1e-11 * (1.0 + np.abs(z)))
    # discard points where a denominator vanishes
    def denvals(u: UPoly):
        acc = np.zeros_like(z)
        for c in reversed(u.coeffs):
            acc = acc * z + complex(float(Fraction(c)))
        return np.abs(acc)

    den_ok = (denvals(C.a_den) > 1e-12) & (denvals(C.b_den) > 1e-12)
    # report the scale-relative (backward) residual: raw |c_n - c_m| is
    # meaningless where the orbit values themselves are astronomical
    with np.errstate(invalid="ignore"):
        rel = np.exp2(np.clip(log2p - np.maximum(log2scale, 0.0), -1060, 60))
    roots = []
    residuals = []
    nonconverged = []
    order = np.lexsort((z.imag.round(10), z.real.round(10)))
    for idx in order:
        zi = complex(z[idx])
        res = float(rel[idx]) if np.isfinite(rel[idx]) else math.inf
        if not den_ok[idx]:
            continue
        if converged[idx] and ok_res[idx]:
            if window.contains(zi):
                roots.append(zi)
                residuals.append(res)
        else:
            nonconverged.append((zi, res))
    return ParamRootSet(sign, n, m, window, roots, residuals, degree,
                        nonconverged)


# ---------------------------------------------------------------------------
# bifurcation density grids
# ---------------------------------------------------------------------------

@dataclass
class MeasureGrid:
    """Probability density on a windowed grid (masked cells carry 0)."""

    window: Window
    nx: int
    ny: int
    density: np.ndarray          # shape (ny, nx), sums to 1 over unmasked
    mask: np.ndarray             # True where excluded (punctures, border)
    clipped_fraction: float
    sign: int
    metadata: dict = field(default_factory=dict)

    def cell_centers(self):
        w = self.window
        xs = np.linspace(w.re_min, w.re_max, self.nx + 1)
        ys = np.linspace(w.im_min, w.im_max, self.ny + 1)
        return (xs[:-1] + xs[1:]) / 2, (ys[:-1] + ys[1:]) / 2

    def locate(self, z: complex):
        """Cell indices of a point, or None outside the window."""
        w = self.window
        if not w.contains(z):
            return None
        ix = min(int((z.real - w.re_min) / (w.re_max - w.re_min) * self.nx),
                 self.nx - 1)
        iy = min(int((z.imag - w.im_min) / (w.im_max - w.im_min) * self.ny),
                 self.ny - 1)
        return iy, ix


def _numeric_poles(C: ParamCurve) -> list[complex]:
    out = []
    for den in (C.a_den, C.b_den):
        if den.degree > 0:
            coeffs = [float(Fraction(c)) for c in den.coeffs]
            out.extend(complex(r) for r in np.roots(list(reversed(coeffs))))
    return out


def bifurcation_density(C: ParamCurve, sign: int, window: Window,
                        resolution: int = 96, tol: float = 1e-9,
                        clip_limit: float = 0.05,
                        oversample: int = 2) -> MeasureGrid:
    """Discrete-Laplacian density of the Green potential on a window grid.

    The potential is sampled on an `oversample`-times finer grid and the
    fine Laplacians are binned into the output cells (fluxes telescope, so
    the sign oscillation of the raw stencil along the fractal boundary
    largely cancels).  Punctures are masked by disks of radius 10 grid
    spacings; negatives are clipped and reported, and clipped mass beyond
    `clip_limit` of the total invalidates the grid.
    """
    nx = ny = int(resolution)
    if nx < 8:
        raise ValueError("resolution too small")
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    w = window
    fx, fy = nx * oversample, ny * oversample
    xs = np.linspace(w.re_min, w.re_max, fx + 1)
    ys = np.linspace(w.im_min, w.im_max, fy + 1)
    cx = (xs[:-1] + xs[1:]) / 2
    cy = (ys[:-1] + ys[1:]) / 2
    hx = cx[1] - cx[0]
    hy = cy[1] - cy[0]
    poles = _numeric_poles(C)
    mask_r = 10.0 * max(hx, hy) * oversample  # 10 coarse spacings
    fmask = np.zeros((fy, fx), dtype=bool)
    fmask[0, :] = fmask[-1, :] = True
    fmask[:, 0] = fmask[:, -1] = True  # stencil undefined on the rim
    G = np.zeros((fy, fx))
    for iy, y in enumerate(cy):
        for ix, x in enumerate(cx):
            t = complex(x, y)
            if any(abs(t - p) <= mask_r for p in poles):
                fmask[iy, ix] = True
                continue
            G[iy, ix] = green_on_curve(C, t, sign, tol).value
    lap = np.zeros_like(G)
    lap[1:-1, 1:-1] = (G[2:, 1:-1] + G[:-2, 1:-1] - 2 * G[1:-1, 1:-1]) / hy**2 \
        + (G[1:-1, 2:] + G[1:-1, :-2] - 2 * G[1:-1, 1:-1]) / hx**2
    # stencil touching a masked sample is unreliable: widen by one
    wide = fmask.copy()
    wide[1:, :] |= fmask[:-1, :]
    wide[:-1, :] |= fmask[1:, :]
    wide[:, 1:] |= fmask[:, :-1]
    wide[:, :-1] |= fmask[:, 1:]
    lap[wide] = 0.0
    binned = lap.reshape(ny, oversample, nx, oversample).sum(axis=(1, 3))
    mask = wide.reshape(ny, oversample, nx, oversample).any(axis=(1, 3))
    binned[mask] = 0.0
    neg = -binned[binned < 0].sum()
    pos = binned[binned > 0].sum()
    if pos <= 0:
        raise GridInvalidError("no positive bifurcation mass on this window")
    clipped_fraction = float(neg / (pos + neg))
    if clipped_fraction > clip_limit:
        raise GridInvalidError(
            f"clipped mass fraction {clipped_fraction:.3f} exceeds "
            f"{clip_limit}: refine the resolution or tolerance")
    binned[binned < 0] = 0.0
    density = binned / binned.sum()
    return MeasureGrid(window=w, nx=nx, ny=ny, density=density, mask=mask,
                       clipped_fraction=clipped_fraction, sign=sign,
                       metadata={"resolution": resolution, "tol": tol,
                                 "clip_limit": clip_limit,
                                 "oversample": oversample})


def compare_measures(roots: ParamRootSet, grid: MeasureGrid,
                     partition: int = 8) -> float:
    """Total-variation discrepancy on a coarse box partition of the window.

    Both measures are restricted to the window, drop masked cells/points,
    and are renormalized before aggregation.
    """
    if not roots.roots:
        raise ValueError("empty root set")
    nb = int(partition)
    w = grid.window
    emp = np.zeros((nb, nb))
    for z in roots.roots:
        loc = grid.locate(z)
        if loc is None or grid.mask[loc]:
            continue
        bx = min(int((z.real - w.re_min) / (w.re_max - w.re_min) * nb), nb - 1)
        by = min(int((z.imag - w.im_min) / (w.im_max - w.im_min) * nb), nb - 1)
        emp[by, bx] += 1.0
    if emp.sum() == 0:
        raise ValueError("no roots left after windowing/masking")
    emp /= emp.sum()
    ref = np.zeros((nb, nb))
    cx, cy = grid.cell_centers()
    for iy in range(grid.ny):
        by = min(int((cy[iy] - w.im_min) / (w.im_max - w.im_min) * nb), nb - 1)
        for ix in range(grid.nx):
            if grid.mask[iy, ix]:
                continue
            bx = min(int((cx[ix] - w.re_min) / (w.re_max - w.re_min) * nb),
                     nb - 1)
            ref[by, bx] += grid.density[iy, ix]
    if ref.sum() <= 0:
        raise ValueError("reference grid carries no mass on the window")
    ref /= ref.sum()
    return float(0.5 * np.abs(emp - ref).sum())


# ---------------------------------------------------------------------------
# exports: CSV, self-contained SVG, matplotlib report figure
# ---------------------------------------------------------------------------

def _metadata_lines(config: Optional[dict]) -> list[str]:
    cfg = json.dumps(config or {}, sort_keys=True, default=str)
    return [f"# config: {cfg}"]


def export(obj, path, fmt: str, config: Optional[dict] = None,
           overlay: Optional[ParamRootSet] = None) -> None:
    """Write a root set or grid to CSV or SVG (deterministic bytes)."""
    fmt = fmt.upper()
    if fmt == "CSV":
        if isinstance(obj, ParamRootSet):
            _roots_csv(obj, path, config)
        elif isinstance(obj, MeasureGrid):
            _grid_csv(obj, path, config)
        else:
            raise TypeError(f"cannot export {type(obj).__name__} as CSV")
    elif fmt == "SVG":
        if not isinstance(obj, MeasureGrid):
            raise TypeError("SVG export renders a MeasureGrid")
        _svg(obj, overlay, path, config)
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def _roots_csv(roots: ParamRootSet, path, config) -> None:
    lines = _metadata_lines(config)
    lines.append("re,im,residual")
    for z, r in zip(roots.roots, roots.residuals):
        lines.append(f"{format_float(z.real)},{format_float(z.imag)},"
                     f"{format_float(r)}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _grid_csv(grid: MeasureGrid, path, config) -> None:
    lines = _metadata_lines(config)
    lines.append("x,y,density")
    cx, cy = grid.cell_centers()
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            lines.append(f"{format_float(cx[ix])},{format_float(cy[iy])},"
                         f"{format_float(grid.density[iy, ix])}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _heat_rgb(x: float) -> str:
    """Simple dark-to-hot ramp on [0, 1]."""
    x = min(max(x, 0.0), 1.0)
    r = int(255 * min(1.0, 3 * x))
    g = int(255 * min(1.0, max(0.0, 3 * x - 1)))
    b = int(255 * min(1.0, max(0.0, 3 * x - 2)))
    return f"rgb({r},{g},{b})"


def _svg(grid: MeasureGrid, overlay: Optional[ParamRootSet], path,
         config) -> None:
    """Self-contained SVG heatmap (one rect per cell) with root overlay."""
    W = H = 640
    nx, ny = grid.nx, grid.ny
    cw, ch = W / nx, H / ny
    peak = float(grid.density.max()) or 1.0
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" '
             f'width="{W}" height="{H}" style="background:#000">']
    cfg = json.dumps(config or {}, sort_keys=True, default=str)
    parts.append(f"<desc>config: {cfg}</desc>")
    for iy in range(ny):
        for ix in range(nx):
            v = grid.density[iy, ix] / peak
            color = "#222" if grid.mask[iy, ix] else _heat_rgb(v**0.5)
            # SVG y axis points down: flip rows
            y = H - (iy + 1) * ch
            parts.append(f'<rect x="{ix * cw:.2f}" y="{y:.2f}" '
                         f'width="{cw:.2f}" height="{ch:.2f}" '
                         f'fill="{color}"/>')
    if overlay is not None:
        w = grid.window
        for z in overlay.roots:
            px = (z.real - w.re_min) / (w.re_max - w.re_min) * W
            py = H - (z.imag - w.im_min) / (w.im_max - w.im_min) * H
            parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="1.6" '
                         f'fill="none" stroke="#4df" stroke-width="0.6"/>')
    parts.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def render_density_figure(grid: MeasureGrid, path,
                          overlay: Optional[ParamRootSet] = None,
                          title: str = "") -> None:
    """Matplotlib report figure: density heatmap with optional root overlay."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    w = grid.window
    fig, ax = plt.subplots(figsize=(7, 6))
    shown = np.ma.masked_where(grid.mask, grid.density)
    im = ax.imshow(shown, origin="lower", cmap="inferno",
                   extent=(w.re_min, w.re_max, w.im_min, w.im_max),
                   interpolation="nearest", aspect="equal")
    fig.colorbar(im, ax=ax, label="normalized bifurcation density")
    if overlay is not None and overlay.roots:
        xs = [z.real for z in overlay.roots]
        ys = [z.imag for z in overlay.roots]
        ax.plot(xs, ys, ".", ms=2.0, color="#4dd2ff", alpha=0.7,
                label=f"preperiodic parameters ({overlay.n},{overlay.m})")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("Re t")
    ax.set_ylabel("Im t")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
