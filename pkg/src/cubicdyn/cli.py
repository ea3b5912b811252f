"""Command-line interface: one subcommand per module.

Exit codes: 0 success (including distinctly-reported signals such as common
components), 2 usage errors, 3 resource budgets, 4 numerical invalidity.
Every output file begins with a metadata block echoing the run
configuration, and identical configurations produce byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .boettcher import boettcher_coeffs, phi_power, zeta_limit
from .dynamics import (
    CubicParam,
    Escaping,
    Preperiodic,
    Undecided,
    critical_orbit,
    is_preperiodic_exact,
)
from .equidist import (
    Window,
    bifurcation_density,
    compare_measures,
    export,
    preperiodic_params,
    render_density_figure,
)
from .errors import (
    BudgetExceededError,
    CommonComponentError,
    CubicDynError,
    PersistentRelationError,
)
from .heights import canonical_height, critical_height, green_arch, green_nonarch
from .laurent import (
    BadPole,
    GoodPole,
    NotPole,
    ParamCurve,
    check_divisor_growth,
    classify_curve_puncture,
    divisor_Dn,
)
from .polynomials import poly_to_lines
from .special_curves import (
    RelationKind,
    check_point_on_special_curve,
    pcf_candidates,
    relation_poly,
)
from .util import format_rational, parse_rational

EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_NUMERIC = 4


@dataclasses.dataclass
class RunConfig:
    """Everything needed to reproduce a run; echoed into output headers."""

    command: str
    options: dict
    seed: int
    version: str = __version__

    def as_dict(self) -> dict:
        return {"command": self.command, "options": self.options,
                "seed": self.seed, "version": self.version}


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    options = {k: str(v) for k, v in sorted(vars(args).items())
               if k not in ("func", "command") and v is not None}
    return RunConfig(command=args.command, options=options,
                     seed=getattr(args, "seed", 0))


_KIND_RE = re.compile(r"^(I{1,3})\((\d+),(\d+)\)$")


def parse_kind(text: str) -> RelationKind:
    m = _KIND_RE.match(text.strip())
    if not m:
        raise ValueError(f"relation spec {text!r}; expected e.g. 'I(2,1)'")
    return RelationKind(m.group(1), int(m.group(2)), int(m.group(3)))


def _sign(text: str) -> int:
    if text in ("+", "+1", "plus"):
        return 1
    if text in ("-", "-1", "minus"):
        return -1
    raise ValueError(f"sign must be + or -, got {text!r}")


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def cmd_orbit(args) -> int:
    p = CubicParam(parse_rational(args.a), parse_rational(args.b))
    sign = _sign(args.sign)
    orbit = critical_orbit(p, sign, args.steps)
    print(f"# critical orbit of {'+' if sign > 0 else '-'}a for "
          f"a={args.a} b={args.b}")
    print("n\tc_n")
    for k, c in enumerate(orbit):
        print(f"{k}\t{format_rational(c)}")
    verdict = is_preperiodic_exact(p, p.critical_point(sign),
                                   max(args.steps, 64))
    if isinstance(verdict, Preperiodic):
        t = verdict.tail
        print(f"# preperiodic: m={t.preperiod} p={t.period}")
    elif isinstance(verdict, Escaping):
        print(f"# escaping at step {verdict.step} (bound {verdict.bound:.6g})")
    else:
        print(f"# undecided: {verdict.reason}")
    return 0


def cmd_height(args) -> int:
    p = CubicParam(parse_rational(args.a), parse_rational(args.b))
    tol = args.tol
    if args.critical:
        h = critical_height(p, tol)
        print(f"critical_height = {h!r}  (error <= {tol!r})")
        return 0
    if args.z is None:
        raise ValueError("--z is required unless --critical is given")
    z = parse_rational(args.z)
    if args.place is not None:
        if args.place == "inf":
            g = green_arch(p, z, tol)
            print(f"G_inf({args.z}) = {g.value!r}  (error <= {g.error!r}, "
                  f"steps {g.steps})")
        else:
            g = green_nonarch(p, z, int(args.place))
            print(f"G_{args.place}({args.z}) = {g.value!r}  (exact: "
                  f"{g.log_multiple} * log {args.place})")
        return 0
    h = canonical_height(p, z, tol)
    print(f"canonical_height({args.z}) = {h!r}  (error <= {tol!r})")
    return 0


def cmd_curve(args) -> int:
    kind = RelationKind(args.kind, args.n, args.m)
    poly = relation_poly(kind)
    lines = poly_to_lines(poly)
    cfg = _config_from_args(args)
    if args.out:
        header, records = lines[0], lines[1:]
        body = [header, f"# config: {json.dumps(cfg.as_dict(), sort_keys=True)}"]
        body.extend(records)
        Path(args.out).write_text("\n".join(body) + "\n")
        print(f"wrote {args.out} ({len(records)} terms)")
    else:
        print(f"# relation {kind}: {poly}")
        for line in lines:
            print(line)
    return 0


def cmd_pcf(args) -> int:
    if args.certify:
        a, b, N = args.certify
        p = CubicParam(parse_rational(a), parse_rational(b))
        res = check_point_on_special_curve(p, int(N))
        if res.relation is not None:
            print(f"relation: {res.relation}")
        else:
            print("relation: none")
        print(f"on line b=0: {'yes' if res.on_line_b0 else 'no'}")
        for sign in (+1, -1):
            v = is_preperiodic_exact(p, p.critical_point(sign), 500)
            tag = {"Preperiodic": "preperiodic", "Escaping": "escaping",
                   "Undecided": "undecided"}[type(v).__name__]
            print(f"critical point {'+' if sign > 0 else '-'}a: {tag}")
        return 0
    k1 = parse_kind(args.k1)
    k2 = parse_kind(args.k2)
    try:
        cands = pcf_candidates(k1, k2)
    except CommonComponentError as exc:
        print(f"common component: {exc}")
        return 0
    print(f"# {len(cands)} candidates from {k1} x {k2}")
    print("a\tb\tresid1\tresid2\tcertified\trational")
    for c in cands:
        rat = (f"({format_rational(c.rational[0])},"
               f"{format_rational(c.rational[1])})" if c.rational else "-")
        print(f"{c.a!r}\t{c.b!r}\t{c.residuals[0]:.3e}\t{c.residuals[1]:.3e}"
              f"\t{'yes' if c.certified else 'no'}\t{rat}")
    return 0


def cmd_laurent(args) -> int:
    curve = ParamCurve.from_file(args.curve)
    sign = _sign(args.sign)
    punctures = curve.punctures()
    if args.puncture is not None:
        want = args.puncture
        punctures = [p for p in punctures
                     if (p == "inf" and want == "inf")
                     or (p != "inf" and want != "inf"
                         and p == parse_rational(want))]
        if not punctures:
            raise ValueError(f"{want} is not a puncture of this curve")
    for t0 in punctures:
        cls = classify_curve_puncture(curve, t0, sign)
        name = type(cls).__name__
        print(f"puncture {t0}: {name}")
        if isinstance(cls, GoodPole):
            print(f"  onset n0={cls.onset} gamma_onset={cls.gamma_onset} "
                  f"gamma_max={cls.gamma_max}")
            print(f"  gammas: {list(cls.gammas)}")
        elif isinstance(cls, BadPole):
            print(f"  gamma_a={cls.gamma_a} horizon={cls.horizon}")
            print(f"  note: {cls.note}")
        elif isinstance(cls, NotPole):
            print(f"  gamma_max={cls.gamma_max}")
    if args.divisor_n is not None:
        d = divisor_Dn(curve, sign, args.divisor_n)
        print(f"D_{args.divisor_n} = {d} (degree {d.degree()})")
        if args.growth_i:
            ok = check_divisor_growth(curve, sign, args.divisor_n, args.growth_i)
            print(f"D_(n+i) = 3^i D_n for i={args.growth_i}: "
                  f"{'holds' if ok else 'FAILS'}")
    return 0


def cmd_boettcher(args) -> int:
    if args.zeta:
        curve = ParamCurve.from_file(args.zeta)
        t0 = "inf" if args.puncture == "inf" else parse_rational(args.puncture)
        rep = zeta_limit(curve, t0, args.n, args.deg_plus, args.deg_minus)
        print(f"zeta_(t0={args.puncture}, n={args.n}) = "
              f"{format_rational(rep.value)}")
        print(f"root of unity: {'yes' if rep.is_root_of_unity else 'undetermined'}"
              f" (order candidate: {rep.order_candidate})")
        print(f"| |zeta| - 1 | = {rep.abs_deviation!r}")
        return 0
    if args.power:
        pk = phi_power(args.power, args.order)
        print(f"# P_{args.power}(z), coefficients by z-degree")
        for d, c in enumerate(pk.poly_coeffs):
            print(f"z^{d}: {c}")
        print(f"# first tail coefficient alpha_({args.power},1) = {pk.tail[0]}")
        return 0
    exp = boettcher_coeffs(args.order)
    for line in exp.to_lines():
        print(line)
    return 0


def cmd_equidist(args) -> int:
    curve = ParamCurve.from_file(args.curve)
    sign = _sign(args.sign)
    window = Window(args.window[0], args.window[1], args.window[2],
                    args.window[3])
    cfg = _config_from_args(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    depths = []
    for spec in args.depths.split():
        n, m = spec.split(",")
        depths.append((int(n), int(m)))
    root_sets = []
    for (n, m) in depths:
        try:
            roots = preperiodic_params(curve, sign, n, m, window)
        except PersistentRelationError as exc:
            print(f"depth ({n},{m}): persistent relation: {exc}")
            continue
        root_sets.append(((n, m), roots))
        export(roots, outdir / f"roots_{n}_{m}.csv", "CSV", config=cfg.as_dict())
    if not root_sets:
        print("no non-degenerate depths; skipping density comparison")
        return 0
    grid = bifurcation_density(curve, sign, window, resolution=args.resolution,
                               tol=args.tol)
    export(grid, outdir / "grid.csv", "CSV", config=cfg.as_dict())
    tvs = []
    for (n, m), roots in root_sets:
        tv = compare_measures(roots, grid, partition=args.partition)
        tvs.append(tv)
        print(f"depth ({n},{m}): {len(roots.roots)} roots in window "
              f"(degree {roots.degree}), TV = {tv:.4f}")
    last_roots = root_sets[-1][1]
    export(grid, outdir / "density.svg", "SVG", config=cfg.as_dict(),
           overlay=last_roots)
    render_density_figure(grid, outdir / "density.png", overlay=last_roots,
                          title=f"bifurcation density (sign {args.sign})")
    if len(tvs) >= 2:
        mono = all(b <= a + args.noise for a, b in zip(tvs, tvs[1:]))
        print(f"TV non-increasing across depths (allowance {args.noise}): "
              f"{'yes' if mono else 'NO'}")
    print(f"outputs in {outdir}")
    return 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cubicdyn",
        description="Critical-orbit dynamics of z^3 - 3a^2 z + b: orbits, "
                    "heights, special curves, pole analysis, equidistribution.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="exact critical orbit at a parameter")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--sign", default="+")
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("height", help="canonical/critical heights, local Green values")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--z", default=None, help="rational point (canonical height)")
    p.add_argument("--critical", action="store_true")
    p.add_argument("--place", default=None, help="'inf' or a prime")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("curve", help="relation curve polynomial")
    p.add_argument("kind", choices=["I", "II", "III"])
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("pcf", help="PCF parameter search / certification")
    p.add_argument("--k1", default=None, help="e.g. I(2,1)")
    p.add_argument("--k2", default=None, help="e.g. II(2,1)")
    p.add_argument("--certify", nargs=3, metavar=("A", "B", "N"), default=None)
    p.set_defaults(func=cmd_pcf)

    p = sub.add_parser("laurent", help="puncture classification and divisors")
    p.add_argument("curve", help="curve definition file")
    p.add_argument("--sign", default="+")
    p.add_argument("--puncture", default=None)
    p.add_argument("--divisor-n", type=int, default=None)
    p.add_argument("--growth-i", type=int, default=None)
    p.set_defaults(func=cmd_laurent)

    p = sub.add_parser("boettcher", help="formal coordinate at infinity")
    p.add_argument("--order", type=int, default=8, help="expansion order N")
    p.add_argument("--power", type=int, default=None, help="expand Phi^k")
    p.add_argument("--zeta", default=None, help="curve file for the zeta limit")
    p.add_argument("--puncture", default=None)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--deg-plus", type=int, default=1)
    p.add_argument("--deg-minus", type=int, default=1)
    p.set_defaults(func=cmd_boettcher)

    p = sub.add_parser("equidist", help="preperiodic parameters vs bifurcation density")
    p.add_argument("curve", help="curve definition file")
    p.add_argument("--sign", default="+")
    p.add_argument("--depths", default="4,0 6,0", help="space-separated n,m pairs")
    p.add_argument("--window", type=float, nargs=4, default=[-2, 2, -2, 2],
                   metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    p.add_argument("--resolution", type=int, default=96)
    p.add_argument("--partition", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="equidist_out")
    p.set_defaults(func=cmd_equidist)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "pcf" and not args.certify and not (args.k1 and args.k2):
        ap.error("pcf requires --k1 and --k2, or --certify A B N")
    if args.command == "boettcher" and args.zeta and args.puncture is None:
        ap.error("--zeta requires --puncture")
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CubicDynError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
