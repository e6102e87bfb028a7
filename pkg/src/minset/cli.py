"""Command-line entry point ``minset``.

Exit codes: 0 success / certified, 2 usage error, 3 valid but not
certified, 4 numeric guard tripped.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import constants as K
from . import estimators as E
from . import potential as P
from .errors import GuardError
from .koch import DEFAULT_SIDES, contraction, koch_curve, pi_theta
from .report import (
    CurveFileError,
    curve_to_dict,
    dumps,
    new_report,
    read_curve,
    to_jsonable,
    to_svg,
    write_curve,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CERTIFIED = 3
EXIT_GUARD = 4

HOLDER_EXHAUSTIVE_MAX = 20000
DEFAULT_SAMPLE_COUNT = 200_000


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def _certificate_dict(cert: K.Certificate, rigor: str = "analytic") -> dict:
    d = to_jsonable(cert)
    d["rigor"] = rigor
    return d


def _emit(report: dict, args) -> None:
    if getattr(args, "json_out", None):
        Path(args.json_out).write_text(dumps(report), encoding="utf-8")


def _load_curve(path: str):
    raw = Path(path).read_bytes() if Path(path).exists() else b""
    curve, meta = read_curve(path)
    return curve, meta, raw


def _sample_mode(args) -> Optional[E.Sampled]:
    if args.mode == "sampled":
        return E.Sampled(args.seed, args.count)
    return None


def _parse_floats(text: Optional[str]):
    if text is None:
        return None
    return [float(x) for x in text.split(",") if x.strip()]


def _parse_distances(text: Optional[str]):
    """Either a comma list of distances or 'a:b' meaning 2^-a, ..., 2^-b."""
    if text is None:
        return None
    if ":" in text:
        a, b = (int(x) for x in text.split(":"))
        return P.log_distances(a, b)
    return np.array(_parse_floats(text))


def _fmt6(x: float) -> str:
    return format(x, ".6g")


def _arg_echo(args, drop=("func", "json_out", "svg_out", "report_out")) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in drop}


# ---------------------------------------------------------------- commands


def threshold_rows() -> list[dict]:
    theta0, theta1 = K.theta_crossovers()
    rows = [
        ("c_star", "1/sin((sqrt(17)-1)pi/8)", K.c_star(), None),
        ("theta_tilde", "largest certified Koch angle", K.theta_tilde(), K.ROOT_XTOL),
        ("theta0", "small-angle term meets 1/(4cos^2)", theta0, K.CROSSOVER_XTOL),
        ("theta1", "small-angle term vanishes", theta1, K.CROSSOVER_XTOL),
        ("theta_dim", "arccos(2^(-1/10))", K.theta_dim_threshold(), None),
        ("pi_over_8", "pi/8", math.pi / 8, None),
        ("dim_bound", "1 + ((K-1)/(K+1))^2 at K=2", K.quasicircle_dim_bound(2.0), None),
    ]
    return [
        {"name": n, "description": d, "value": v, "display": _fmt6(v), "tolerance": tol}
        for n, d, v, tol in rows
    ]


def cmd_thresholds(args) -> int:
    report = new_report("thresholds", _arg_echo(args), None)
    report["thresholds"] = threshold_rows()
    width = max(len(r["name"]) for r in report["thresholds"])
    for r in report["thresholds"]:
        print(f"{r['name']:<{width}}  {r['display']:>10}  {r['description']}")
    _emit(report, args)
    return EXIT_OK


def cmd_certify(args) -> int:
    explicit = [args.A, args.B]
    raw = b""
    if args.theta is not None:
        if args.curve or any(v is not None for v in explicit) or args.gamma is not None:
            raise UsageError("--theta cannot be combined with --A/--B/--gamma/--curve")
        cert = K.certify_koch(args.theta)
        rigor = "analytic"
        extra = {}
    elif args.curve:
        if any(v is not None for v in explicit):
            raise UsageError("--curve cannot be combined with --A/--B")
        if args.gamma is None:
            raise UsageError("--curve needs --gamma")
        curve, _, raw = _load_curve(args.curve)
        sample = None if len(curve) <= HOLDER_EXHAUSTIVE_MAX else E.Sampled(args.seed, DEFAULT_SAMPLE_COUNT)
        est = E.empirical_holder(curve, args.gamma, sample)
        cert = K.certify(K.BiHolderBounds(est.ratio_min, est.ratio_max, args.gamma))
        rigor = "NON-RIGOROUS"
        extra = {"estimates": [{"level": None, "holder": to_jsonable(est)}]}
    elif all(v is not None for v in explicit) and args.gamma is not None:
        cert = K.certify(K.BiHolderBounds(args.A, args.B, args.gamma))
        rigor = "analytic"
        extra = {}
    else:
        raise UsageError("give --theta, or --A --B --gamma, or --curve with --gamma")

    report = new_report("certify", _arg_echo(args), args.seed, raw)
    report["certificate"] = _certificate_dict(cert, rigor)
    report.update(extra)
    tag = " (NON-RIGOROUS: empirical bounds)" if rigor != "analytic" else ""
    print(f"c = {cert.ahlfors_c:.6g}  alpha = {cert.ls_alpha:.6g}  c* = {cert.threshold_c_star:.6g}")
    print(f"verdict: {cert.verdict.value}{tag}")
    _emit(report, args)
    return EXIT_OK if cert.certified else EXIT_NOT_CERTIFIED


def cmd_sweep(args) -> int:
    thetas = _parse_floats(args.thetas) or list(np.linspace(args.start, args.stop, args.num))
    certs = [K.certify_koch(th) for th in thetas]
    report = new_report("sweep", _arg_echo(args), None)
    report["sweep"] = [_certificate_dict(c) for c in certs]
    print(f"{'theta':>12} {'c':>10} {'alpha':>10}  verdict")
    for c in certs:
        print(f"{c.theta:>12.6g} {c.ahlfors_c:>10.6g} {c.ls_alpha:>10.6g}  {c.verdict.value}")
    _emit(report, args)
    return EXIT_OK


def _koch_source(theta, level, sides):
    if sides is None:
        return koch_curve(theta, level)
    return pi_theta(theta, sides, level)


def cmd_koch(args) -> int:
    curve = _koch_source(args.theta, args.level, args.sides)
    meta = {"theta": repr(args.theta), "level": str(args.level), "generator": "minset koch"}
    if args.sides is not None:
        meta["sides"] = str(args.sides)
    try:
        if args.json_out:
            write_curve(curve, args.json_out, meta)
        if args.svg_out:
            width = contraction(args.theta) ** args.level / 2
            Path(args.svg_out).write_text(to_svg(curve, width), encoding="utf-8")
        if args.report_out:
            report = new_report("koch", _arg_echo(args), None)
            report["curve"] = curve_to_dict(curve, meta)
            Path(args.report_out).write_text(dumps(report), encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}") from exc
    print(f"{len(curve)} points, closed={curve.closed}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    if (args.theta is None) == (args.curve is None):
        raise UsageError("give exactly one of --theta or --curve")
    raw = b""
    if args.theta is not None:
        curve = _koch_source(args.theta, args.level, args.sides)
        gamma = K.gamma_of(args.theta)
    else:
        curve, _, raw = _load_curve(args.curve)
        if args.gamma is None:
            raise UsageError("--curve needs --gamma")
        gamma = args.gamma
    sample = _sample_mode(args)
    row: dict = {"level": args.level if args.theta is not None else None}
    if args.what in ("holder", "both"):
        row["holder"] = to_jsonable(E.empirical_holder(curve, gamma, sample))
    if args.what in ("ahlfors", "both"):
        row["ahlfors"] = to_jsonable(E.empirical_ahlfors(curve, args.delta, sample))

    report = new_report("estimate", _arg_echo(args), args.seed, raw)
    report["estimates"] = [row]
    if args.theta is not None:
        b = K.koch_bounds(args.theta)
        report["analytic"] = {"A": b.A, "B": b.B, "gamma": b.gamma, "ahlfors_c": K.ahlfors_constant(b)}
        print(f"analytic: A = {b.A:.6g}  B = {b.B:.6g}  c = {K.ahlfors_constant(b):.6g}")
    if "holder" in row:
        h = row["holder"]
        print(f"holder:   ratio in [{h['ratio_min']:.6g}, {h['ratio_max']:.6g}] over {h['pair_count']} pairs")
    if "ahlfors" in row:
        a = row["ahlfors"]
        print(f"ahlfors:  c_hat = {a['c_hat']:.6g} (lower estimate, delta = {a['delta_used']:.6g})")
    _emit(report, args)
    return EXIT_OK


def _ls_setup(args):
    """Curve, Leja size, distances and default base points for each source."""
    raw = b""
    if args.oracle == "circle":
        curve, n, dist, near = P.circle_curve(512), 128, P.log_distances(3, 8), [0.0, 0.25, 0.5, 0.75]
    elif args.oracle == "segment":
        curve, n, dist, near = P.segment_curve(8193), 2048, P.log_distances(2, 7), None
    elif args.theta is not None:
        curve = pi_theta(args.theta, args.sides or DEFAULT_SIDES, args.level)
        n, dist, near = 1024, P.log_distances(1, 6), list(np.arange(24) / 24 + 1 / 48)
    else:
        curve, _, raw = _load_curve(args.curve)
        n, dist, near = min(256, len(curve)), P.log_distances(1, 6), list(np.arange(16) / 16)
    return curve, n, dist, near, raw


def cmd_ls(args) -> int:
    sources = sum(x is not None for x in (args.theta, args.curve, args.oracle))
    if sources != 1:
        raise UsageError("give exactly one of --theta, --curve, --oracle")
    curve, n, dist, near, raw = _ls_setup(args)
    n = args.leja_n or n
    dist = _parse_distances(args.distances) if args.distances else dist
    leja = P.leja_points(curve.z, n)
    bases = _parse_floats(args.bases)
    if bases is None:
        if near is None:  # segment: both ends and the midpoint
            bases = [0.0, 0.5, 1.0]
        else:
            bases = [P.mid_gap_t(curve, leja, t) for t in near]
    est = P.ls_exponent_estimate(curve, leja, bases, dist)

    section = {
        "source": args.oracle or ("pi_theta" if args.theta is not None else "curve"),
        "leja_n": n,
        "candidates": len(curve),
        "noise_floor": P.NOISE_FLOOR,
        "distances": dist,
        "exponent": est.exponent,
        "fits": [to_jsonable(f) for f in est.fits],
        "aborted": [{"base_t": t, "reason": msg} for t, msg in est.aborted],
    }
    if args.oracle:
        exact = P.green_disk(2.0) if args.oracle == "circle" else float(P.green_segment(2.0))
        section["v_hat_at_2"] = {"v_hat": P.v_hat(2.0, leja), "exact": exact}
    report = new_report("ls", _arg_echo(args), args.seed, raw)
    report["ls"] = section
    for f in est.fits:
        print(f"t = {f.base_t:<10.6g} slope = {f.slope:.4f}  r2 = {f.r_squared:.4f}")
    for t, msg in est.aborted:
        print(f"t = {t:<10.6g} aborted: {msg}")
    print(f"exponent estimate (diagnostic): {est.exponent:.4f}")
    _emit(report, args)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minset", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--json-out", help="write the JSON report here")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="seed for all randomness")

    p = sub.add_parser("thresholds", help="print the fixed thresholds")
    common(p, seed=False)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("certify", help="decide the minimum-set criterion")
    p.add_argument("--theta", type=float)
    p.add_argument("--A", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--curve", help="curve file; bounds are estimated empirically")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="certificates over a grid of Koch angles")
    p.add_argument("--start", type=float, default=0.001)
    p.add_argument("--stop", type=float, default=0.01)
    p.add_argument("--num", type=int, default=10)
    p.add_argument("--thetas", help="comma-separated angles (overrides the grid)")
    common(p, seed=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("koch", help="emit Koch nodes or the closed Koch polygon")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--sides", type=int, help="build the closed polygon with this many sides")
    p.add_argument("--svg-out")
    p.add_argument("--json-out", help="write the curve file here")
    p.add_argument("--report-out", help="write a JSON report embedding the curve")
    p.set_defaults(func=cmd_koch)

    p = sub.add_parser("estimate", help="empirical Hölder and three-point constants")
    p.add_argument("--theta", type=float)
    p.add_argument("--curve")
    p.add_argument("--gamma", type=float, help="Hölder exponent for curve files")
    p.add_argument("--level", type=int, default=10)
    p.add_argument("--sides", type=int)
    p.add_argument("--what", choices=["holder", "ahlfors", "both"], default="both")
    p.add_argument("--delta", type=float)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--count", type=int, default=DEFAULT_SAMPLE_COUNT)
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("ls", help="fit the Green-function decay exponent")
    p.add_argument("--theta", type=float)
    p.add_argument("--curve")
    p.add_argument("--oracle", choices=["circle", "segment"])
    p.add_argument("--sides", type=int)
    p.add_argument("--level", type=int, default=8)
    p.add_argument("--leja-n", type=int)
    p.add_argument("--bases", help="comma-separated base parameters t")
    p.add_argument("--distances", help="comma list, or a:b for 2^-a ... 2^-b")
    common(p)
    p.set_defaults(func=cmd_ls)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CurveFileError) as exc:
        print(f"minset: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardError as exc:
        print(f"minset: numeric guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"minset: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
