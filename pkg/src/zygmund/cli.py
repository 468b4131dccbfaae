"""Command-line front end: ``zygmund generate | transform | estimate | verify``.

Every run is deterministic for a given command line.  Outputs go to
``--out`` (default: current directory); tables and summaries are printed
on stdout, diagnostics on stderr.  The exit code is 0 exactly when every
requested check passed and nothing failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from . import io
from .colombeau import verify_hom_identity, verify_inhom_identity
from .kernels import (
    InadmissibleScaling,
    bump_mollifier,
    check_admissible,
    check_moments,
    derivative_wavelet,
    make_scaling,
    measured_order,
    spectral_pair,
    wavelet_from_mollifier,
)
from .regularity import InfinitelyRegular, default_scales, estimate_exponent
from .signals import (
    GroundTruth,
    gen_brownian,
    gen_bump,
    gen_cantor_staircase,
    gen_cosines,
    gen_heaviside,
    gen_polynomial,
    gen_weierstrass,
)
from .transform import (
    calderon_nodes,
    calderon_reconstruct,
    cwt,
    fourier_multiplier,
    multiplier_field,
    smooth,
)

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

GENERATORS = ("cantor", "brownian", "weierstrass", "polynomial", "heaviside", "cosines", "bump")
SUITES = ("identities", "calderon", "admissible", "moments", "bridge", "multiplier")
VERIFY_SIGNALS = ("cantor", "bandlimited", "weierstrass", "brownian", "smooth")

DEFAULT_THRESHOLDS = {
    "inhom_identity_bandlimited": 1e-4,
    "inhom_identity": 1e-3,
    "hom_identity_alpha1": 1e-3,
    "hom_identity_alpha2": 1e-2,
    "calderon": 1e-3,
    "bridge": 1e-5,
    "multiplier": 1e-6,
    "mollifier_mass": 1e-10,
    "mollifier_moments": 1e-8,
    "wavelet_order": 1e-7,
}


def _floats(text: str) -> List[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _pair(text: str):
    lo, hi = _floats(text)
    return lo, hi


# parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--out", default=d("."), help="output directory")
    p.add_argument("--format", choices=io.FORMATS, default=d("csv"), help="format of data files")
    p.add_argument("--seed", type=int, default=d(0), help="random seed (unsigned 64-bit)")
    p.add_argument("--tolerance-overrides", default=d(None), metavar="FILE", help="JSON map of check name to threshold")
    p.add_argument("--manifest", action="store_true", default=d(False), help="write the resolved run config")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zygmund", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(container, name, help):
        p = container.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        return p

    gen = sub.add_parser("generate", help="synthesize a test signal")
    gsub = gen.add_subparsers(dest="generator", required=True)
    p = leaf(gsub, "cantor", "Lebesgue singular function of a self-similar Cantor set")
    p.add_argument("--pieces", type=int, default=2)
    p.add_argument("--ratio", type=float, default=1 / 3)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("-n", type=int, default=65536)
    p = leaf(gsub, "brownian", "Brownian path on [-k, k]")
    p.add_argument("-n", type=int, default=16384)
    p.add_argument("-k", type=float, default=1.0)
    p = leaf(gsub, "weierstrass", "Weierstrass function sum a^j cos(b^j pi x)")
    p.add_argument("--amp", type=float, default=0.5)
    p.add_argument("--freq", type=float, default=3.0)
    p.add_argument("--terms", type=int, default=40)
    p.add_argument("-n", type=int, default=65536)
    p = leaf(gsub, "polynomial", "polynomial with coefficients in increasing degree")
    p.add_argument("--coeffs", type=_floats, required=True)
    p.add_argument("--interval", type=_pair, default=(-1.0, 1.0))
    p.add_argument("-n", type=int, default=65536)
    p = leaf(gsub, "heaviside", "unit step at 0")
    p.add_argument("--interval", type=_pair, default=(-1.0, 1.0))
    p.add_argument("-n", type=int, default=16385)
    p = leaf(gsub, "cosines", "periodic sum of cosines on [0, 2 pi)")
    p.add_argument("--freqs", type=_floats, default=[1, 3, 7, 12, 20])
    p.add_argument("--amps", type=_floats, default=None)
    p.add_argument("-n", type=int, default=4096)
    p = leaf(gsub, "bump", "smooth compactly supported bump")
    p.add_argument("--interval", type=_pair, default=(-1.0, 1.0))
    p.add_argument("--radius", type=float, default=0.5)
    p.add_argument("-n", type=int, default=16384)

    tr = sub.add_parser("transform", help="wavelet, multiplier or smoothing transform of a signal file")
    tsub = tr.add_subparsers(dest="transform", required=True)
    for name, help in (("cwt", "wavelet transform over a scale ladder"), ("multiplier", "psi(tD) over a ladder")):
        p = leaf(tsub, name, help)
        p.add_argument("--input", required=True)
        p.add_argument("--scales", type=_floats, default=None, help="comma-separated; default: dyadic ladder")
        if name == "cwt":
            p.add_argument("--moment-order", type=int, default=0, help="mollifier moment order")
        else:
            p.add_argument("--a", type=float, default=0.25)
            p.add_argument("--b", type=float, default=4.0)
    p = leaf(tsub, "smooth", "mollify at one scale")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--moment-order", type=int, default=0)

    p = leaf(sub, "estimate", "fit the Zygmund exponent of a signal file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("wavelet", "multiplier"), default="wavelet")
    p.add_argument("--moment-order", type=int, default=0)
    p.add_argument("--window", type=_pair, default=None, help="r_min,r_max")
    p.add_argument("--scales", type=_floats, default=None)

    p = leaf(sub, "verify", "run a named verification suite")
    p.add_argument("suite", help="one of: " + ", ".join(SUITES))
    p.add_argument("--signal", choices=VERIFY_SIGNALS, default="bandlimited")
    p.add_argument("--scaling", default="pow:1")
    p.add_argument("-n", type=int, default=None)
    return parser


# helpers


@dataclass
class Row:
    name: str
    residual: float
    threshold: float
    passed: Optional[bool] = None

    def __post_init__(self):
        if self.passed is None:
            self.passed = bool(np.isfinite(self.residual) and self.residual <= self.threshold)


def _thresholds(args) -> Dict[str, float]:
    th = dict(DEFAULT_THRESHOLDS)
    if args.tolerance_overrides:
        with open(args.tolerance_overrides) as fh:
            extra = json.load(fh)
        unknown = set(extra) - set(th)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        th.update({k: float(v) for k, v in extra.items()})
    return th


def _out(args, name: str) -> str:
    return os.path.join(args.out, name)


def _manifest(args) -> None:
    if args.manifest:
        cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
        io.atomic_write(_out(args, "manifest.json"), io.to_json(cfg))


def _generate_signal(args):
    g = args.generator
    if g == "cantor":
        return gen_cantor_staircase(args.pieces, args.ratio, args.depth, args.n)
    if g == "brownian":
        return gen_brownian(args.n, args.k, args.seed)
    if g == "weierstrass":
        return gen_weierstrass(args.amp, args.freq, args.terms, args.n)
    if g == "polynomial":
        return gen_polynomial(args.coeffs, args.n, tuple(args.interval)), GroundTruth(float("inf"), "polynomial")
    if g == "heaviside":
        return gen_heaviside(args.n, tuple(args.interval)), GroundTruth(0.0, "jump discontinuity")
    if g == "cosines":
        return gen_cosines(args.freqs, args.amps, n=args.n), GroundTruth(float("inf"), "band-limited")
    if g == "bump":
        return gen_bump(args.n, tuple(args.interval), args.radius), GroundTruth(float("inf"), "smooth bump")
    raise ValueError(g)


# subcommands


def cmd_generate(args) -> int:
    sig, gt = _generate_signal(args)
    path = _out(args, f"{args.generator}.{args.format}")
    io.write_signal(sig, path, args.format)
    io.atomic_write(_out(args, f"{args.generator}.truth.json"), io.to_json(io.groundtruth_to_dict(gt)))
    _manifest(args)
    print(f"wrote {path} n={sig.n} exponent={gt.exponent:.17g}")
    return EXIT_OK


def cmd_transform(args) -> int:
    sig = io.read_signal(args.input)
    if args.transform == "smooth":
        out = smooth(sig, bump_mollifier(moment_order=args.moment_order), args.eps)
        path = _out(args, f"smooth.{args.format}")
        io.write_signal(out, path, args.format)
    else:
        scales = default_scales(sig) if args.scales is None else np.sort(args.scales)[::-1]
        if args.transform == "cwt":
            mu = wavelet_from_mollifier(bump_mollifier(moment_order=args.moment_order))
            fld = cwt(sig, mu, scales)
        else:
            fld = multiplier_field(sig, spectral_pair(args.a, args.b), scales)
        path = _out(args, f"{args.transform}.{args.format}")
        io.atomic_write(path, io.scalefield_to_text(fld, args.format))
    _manifest(args)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    sig = io.read_signal(args.input)
    if args.method == "wavelet":
        scales = default_scales(sig) if args.scales is None else np.sort(args.scales)[::-1]
        mu = wavelet_from_mollifier(bump_mollifier(moment_order=args.moment_order))
        fld = cwt(sig, mu, scales)
    else:
        pair = spectral_pair()
        floor = pair.b * sig.dx / np.pi
        scales = default_scales(sig) if args.scales is None else np.sort(args.scales)[::-1]
        fld = multiplier_field(sig, pair, scales[scales >= floor])
    rep = estimate_exponent(fld, None if args.window is None else tuple(args.window))
    io.atomic_write(_out(args, "report.json"), io.to_json(rep.to_dict()))
    if isinstance(rep, InfinitelyRegular):
        fit = np.zeros_like(fld.scales)
    else:
        fit = np.exp(rep.intercept) * fld.scales**rep.fitted_s
    io.atomic_write(
        _out(args, "scales.csv"),
        io.table_to_csv(["r", "sup", "fit"], np.column_stack([fld.scales, fld.sup_per_scale, fit])),
    )
    _manifest(args)
    lo, hi = rep.fit_window
    if isinstance(rep, InfinitelyRegular):
        print(f"s_hat=inf stderr=nan window=[{lo:.6g},{hi:.6g}] outcome=InfinitelyRegular")
    else:
        print(f"s_hat={rep.fitted_s:.6f} stderr={rep.slope_stderr:.6f} window=[{lo:.6g},{hi:.6g}]")
    return EXIT_OK


def _verify_signal(name: str, n: Optional[int], seed: int):
    if name == "cantor":
        return gen_cantor_staircase(2, 1 / 3, 20, n or 2**14)[0]
    if name == "bandlimited":
        return gen_cosines([1, 3, 7, 12, 20], [1, 0.5, 0.3, 0.2, 0.1], n=n or 4096)
    if name == "weierstrass":
        return gen_weierstrass(0.5, 3, 40, n or 2**16)[0]
    if name == "brownian":
        return gen_brownian(n or 2**14, 1.0, seed)[0]
    if name == "smooth":
        return gen_bump(n or 2**14, (-1.0, 1.0), 0.5)
    raise ValueError(name)


def _suite_identities(args, th) -> List[Row]:
    u = _verify_signal(args.signal, args.n, args.seed)
    chi = bump_mollifier()
    g = make_scaling("power", 1.0)
    eps = 2.0**-6
    norm = float(np.max(np.abs(u.samples)))
    key = "inhom_identity_bandlimited" if args.signal == "bandlimited" else "inhom_identity"
    rows = [Row(key, verify_inhom_identity(u, chi, g, eps, 400) / norm, th[key])]
    alpha = 2 if args.signal == "brownian" else 1
    key = f"hom_identity_alpha{alpha}"
    rows.append(Row(key, verify_hom_identity(u, chi, alpha, g, eps), th[key]))
    return rows


def _suite_calderon(args, th) -> List[Row]:
    u = _verify_signal(args.signal, args.n or 1024, args.seed)
    pair = spectral_pair(0.25, 4.0)
    rec = calderon_reconstruct(u, pair, calderon_nodes(u, pair, 200))
    err = np.max(np.abs(rec.samples - u.samples)) / np.max(np.abs(u.samples))
    return [Row("calderon", float(err), th["calderon"])]


def _suite_admissible(args, th) -> List[Row]:
    try:
        make_scaling(args.scaling)
        strict_ok = True
    except InadmissibleScaling:
        strict_ok = False
    cert = check_admissible(make_scaling(args.scaling, strict=False))
    return [
        Row("eps_gamma_bounded", cert.max_eps_gamma, float("nan"), cert.eps_gamma_bounded and strict_ok),
        Row("divergent", cert.gamma_small, float("nan"), cert.divergent),
        Row("doubling_bounded", cert.max_doubling_ratio, float("nan"), cert.doubling_bounded),
    ]


def _suite_moments(args, th) -> List[Row]:
    rows = []
    for N in (0, 1, 2, 3, 4):
        chi = bump_mollifier(moment_order=N)
        m = check_moments(chi, max(N, 1))
        rows.append(Row(f"mass_N{N}", abs(m[0] - 1.0), th["mollifier_mass"]))
        if N:
            rows.append(Row(f"moments_N{N}", float(np.max(np.abs(m[1 : N + 1]))), th["mollifier_moments"]))
        mu = wavelet_from_mollifier(chi)
        got, want = measured_order(mu, th["wavelet_order"]), measured_order(chi, th["wavelet_order"])
        rows.append(Row(f"wavelet_order_N{N}", float(abs(got - want)), 0.0))
    chi = bump_mollifier()
    for alpha in (1, 2, 3):
        k = derivative_wavelet(chi, alpha)
        got = measured_order(k, th["wavelet_order"])
        rows.append(Row(f"derivative_order_alpha{alpha}", float(abs(got - (alpha - 1))), 0.0))
    return rows


def _suite_bridge(args, th) -> List[Row]:
    u = _verify_signal("bandlimited", args.n, args.seed)
    chi = bump_mollifier()
    mu = wavelet_from_mollifier(chi)
    rows = []
    for eps in (0.5, 0.3, 0.2, 0.12, 0.08, 0.05):
        h = 1e-3 * eps
        lhs = -eps * (smooth(u, chi, eps + h).samples - smooth(u, chi, eps - h).samples) / (2 * h)
        rhs = cwt(u, mu, [eps]).values[:, 0]
        rows.append(Row(f"bridge_eps{eps:g}", float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs))), th["bridge"]))
    return rows


def _suite_multiplier(args, th) -> List[Row]:
    u = _verify_signal("bandlimited", args.n, args.seed)
    pair = spectral_pair(0.25, 4.0)
    rows = []
    for t in (0.1, 0.15, 0.25, 0.45, 0.8):
        a = fourier_multiplier(u, pair, t).samples
        b = cwt(u, pair.mu_kernel, [t]).values[:, 0]
        rows.append(Row(f"multiplier_t{t:g}", float(np.max(np.abs(a - b))), th["multiplier"]))
    return rows


SUITE_FUNCS: Dict[str, Callable] = {
    "identities": _suite_identities,
    "calderon": _suite_calderon,
    "admissible": _suite_admissible,
    "moments": _suite_moments,
    "bridge": _suite_bridge,
    "multiplier": _suite_multiplier,
}


def _rows_text(rows: List[Row], form: str) -> str:
    recs = [{"name": r.name, "residual": r.residual, "threshold": r.threshold, "status": "PASS" if r.passed else "FAIL"} for r in rows]
    if form == "json":
        return io.to_json(recs)
    if form == "ndjson":
        return "".join(json.dumps(io._plain(r), sort_keys=True) + "\n" for r in recs)
    lines = ["name,residual,threshold,status"]
    lines += [f"{r['name']},{io.fmt(r['residual'])},{io.fmt(r['threshold'])},{r['status']}" for r in recs]
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    if args.suite not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    rows = SUITE_FUNCS[args.suite](args, _thresholds(args))
    io.atomic_write(_out(args, f"verify_{args.suite}.{args.format}"), _rows_text(rows, args.format))
    _manifest(args)
    print(f"{'check':32s} {'residual':>12s} {'threshold':>12s}  status")
    for r in rows:
        print(f"{r.name:32s} {r.residual:12.4e} {r.threshold:12.4e}  {'PASS' if r.passed else 'FAIL'}")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


COMMANDS = {"generate": cmd_generate, "transform": cmd_transform, "estimate": cmd_estimate, "verify": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
