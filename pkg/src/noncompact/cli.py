"""``noncompact`` command line: run a verification suite and print a JSON report.

Every subcommand emits one report of schema ``v1``::

    {"schema": "v1", "command": ..., "params": {...},
     "claims": [{"id", "anchor", "expected", "computed", "tol", "pass"}, ...],
     "elapsed_ms": ...}

The exit status is 0 when every claim passes, 1 when some claim fails and 2
on bad parameters or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import coloring as col
from . import covering as cov
from . import reals
from . import scaling as sc
from . import superadditivity as sa
from .lorentz import DOUBLE_STAR, STAR, LorentzExponents, lorentz_maximal_norm, lorentz_norm, norm
from .measure import StepFunction, make_step, random_step, rearrange

SCHEMA = "v1"
EXACT_TOL = 1e-12
QUAD_TOL = 1e-9


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class Report:
    command: str
    params: dict
    claims: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    elapsed_ms: float | None = None

    def claim(self, cid: str, anchor: str, expected, computed, tol, ok: bool) -> bool:
        self.claims.append(
            {"id": cid, "anchor": anchor, "expected": expected, "computed": computed, "tol": tol, "pass": bool(ok)}
        )
        return ok

    def close(self, cid, anchor, expected, computed, tol) -> bool:
        return self.claim(cid, anchor, expected, computed, tol, reals.isclose(computed, expected, rel=tol))

    def at_most(self, cid, anchor, bound, computed, tol=0.0) -> bool:
        ok = float(computed) <= float(bound) * (1 + tol)
        return self.claim(cid, anchor, f"<= {_fmt(bound)}", computed, tol, ok)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.claims)

    def to_json(self) -> str:
        doc = {"schema": SCHEMA, "command": self.command, "params": self.params, "claims": self.claims}
        doc.update(self.extra)
        doc["elapsed_ms"] = self.elapsed_ms
        return json.dumps(_jsonable(doc), indent=2) + "\n"


def _fmt(x) -> str:
    return str(x) if isinstance(x, Fraction) else repr(float(x))


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _exponent(text: str):
    try:
        return reals.as_exponent(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exponent: {text!r}") from exc


# -- superadd ---------------------------------------------------------------


def cmd_superadd(args) -> Report:
    r, m, ratio = args.r, args.m, args.ratio
    try:
        kind = LorentzExponents(1, 1, args.kind).kind
        family = sa.build_family(r, m, ratio)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not args.gamma > 0:
        raise UsageError("gamma must be positive")
    rep = Report("superadd", {"r": r, "m": m, "ratio": ratio, "gamma": args.gamma, "kind": kind})
    tol = args.tol
    inv_r = reals.reciprocal(r)
    star_e = LorentzExponents.weak(r, STAR)
    dstar_e = LorentzExponents.weak(r, DOUBLE_STAR)
    for idx, u in enumerate(family.members, start=1):
        rep.close(f"unit_norm_star[{idx}]", "members have unit weak norm", 1.0, norm(u, star_e), tol)
        if r >= 1:
            rep.close(f"unit_norm_double_star[{idx}]", "members have unit maximal weak norm", 1.0, norm(u, dstar_e), tol)
        else:
            l1 = float(reals.power(family.total_space, inv_r - 1)) * float(u.integral_abs())
            rep.close(f"l1_identity[{idx}]", "maximal weak norm equals scaled L1 norm for r <= 1", l1, norm(u, dstar_e), tol)

    a, s = family.tail_sums(), family.support_measures
    tail_ok = all(a[j] <= 2 * s[j] for j in range(m))
    rep.claim("tail_sums", "a_{j-1} <= 2 s_j", "all", "all" if tail_ok else "violated", 0, tail_ok)
    exact = sa.exact_weak_sum_power(family)
    rep.claim("sum_power_exact", "||sum u_k||^r = max a_{j-1}/s_j <= 2", "<= 2", str(exact), 0, exact <= 2)
    star_sum, dstar_sum = sa.sum_norm_bounds(family, r)
    rep.at_most("sum_norm_star", "weak norm of the sum <= 2^{1/r}", reals.power(2, inv_r), star_sum, tol)
    if r > 1:
        rep.at_most("sum_norm_double_star", "maximal weak norm of the sum <= 4", 4, dstar_sum, tol)
    else:
        l1 = float(reals.power(family.total_space, inv_r - 1)) * float(family.sum().integral_abs())
        rep.close("sum_l1_identity", "maximal weak norm equals scaled L1 norm for r <= 1", l1, dstar_sum, tol)

    series = [float(c) for c in sa.constant_series(r, m, args.gamma, kind, ratio)]
    rep.extra["constant_series"] = series
    gamma = float(args.gamma)
    if kind == DOUBLE_STAR and r <= 1:
        # the norm is a multiple of the L1 norm, hence additive on disjoint sums
        bounds = [max(1.0, mm ** (1 - gamma)) for mm in range(1, m + 1)]
        ok = all(c <= b * (1 + tol) for c, b in zip(series, bounds))
        rep.claim("series_bounded", "superadditive regime: C_m <= max(1, m^{1-gamma})", "bounded", series[-1], tol, ok)
    else:
        bound = 2 ** float(inv_r) if kind == STAR else 4.0
        floor = m / bound**gamma
        rep.claim("series_divergent", "C_m >= m / B^gamma", f">= {floor!r}", series[-1], tol, series[-1] >= floor * (1 - tol))
        if gamma == 1 and r >= 1:
            inc = all(b > a for a, b in zip(series, series[1:]))
            rep.claim("series_increasing", "required constant grows without bound", "strictly increasing", inc, 0, inc)
    return rep


# -- cover ------------------------------------------------------------------


def _centers(text: str | None) -> list[cov.FiniteSeq]:
    if text is None:
        return [cov.FiniteSeq()]
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--centers is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise UsageError("--centers must be a JSON list")
    return [cov.FiniteSeq.from_json(c) for c in data]


def cmd_cover(args) -> Report:
    p = args.p
    if p < 1:
        raise UsageError("p must be at least 1")
    sigma, alpha = cov.sigma_lp(p), cov.alpha_lp(p)
    rep = Report("cover", {"p": p, "mode": args.mode, "rho": args.rho, "eps": args.eps, "seed": args.seed})
    if args.mode == "upper":
        rho = _need(args.rho, "--rho")
        if rho <= sigma / 2:
            raise UsageError(f"upper mode needs rho > sigma/2 = {sigma / 2!r}")
        net = cov.build_constant_net(sigma, rho)
        pts = cov.sample_unit_ball(p, args.samples, args.seed)
        failures = 0
        for y in pts:
            try:
                k = cov.locate(y, p, net)
            except RuntimeError:
                failures += 1
                continue
            if not y.distance_inf(net.centers[k + net.m]) < rho:
                failures += 1
        m_min = net.m == 1 or (1 + 1 / (net.m - 1)) * sigma / 2 >= rho
        rep.claim("net_m_minimal", "smallest m with (1 + 1/m) sigma/2 < rho", net.m, net.m, 0, m_min)
        rep.claim("net_size", "net of 2m + 1 constant centers", 2 * net.m + 1, len(net), 0, len(net) == 2 * net.m + 1)
        gap = net.level(1) - net.level(0)
        rep.claim("lambda_spacing", "consecutive levels closer than 2 rho - sigma", f"< {2 * rho - sigma!r}", gap, 0, gap < 2 * rho - sigma)
        rep.claim("samples_covered", "every sampled ball point is located", len(pts), len(pts) - failures, 0, failures == 0)
        rep.extra["net"] = {"m": net.m, "levels": list(net.levels)}
    elif args.mode == "lower":
        rho = _need(args.rho, "--rho")
        if not rho < alpha:
            raise UsageError(f"lower mode needs rho < 2^(-1/p) = {alpha!r}")
        centers = _centers(args.centers)
        w = cov.refute_radius(p, centers, rho)
        nearest = min(w.distances) if w.distances else math.inf
        rep.claim("witness_uncovered", "some w_ij lies at distance >= rho from every center", f">= {rho!r}", nearest, 0, nearest >= rho)
        rep.claim(
            "witness_in_ball", "||w_ij||_p = 1", 1.0, w.sequence.lp_norm(p), args.tol, reals.isclose(w.sequence.lp_norm(p), 1.0, rel=args.tol)
        )
        rep.extra["witness"] = {"i": w.i, "j": w.j, "sequence": w.sequence.to_json(), "ell": w.ell, "pairs_scanned": w.pairs_scanned}
    else:
        eps = args.eps
        if not eps > 0:
            raise UsageError("eps must be positive")
        br = cov.alpha_bracket(p, eps, args.seed, args.samples)
        rep.claim("bracket_contains_alpha", "alpha = 2^{-1/p}", alpha, [br.lower, br.upper], eps, br.contains(alpha))
        refuted = all(min(w.distances, default=math.inf) >= br.lower for w in br.witnesses)
        rep.claim("lower_witnesses", "every adversarial cover of radius alpha - eps is refuted", len(br.witnesses), refuted, 0, refuted)
        rep.claim("upper_samples", "sampled ball points covered at the upper radius", args.samples, br.samples_covered, 0,
                  br.samples_covered >= args.samples)
        rep.extra["bracket"] = {"lower": br.lower, "upper": br.upper, "net_size": br.net_size}
    return rep


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required in this mode")
    return value


# -- coloring ---------------------------------------------------------------

COLORING_MODES = ("construct", "verify", "exhaustive", "certify")


def cmd_coloring(args) -> Report:
    modes = [s.strip() for s in args.mode.split(",") if s.strip()]
    bad = [s for s in modes if s not in COLORING_MODES]
    if bad or not modes:
        raise UsageError(f"--mode takes a comma list from {COLORING_MODES}, got {args.mode!r}")
    if args.m is not None and args.side is not None:
        raise UsageError("give --m or --side, not both")
    if args.m is not None and args.m < 1:
        raise UsageError("m must be positive")
    if args.side is not None and args.side < 1:
        raise UsageError("side must be positive")
    ell = 2**args.m if args.m is not None else (args.side + 1 if args.side is not None else None)
    rep = Report("coloring", {"m": args.m, "side": args.side, "mode": modes, "cap": args.cap})

    c = None
    if args.input:
        try:
            c = col.TriangleColoring.from_text(Path(args.input).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read coloring: {exc}") from exc
    if "construct" in modes:
        if args.m is None:
            raise UsageError("construct needs --m")
        c = col.color_recursive(args.m)
        rep.claim("colors_used", "a new color for each square: m colors", args.m, c.K, 0, c.K == args.m)
        if args.out:
            _write(args.out, c.to_text())
    if "verify" in modes or "certify" in modes:
        if c is None:
            raise UsageError("verify/certify need construct or --input")
    if "verify" in modes:
        v = col.verify_coloring(c)
        rep.claim("valid", "row t and column t share no color", True, v.ok, 0, v.ok)
        if not v.ok:
            rep.extra["violation"] = list(v.violation)
    if "certify" in modes:
        try:
            cert = col.certify_lower_bound(c)
        except col.CertificateError as exc:
            rep.claim("row_sets_distinct", "row color sets are pairwise distinct", True, False, 0, False)
            rep.extra["certificate_failure"] = {"rows": list(exc.rows), "path": exc.path}
        except col.ColoringError as exc:
            raise UsageError(str(exc)) from exc
        else:
            rep.claim("row_sets_distinct", "row color sets are pairwise distinct nonempty", c.ell - 1, len(set(cert.row_sets)), 0, True)
            rep.claim("bound", "2^K - 1 >= ell - 1", f"<= {c.K}", cert.bound, 0, cert.bound <= c.K)
            rep.extra["certificate"] = {"bound": cert.bound, "colors_used": cert.colors_used, "tight": cert.tight}
    if "exhaustive" in modes:
        if ell is None:
            raise UsageError("exhaustive needs --m or --side")
        try:
            kmin = col.min_colors_exhaustive(ell, args.cap)
        except col.CapExceededError as exc:
            raise UsageError(str(exc)) from exc
        bound = col.log2_bound(ell)
        rep.claim("exhaustive_min", "minimum colors vs ceil(log2 ell)", bound, kmin, 0, kmin >= bound)
        rep.extra["min_colors"] = kmin
    return rep


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


# -- figure2 ----------------------------------------------------------------


def figure2_rows(r, m: int, ratio=Fraction(1, 2)) -> list[tuple[str, Fraction, float]]:
    """Staircase of ``(sum u_k)*`` and the envelope corners ``(a_{j-1}, s_j^{-1/r})``."""
    family = sa.build_family(r, m, ratio)
    prof = rearrange(family.sum())
    rows = [("staircase", t, float(prof.value(t))) for t in prof.breakpoints]
    a, s = family.tail_sums(), family.support_measures
    inv_r = reals.reciprocal(r)
    rows += [("envelope", a[j], float(reals.power(s[j], -inv_r))) for j in range(m)]
    return rows


def cmd_figure2(args) -> Report:
    r, m, ratio = args.r, args.m, args.ratio
    try:
        rows = figure2_rows(r, m, ratio)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = Report("figure2", {"r": r, "m": m, "ratio": ratio, "out": args.out})
    family = sa.build_family(r, m, ratio)
    prof = rearrange(family.sum())
    # each envelope corner sits on the staircase: u* is s_j^{-1/r} just left of a_{j-1}
    on_curve = all(
        reals.isclose(prof.value(t - Fraction(1, 10**30)), v, rel=args.tol) for name, t, v in rows if name == "envelope"
    )
    rep.claim("envelope_on_staircase", "u*(t) >= s_j^{-1/r} for t < a_{j-1}", True, on_curve, args.tol, on_curve)
    rep.claim("row_count", "m + 1 staircase points and m envelope points", 2 * m + 1, len(rows), 0, len(rows) == 2 * m + 1)
    try:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["series", "t", "value"])
            for name, t, v in rows:
                w.writerow([name, repr(float(t)), repr(v)])
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    return rep


# -- norms ------------------------------------------------------------------


def cmd_norms(args) -> Report:
    try:
        u = StepFunction.from_json(json.loads(args.function))
    except (json.JSONDecodeError, ValueError, TypeError, AttributeError) as exc:
        raise UsageError(f"bad --function: {exc}") from exc
    try:
        e = LorentzExponents(args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = Report("norms", {"function": u.to_json(), "p": e.p, "q": e.q})
    star = lorentz_norm(u, e)
    dstar = lorentz_maximal_norm(u, LorentzExponents(e.p, e.q, DOUBLE_STAR))
    tol = args.tol if reals.is_inf(e.q) else max(args.tol, QUAD_TOL)
    rep.extra["norms"] = {"star": star, "double_star": dstar}
    rep.at_most("star_le_double_star", "u* <= u** pointwise", dstar, star, tol)
    if e.p > 1 and not reals.is_inf(e.p):
        # Hardy: the maximal norm is at most p' times the plain one
        pp = e.p / (e.p - 1)
        rep.at_most("hardy", "||u**|| <= p' ||u*||", float(pp) * float(star), dstar, tol)
    return rep


# -- scaling ----------------------------------------------------------------


def cmd_scaling(args) -> Report:
    try:
        params = sc.SobolevParams(args.n, args.k, args.p, args.kappa)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if params.kappa < 1:
        raise UsageError("kappa must be at least 1")
    rep = Report("scaling", {"n": params.n, "k": params.k, "p": params.p, "kappa": params.kappa,
                             "trials": args.trials, "seed": args.seed, "norm_i": args.norm_i})
    tol = args.tol
    exps = [(params.limiting, Fraction(1))]
    if params.k * params.p < params.n:
        ps = sc.p_star(params)
        rel = Fraction(-params.n) / ps == params.k - Fraction(params.n) / params.p
        rep.claim("p_star_relation", "-n/p* = k - n/p", str(params.k - Fraction(params.n) / params.p),
                  str(Fraction(-params.n) / ps), 0, rel)
        exps.insert(0, (ps, reals.INF))
    rng = random.Random(args.seed)
    shrink = params.kappa**params.n
    bp_ok, worst, dbl_worst = True, 0.0, 0.0
    for _ in range(args.trials):
        u = random_step(rng)
        if u.is_zero():
            continue
        du = sc.dilate(u, params)
        bp_ok &= rearrange(du).breakpoints == tuple(b / shrink for b in rearrange(u).breakpoints)
        for p, q in exps:
            e = LorentzExponents(p, q)
            ratio = float(lorentz_norm(du, e)) / float(lorentz_norm(u, e))
            worst = max(worst, abs(ratio / sc.dilation_ratio(params, p) - 1))
        # room for the shifted copy; L^{p,1} norms do not see |Omega|
        half = make_step(u.pieces, 2 * u.total_space)
        e = LorentzExponents(params.limiting, 1)
        ratio = float(lorentz_norm(sc.double_disjoint(half), e)) / float(lorentz_norm(half, e))
        dbl_worst = max(dbl_worst, abs(ratio / sc.doubling_ratio(params) - 1))
    rep.claim("dilation_breakpoints", "(u_kappa)* breakpoints are those of u* over kappa^n", True, bp_ok, 0, bp_ok)
    rep.claim("dilation_norms", "||u_kappa|| = kappa^{-n/p} ||u||", 0.0, worst, tol, worst <= tol)
    rep.claim("doubling_norms", "doubling multiplies the L^{n/k,1} norm by 2^{k/n}", 0.0, dbl_worst, tol, dbl_worst <= tol)
    sigma, alpha = sc.span_and_alpha(params, args.norm_i)
    rep.close("span", "sigma = 2^{1-k/n} ||I||", 2 ** (1 - params.k / params.n) * args.norm_i, sigma, tol)
    rep.claim("alpha_gap", "alpha = sigma/2 < ||I||", f"< {args.norm_i!r}", alpha, tol, alpha < args.norm_i)
    neg = 0
    for _ in range(args.trials):
        a, b = rng.uniform(0, 5), rng.uniform(0, 5)
        if sc.elementary_inequality_check(a, b, params) < -1e-12 * (a + b):
            neg += 1
    rep.claim("elementary_inequality", "a + b <= 2^{1-k/n} (a^{n/k} + b^{n/k})^{k/n}", 0, neg, 0, neg == 0)
    rep.extra["span_alpha"] = [sigma, alpha]
    return rep


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noncompact", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the JSON report here instead of standard output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=EXACT_TOL, help="relative tolerance for real-valued claims")
    common.add_argument("--no-timing", action="store_true", help="report elapsed_ms as null, for byte-stable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("superadd", parents=[common], help="disjoint superadditivity counterexamples")
    p.add_argument("--r", type=_exponent, default=Fraction(2))
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--ratio", type=_rational, default=Fraction(1, 2))
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--kind", default=STAR, choices=["star", "double-star", "double_star"])
    p.set_defaults(func=cmd_superadd)

    p = sub.add_parser("cover", parents=[common], help="covering nets for l^p -> l^inf")
    p.add_argument("--p", type=_exponent, default=Fraction(2))
    p.add_argument("--mode", choices=["upper", "lower", "bracket"], default="bracket")
    p.add_argument("--rho", type=float)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--centers", help="JSON list of centers for lower mode; default one zero center")
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("coloring", parents=[common], help="triangle coloring")
    p.add_argument("--m", type=int)
    p.add_argument("--side", type=int, help="ell - 1")
    p.add_argument("--mode", default="construct,verify,certify", help=f"comma list from {','.join(COLORING_MODES)}")
    p.add_argument("--cap", type=int, default=8)
    p.add_argument("--out", help="write the coloring grid here ('-' for standard output)")
    p.add_argument("--input", help="read a coloring grid to verify or certify")
    p.set_defaults(func=cmd_coloring)

    p = sub.add_parser("figure2", parents=[common], help="CSV of the rearranged sum and its envelope")
    p.add_argument("--r", type=_exponent, default=Fraction(2))
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--ratio", type=_rational, default=Fraction(1, 2))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("norms", parents=[common], help="Lorentz norms of a step function")
    p.add_argument("--function", required=True, help='JSON like {"pieces": [[2, "1/4"], [1, "1/2"]], "total_space": "1"}')
    p.add_argument("--p", type=_exponent, default=Fraction(2))
    p.add_argument("--q", type=_exponent, default=reals.INF)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("scaling", parents=[common], help="dilation and doubling identities")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--p", type=_rational, default=Fraction(2))
    p.add_argument("--kappa", type=_rational, default=Fraction(2))
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--norm-i", type=float, default=1.0)
    p.set_defaults(func=cmd_scaling)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        reals.tier()
        rep = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"noncompact {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if not args.no_timing:
        rep.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
    text = rep.to_json()
    if args.report:
        try:
            Path(args.report).write_text(text)
        except OSError as exc:
            print(f"noncompact: cannot write report: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
