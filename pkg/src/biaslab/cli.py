"""Command-line driver.

Verbs: bias, rank, tensor, dist, verify <suite>, gen, bounds.
Global flags: --seed, --budget, --precision-bits, --format, --out.
Exit codes: 0 pass, 1 safe-variant failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .bias import poly_bias, poly_bias_dist
from .dist import (
    Distribution,
    affine_mass,
    convolve,
    deconvolve_u,
    mixing_check,
    mixing_m,
)
from .errors import BiaslabError
from .fpcore import FieldCtx, interval_json
from .generate import (
    gen_alphabet,
    gen_distribution,
    gen_polynomial,
    gen_tensor,
)
from .poly import Polynomial, linear_rank, quadratic_rank
from .report import emit, render
from .suites import SUITES, SuiteSpec, run_suite
from .tensor import (
    Tensor,
    analytic_rank,
    disjoint_pr,
    essential_pr,
    partition_rank,
    surjective_on,
    tensor_rank,
)
from . import bounds as bd


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _alphabet(arg: str) -> list[int]:
    return [int(x) for x in arg.split(",") if x != ""]


def _write(args, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_bias(args) -> int:
    poly = Polynomial.from_json(_load_json(args.poly))
    if args.dist:
        d = Distribution.from_json(_load_json(args.dist))
        value = poly_bias_dist(poly, d, args.t, args.budget)
    else:
        value = poly_bias(poly, _alphabet(args.alphabet), args.t, args.budget)
    _write(args, value.to_json(args.precision_bits))
    return 0


def cmd_rank(args) -> int:
    poly = Polynomial.from_json(_load_json(args.poly))
    out: dict = {"degree": poly.degree()}
    if poly.degree() <= 1:
        out["linear_rank"] = linear_rank(poly)
    if poly.degree() <= 2 and poly.ctx.p != 2:
        out["quadratic_rank"] = quadratic_rank(poly)
    _write(args, out)
    return 0


def cmd_tensor(args) -> int:
    t = Tensor.from_json(_load_json(args.tensor))
    op = args.op
    if op == "ar":
        ar = analytic_rank(t, args.budget)
        out = {
            "bias": f"{ar.bias.numerator}/{ar.bias.denominator}",
            "log_exact": None
            if ar.log_exact is None
            else f"{ar.log_exact.numerator}/{ar.log_exact.denominator}",
            "ceil_ar": ar.ceil_ar(),
        }
    elif op in ("pr", "epr", "dpr", "tr"):
        fn = {
            "pr": partition_rank,
            "epr": essential_pr,
            "dpr": disjoint_pr,
            "tr": tensor_rank,
        }[op]
        out = fn(t, args.budget).to_json()
    elif op == "surjective":
        alphas = [_alphabet(a) for a in args.alphabets.split(";")]
        r = surjective_on(t, alphas, args.budget)
        out = {"image": sorted(r.image), "surjective": r.surjective}
    else:
        raise BiaslabError(f"unknown tensor op {op!r}")
    _write(args, out)
    return 0


def cmd_dist(args) -> int:
    d = Distribution.from_json(_load_json(args.dist))
    op = args.op
    if op == "affine-mass":
        m = affine_mass(d)
        out = {"affine_mass": f"{m.numerator}/{m.denominator}"}
    elif op == "deconvolve":
        res = deconvolve_u(d)
        out = {"e": res.e.to_json(), "hypothesis_ok": res.hypothesis_ok}
    elif op == "convolve":
        other = Distribution.from_json(_load_json(args.with_dist))
        out = convolve(d, other).to_json()
    elif op == "mixing":
        c = Fraction(args.c)
        m = args.m if args.m else mixing_m(d.ctx.p, c, d.k)
        r = mixing_check(d, c, m)
        out = {
            "m": m,
            "hypothesis_ok": r.hypothesis_ok,
            "m_large_enough": r.m_large_enough,
            "deviation_ok": r.deviation_ok,
            "max_deviation": f"{r.max_deviation.numerator}/{r.max_deviation.denominator}",
        }
    else:
        raise BiaslabError(f"unknown dist op {op!r}")
    _write(args, out)
    return 0


def cmd_verify(args) -> int:
    spec = SuiteSpec(
        name=args.suite,
        seed=args.seed,
        budget=args.budget,
        grid=json.loads(args.grid) if args.grid else {},
    )
    report = run_suite(spec)
    if args.out:
        emit(report, args.format, args.out)
    else:
        sys.stdout.write(render(report, args.format))
    counts = report.counts
    sys.stderr.write(
        f"suite {args.suite}: {counts['pass']} pass, {counts['fail']} fail, "
        f"{counts['untested']} untested\n"
    )
    for finding in report.findings:
        sys.stderr.write(f"finding: {finding}\n")
    return 0 if report.ok else 1


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    ctx = FieldCtx(args.p)
    if args.kind == "polynomial":
        obj = gen_polynomial(
            rng, ctx, args.n, args.degree, homogeneous=args.homogeneous
        ).to_json()
    elif args.kind == "tensor":
        dims = [int(x) for x in args.dims.split(",")]
        obj = gen_tensor(rng, ctx, dims).to_json()
    elif args.kind == "distribution":
        c = Fraction(args.c) if args.c else None
        obj = gen_distribution(rng, ctx, args.k, c=c).to_json()
    elif args.kind == "alphabet":
        obj = {"p": args.p, "alphabet": gen_alphabet(rng, ctx, args.size)}
    else:
        raise BiaslabError(f"unknown kind {args.kind!r}")
    _write(args, obj)
    return 0


def cmd_bounds(args) -> int:
    name = args.name
    prec = args.precision_bits
    params = dict(kv.split("=", 1) for kv in (args.params.split(",") if args.params else []))

    def fr(key, default=None):
        return Fraction(params[key]) if key in params else default

    def pint(key, default=None):
        return int(params[key]) if key in params else default

    p = pint("p", 3)
    variant = params.get("variant", args.variant)
    if name == "roots":
        val = bd.roots_bound(p, fr("c", Fraction(1, 2)), prec)
        out = {"value": interval_json(val), "variant": variant}
    elif name == "linear":
        val = bd.linear_bound(p, fr("c", Fraction(1, 2)), pint("rk1", 1), prec)
        out = {"value": interval_json(val), "variant": variant}
    elif name == "bilinear":
        lv = bd.bilinear_bound(
            p, fr("c1", Fraction(1, 2)), fr("c2", Fraction(1, 2)), pint("k", 1), variant, prec
        )
        out = lv.to_json()
    elif name == "K":
        lv = bd.k_bilinear(
            p, fr("c1", Fraction(1, 2)), fr("c2", Fraction(1, 2)),
            fr("eps", Fraction(1, 2)), variant, prec,
        )
        out = lv.to_json()
    elif name == "M":
        val = bd.m_const_k(p, fr("c", Fraction(1, 2)), pint("k", 1), prec)
        out = {"value": interval_json(val)}
    elif name == "B":
        a = bd.a_formula(pint("d", 3), p, params.get("which", "milicevic"),
                         fr("c_abs"), prec=prec)
        lv = bd.b_recursion(pint("d", 3), p, fr("c", Fraction(1, 2)),
                            fr("eps", Fraction(1, 2)), a, variant, prec)
        out = lv.to_json()
    elif name == "theta":
        d = pint("d", 2)
        a = None
        if d > 2:
            a = bd.a_formula(d, p, params.get("which", "milicevic"), fr("c_abs"), prec=prec)
        out = bd.theta(p, d, a, prec).to_json()
    elif name == "lambda":
        out = {"value": bd.lambda2_int(pint("l", 1))}
    else:
        raise BiaslabError(f"unknown bound {name!r}")
    _write(args, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="biaslab", description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=1 << 24)
    ap.add_argument("--precision-bits", type=int, default=128)
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", default=None)
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("bias", help="exact bias of a polynomial")
    b.add_argument("--poly", required=True)
    b.add_argument("--alphabet", default="")
    b.add_argument("--dist", default=None)
    b.add_argument("--t", type=int, default=1)
    b.set_defaults(fn=cmd_bias)

    r = sub.add_parser("rank", help="exact low-degree ranks of a polynomial")
    r.add_argument("--poly", required=True)
    r.set_defaults(fn=cmd_rank)

    t = sub.add_parser("tensor", help="tensor rank machinery")
    t.add_argument("--tensor", required=True)
    t.add_argument("--op", required=True,
                   choices=("ar", "pr", "epr", "dpr", "tr", "surjective"))
    t.add_argument("--alphabets", default="0,1;0,1")
    t.set_defaults(fn=cmd_tensor)

    d = sub.add_parser("dist", help="distribution operations")
    d.add_argument("--dist", required=True)
    d.add_argument("--op", required=True,
                   choices=("affine-mass", "deconvolve", "convolve", "mixing"))
    d.add_argument("--with-dist", dest="with_dist", default=None)
    d.add_argument("--c", default="1/2")
    d.add_argument("--m", type=int, default=None)
    d.set_defaults(fn=cmd_dist)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--grid", default=None, help="JSON dict of suite parameters")
    v.set_defaults(fn=cmd_verify)

    g = sub.add_parser("gen", help="deterministic instance generation")
    g.add_argument("--kind", required=True,
                   choices=("polynomial", "tensor", "distribution", "alphabet"))
    g.add_argument("--p", type=int, default=3)
    g.add_argument("--n", type=int, default=3)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--degree", type=int, default=2)
    g.add_argument("--dims", default="2,2")
    g.add_argument("--size", type=int, default=2)
    g.add_argument("--c", default=None)
    g.add_argument("--homogeneous", action="store_true")
    g.set_defaults(fn=cmd_gen)

    bo = sub.add_parser("bounds", help="evaluate a bound function")
    bo.add_argument("eval", nargs="?", default="eval")
    bo.add_argument("--name", required=True)
    bo.add_argument("--params", default="")
    bo.add_argument("--variant", default="as_stated")
    bo.set_defaults(fn=cmd_bounds)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except BiaslabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
