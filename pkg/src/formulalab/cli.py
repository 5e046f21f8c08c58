"""Batch front end: measures, projection checks, shrinkage curves,
construction reports and the verification suite, all plain text or CSV.

Exit codes: 0 all good, 1 a checked property failed (witness printed),
2 usage or input errors.  Randomized modes refuse to run without --seed,
and identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .formula import format_formula, formula_depth, formula_size
from .measures import khrapchenko_K, khrapchenko_Kmin, km_binary, khrapchenko_cert_value
from .projdist import (
    NotFixingError,
    hiding_to_fixing,
    is_fixing,
    is_hiding,
    majority_block,
    p_random_restriction,
    parse_proj_dist,
    random_edge,
    random_m_alive,
    format_proj_dist,
    tightest_fixing,
    tightest_hiding,
)
from .sizetable import D_exact, L_exact, build_size_table
from .truthtable import parse_table_spec
from .verify import SUITES, UsageError, run_suite


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({e})")


def _fmt_frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ------------------------------------------------------------------ measure


def _cmd_measure(args) -> int:
    f = parse_table_spec(args.table)
    if f.n > 4:
        raise UsageError(f"exact measures are capped at 4 variables, got {f.n}")
    print(f"n={f.n}")
    print(f"L={0 if f.is_constant() else L_exact(f)}")
    print(f"D={0 if f.is_constant() else D_exact(f)}")
    if f.is_constant():
        print("K=0")
        print("Kmin=0")
        print("Km=0")
    else:
        print(f"K={_fmt_frac(khrapchenko_K(f))}")
        print(f"Kmin={khrapchenko_Kmin(f)}")
        print(f"Km={km_binary(f)}")
    return 0


# ------------------------------------------------------------------ project


def named_proj_dist(spec: str):
    """restriction:<n>:<p> | edge:<n> | m_alive:<n>:<m> | majority:<m>[:<k>]"""
    parts = spec.split(":")
    try:
        if parts[0] == "restriction" and len(parts) == 3:
            return p_random_restriction(int(parts[1]), Fraction(parts[2]))
        if parts[0] == "edge" and len(parts) == 2:
            return random_edge(int(parts[1]))
        if parts[0] == "m_alive" and len(parts) == 3:
            return random_m_alive(int(parts[1]), int(parts[2]))
        if parts[0] == "majority" and len(parts) in (2, 3):
            k = int(parts[2]) if len(parts) == 3 else 1
            return majority_block(int(parts[1]), k)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"bad family spec {spec!r}: {e}")
    raise ValueError(f"unknown family spec {spec!r}")


def _load_dist(args):
    if args.family:
        return named_proj_dist(args.family)
    if not args.file:
        raise UsageError("need a distribution file or --family")
    with open(args.file) as fh:
        return parse_proj_dist(fh.read())


def _cmd_project(args) -> int:
    if args.emit:
        d = named_proj_dist(args.emit)
        text = format_proj_dist(d)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    d = _load_dist(args)
    if args.q is not None:
        q0 = q1 = args.q
    else:
        q0, q1 = args.q0, args.q1
    if args.check_fixing or args.check_hiding:
        if q0 is None or q1 is None:
            raise UsageError("checking needs --q or both --q0 and --q1")
        check = is_fixing if args.check_fixing else is_hiding
        res = check(d, q0, q1)
        kind = "fixing" if args.check_fixing else "hiding"
        if res:
            print(f"PASS ({_fmt_frac(q0)},{_fmt_frac(q1)})-{kind}")
            return 0
        print(f"FAIL not ({_fmt_frac(q0)},{_fmt_frac(q1)})-{kind}: {res.witness}")
        return 1
    if args.convert:
        q0, q1 = tightest_hiding(d)
        conv = hiding_to_fixing(d)
        m = d.m
        print(f"hiding q0={_fmt_frac(q0)} q1={_fmt_frac(q1)}")
        print(
            f"fixing q0={_fmt_frac(4 * m * m * q0)} q1={_fmt_frac(4 * m * m * q1)}"
        )
        print(f"identity_prob={_fmt_frac(conv.identity_prob)}")
        print(f"support={len(conv.dist.support)}")
        return 0
    # default: infer the tightest parameters of both kinds
    try:
        q0, q1 = tightest_fixing(d)
        print(f"fixing q0={_fmt_frac(q0)} q1={_fmt_frac(q1)}")
    except NotFixingError as e:
        print(f"fixing none ({e})")
    q0, q1 = tightest_hiding(d)
    print(f"hiding q0={_fmt_frac(q0)} q1={_fmt_frac(q1)}")
    return 0


# ------------------------------------------------------------------- shrink


def _cmd_shrink(args) -> int:
    from .shrinkage import shrinkage_curve

    t_grid = [int(t) for t in args.t.split(",")]
    if args.family == "restriction":
        params = [Fraction(p) for p in args.params.split(",")]
    else:
        params = [int(p) for p in args.params.split(",")]
    try:
        csv = shrinkage_curve(
            t_grid, args.family, params, mode=args.mode, seed=args.seed,
            trials=args.trials,
        )
    except ValueError as e:
        raise UsageError(str(e))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    return 0


# ---------------------------------------------------------------- construct


def _cmd_construct(args) -> int:
    if args.what == "surj":
        from .hardfunc import SURJ_PAIRS_CAP, SurjInstance, surj_pair_distribution, surj_uformula

        inst = SurjInstance(args.s)
        phi = surj_uformula(args.s)
        print(f"s={args.s} alphabet={inst.sigma} positions={inst.r} n={inst.n}")
        print(f"leaves={formula_size(phi)} depth={formula_depth(phi)}")
        if args.s <= SURJ_PAIRS_CAP:
            cert = khrapchenko_cert_value(surj_pair_distribution(args.s))
            print(f"certificate={_fmt_frac(cert)}")
        if args.emit_formula:
            with open(args.emit_formula, "w") as fh:
                fh.write(format_formula(phi) + "\n")
        return 0
    # andreev
    from .hardfunc import (
        andreev_F,
        andreev_arity,
        andreev_ratio_rows,
        andreev_size_depth4,
        andreev_textbook_size,
    )

    k, s = args.k, args.s
    F, _ = andreev_F(k, s)
    print(f"k={k} s={s} n={andreev_arity(k, s)}")
    print(f"leaves={formula_size(F)} depth={formula_depth(F)}")
    assert formula_size(F) == andreev_size_depth4(k, s)
    print(f"direct_leaves={andreev_textbook_size(k, s)} direct_depth=5")
    if args.report:
        lines = ["s,k,n,leaves,ratio"]
        for s_, k_, n_, size, ratio in andreev_ratio_rows():
            lines.append(f"{s_},{k_},{n_},{size},{ratio!r}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- sizetable


def _cmd_sizetable(args) -> int:
    tab = build_size_table(args.arity)
    tab.save(args.out)
    print(f"arity={args.arity} functions={len(tab.L)} file={args.out}")
    return 0


# ------------------------------------------------------------------- verify


def _cmd_verify(args) -> int:
    return run_suite(args.suite, seed=args.seed)


# -------------------------------------------------------------------- main


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="formulalab",
        description="formula-size measures, random projections and shrinkage checks",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("measure", help="size, depth and cut bounds of a table")
    p.add_argument("table", help="tt <n> <bits> | parity:3 | maj:3 | random:4:7 | surj:1")
    p.set_defaults(fn=_cmd_measure)

    p = sub.add_parser("project", help="check or infer projection parameters")
    p.add_argument("file", nargs="?", help="distribution file")
    p.add_argument("--family", help="named family instead of a file, e.g. edge:3")
    p.add_argument("--emit", metavar="SPEC", help="write a named family and exit")
    p.add_argument("--check-fixing", action="store_true")
    p.add_argument("--check-hiding", action="store_true")
    p.add_argument("--convert", action="store_true",
                   help="compose with the keep-or-fix target restriction")
    p.add_argument("--q", type=_frac, help="symmetric parameter for both bits")
    p.add_argument("--q0", type=_frac)
    p.add_argument("--q1", type=_frac)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_project)

    p = sub.add_parser("shrink", help="expected-size curve as CSV")
    p.add_argument("--family", choices=("restriction", "m_alive"), required=True)
    p.add_argument("--t", required=True, help="comma list of parity heights, e.g. 2,3")
    p.add_argument("--params", required=True,
                   help="comma list: keep probabilities (1/4,1/8) or survivor counts")
    p.add_argument("--mode", choices=("auto", "exact", "mc"), default="auto")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_shrink)

    p = sub.add_parser("construct", help="surjectivity / table-blocks reports")
    what = p.add_subparsers(dest="what", required=True)
    ps = what.add_parser("surj")
    ps.add_argument("--s", type=int, required=True)
    ps.add_argument("--emit-formula", metavar="FILE")
    ps.set_defaults(fn=_cmd_construct)
    pa = what.add_parser("andreev")
    pa.add_argument("--k", type=int, required=True)
    pa.add_argument("--s", type=int, default=1)
    pa.add_argument("--report", action="store_true", help="append the ratio table CSV")
    pa.add_argument("--out")
    pa.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--suite", default="all", choices=("all",) + SUITES)
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("sizetable", help="build and persist an exact size table")
    tsub = p.add_subparsers(dest="what", required=True)
    tb = tsub.add_parser("build")
    tb.add_argument("--arity", type=int, required=True)
    tb.add_argument("--out", required=True)
    tb.set_defaults(fn=_cmd_sizetable)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
