"""Command line entry point.

Exit codes: 0 success/affirmative, 1 negative finding, 2 usage or input
error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import combinations

from . import bounds as B
from ._backend import BACKEND
from .constructions import fano_plane, product_compose, transversal_family
from .detect import SunflowerCertificate, find_sunflower
from .family import (
    FamilyError,
    FamilyFormatError,
    check_L_intersecting,
    check_ell_intersecting,
    format_family,
    intersection_profile,
    read_family,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _int_range(text: str) -> list[int]:
    """'5', '1..4' or '1,3,7'."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from exc


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator} (~{float(x):.6g})"
    return str(x)


# -- subcommands -----------------------------------------------------------

def cmd_check(args) -> int:
    fam = read_family(args.file)
    k = fam.uniformity()
    info = {"n": fam.n, "members": len(fam), "uniform_k": k}
    status = EXIT_OK
    if len(fam) >= 2:
        prof = intersection_profile(fam)
        info["L_realized"] = list(prof.sizes)
        info["min_intersection"] = prof.min_size
    if args.k is not None and k != args.k:
        info["uniform_ok"] = False
        status = EXIT_NEGATIVE
    if args.L is not None:
        ok, witness = check_L_intersecting(fam, args.L)
        info["L_ok"] = ok
        if not ok:
            info["L_violation"] = [fam[witness[0]].elements, fam[witness[1]].elements]
            status = EXIT_NEGATIVE
    if args.ell is not None:
        ok, witness = check_ell_intersecting(fam, args.ell)
        info["ell_ok"] = ok
        if not ok:
            info["ell_violation"] = [fam[witness[0]].elements, fam[witness[1]].elements]
            status = EXIT_NEGATIVE
    _emit(args, info, "\n".join(f"{key}: {val}" for key, val in info.items()))
    return status


def cmd_find_sunflower(args) -> int:
    fam = read_family(args.file)
    cert = find_sunflower(fam, args.r, threads=args.threads)
    payload = cert.to_json(fam)
    found = isinstance(cert, SunflowerCertificate)
    if found:
        text = f"sunflower with {cert.r} petals, kernel {cert.kernel.elements}\n" + "\n".join(
            " ".join(map(str, p)) for p in payload["petals"]
        )
    else:
        text = f"no sunflower with {cert.r} petals ({cert.exhaustive_kernel_count} kernels examined)"
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)
    if args.expect_free:
        return EXIT_NEGATIVE if found else EXIT_OK
    return EXIT_OK if found else EXIT_NEGATIVE


BOUND_NAMES = ("er", "kostochka", "rw", "deza", "main", "main2", "main3", "help", "help2", "binom", "recursion", "lower", "ahs")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--thm {args.thm} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _bound_rows(args):
    thm = args.thm
    rng = lambda name: getattr(args, name) or [None]  # noqa: E731
    rows = []
    if thm == "er":
        _need(args, "k", "r")
        rows = [B.er_bound(k, r) for k in args.k for r in args.r]
    elif thm == "kostochka":
        _need(args, "k", "r", "alpha", "D")
        rows = [B.kostochka_bound(k, r, args.alpha, args.D, args.log_base) for k in args.k for r in args.r]
    elif thm == "rw":
        _need(args, "n", "s")
        rows = [B.rw_bound(n, s) for n in args.n for s in args.s]
    elif thm == "deza":
        _need(args, "k")
        rows = [B.deza_bound(k) for k in args.k]
    elif thm == "main":
        _need(args, "k", "s")
        rows = [B.main_bound(k, s) for k in args.k for s in args.s]
    elif thm == "main2":
        _need(args, "k", "ell", "alpha", "D")
        rows = [B.main2_bound(k, ell, args.alpha, args.D, args.log_base) for k in args.k for ell in args.ell]
    elif thm == "main3":
        _need(args, "k", "D")
        rows = [B.main3_bound(k, args.D, args.log_base) for k in args.k]
    elif thm == "recursion":
        _need(args, "k", "s")
        rows = [B.recursion_f_bound(k, s, variant=v) for k in args.k for s in args.s
                for v in (B.RecursionVariant if args.variant == "both" else [B.RecursionVariant(args.variant)])]
    elif thm == "lower":
        _need(args, "s", "c")
        rows = [B.f_lower_bound(s, args.c, args.log_base) for s in args.s]
    elif thm == "ahs":
        _need(args, "k", "c")
        rows = [B.ahs_lower(k, args.c, args.log_base) for k in args.k]
    elif thm == "help2":
        _need(args, "n")
        rows = [B.corollary_help2_threshold(n) for n in args.n]
    elif thm == "help":
        _need(args, "n")
        out = []
        for n in args.n:
            for r in rng("r"):
                rs = range(n + 1) if r is None else [r]
                for rr in rs:
                    ineq, quad = B.lemma_help(n, rr)
                    out.append({"n": n, "r": rr, "binomial": ineq, "quadratic": quad, "agree": ineq == quad})
        return out
    elif thm == "binom":
        _need(args, "k")
        return [{"k": k, "holds": B.lemma_binom_check(k)[0]} for k in args.k]
    return sorted(rows, key=lambda b: tuple(b.params.get(x, 0) or 0 for x in ("k", "r", "s", "ell", "n")
                                             if not isinstance(b.params.get(x, 0), str)))


def cmd_bounds(args) -> int:
    rows = _bound_rows(args)
    if rows and isinstance(rows[0], dict):
        if args.json:
            print(json.dumps(rows, indent=2, default=str))
        else:
            for row in rows:
                print("  ".join(f"{k}={v}" for k, v in row.items()))
        return EXIT_OK if all(r.get("agree", r.get("holds", True)) for r in rows) else EXIT_NEGATIVE
    if args.json:
        print(json.dumps([b.to_json() for b in rows], indent=2))
        return EXIT_OK
    for b in rows:
        params = " ".join(f"{k}={_fmt(v)}" for k, v in b.params.items())
        extra = "" if not b.audit else "  " + " ".join(f"{k}={v}" for k, v in b.audit.items())
        if args.quiet:
            print(_fmt(b.value))
        else:
            print(f"{b.theorem_id.value}  {params}  value={_fmt(b.value)}  {b.rounding_mode.value}"
                  f"  log={b.log_base or '-'}{extra}")
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "transversal":
        if args.k is None or args.r is None:
            raise UsageError("transversal needs --k and --r")
        fam = transversal_family(args.k, args.r)
    elif args.kind == "fano":
        fam = fano_plane()
    else:
        if not args.a or not args.b:
            raise UsageError("product needs --a FILE --b FILE")
        fam = product_compose(read_family(args.a), read_family(args.b))
    text = format_family(fam)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_search(args) -> int:
    from .search import SearchProblem, default_budget, extremal_search, verify_witness

    budget = args.budget if args.budget is not None else default_budget()
    threads = 1 if args.deterministic else args.threads
    if args.s is not None:
        Ls = [tuple(L) for L in combinations(range(args.k), args.s)]
    elif args.L is not None:
        Ls = [tuple(args.L)]
    else:
        Ls = [None]
    resume = None
    if args.resume:
        with open(args.resume, encoding="utf-8") as fh:
            saved = json.load(fh)
        resume = {"checkpoint": saved["checkpoint"], "best_path": saved["best_path"], "nodes": saved["nodes_explored"]}
        if len(Ls) != 1:
            raise UsageError("--resume works with a single constraint")
    results = []
    for L in Ls:
        p = SearchProblem(args.k, args.r, args.nmax, L=L, ell_min=args.ell)
        res = extremal_search(p, budget=budget, threads=threads, resume=resume)
        problems = verify_witness(res)
        if problems:
            raise RuntimeError(f"witness failed re-verification: {problems}")
        results.append(res)
    top = max(results, key=lambda r: r.optimum)
    payload = top.to_json() if len(results) == 1 else {
        "optimum": top.optimum,
        "argmax": top.to_json(),
        "per_L": [r.to_json() for r in results],
    }
    if args.witness_out:
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            fh.write(format_family(top.witness, comment=f"optimum {top.optimum} for {top.problem.describe()}"))
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for r in results:
            flag = "exhaustive" if r.exhaustive else "BUDGET EXHAUSTED (lower bound only)"
            print(f"{r.problem.describe()}  optimum={r.optimum}  nodes={r.nodes_explored}  {flag}  [{r.backend}]")
        print(format_family(top.witness), end="")
    return EXIT_OK if all(r.exhaustive for r in results) else EXIT_BUDGET


def cmd_decompose(args) -> int:
    from .prover import audit_ell_cover, certificate_problems, decompose_L_intersecting

    fam = read_family(args.file)
    if args.ell is not None:
        audit = audit_ell_cover(fam, args.ell, args.f0, r=args.r)
        payload = {
            "ell": audit.ell, "k": audit.k, "F0_index": audit.F0_index,
            "sizes": [{"T": list(T), "size": v} for T, v in audit.sizes.items()],
            "cover_holds": audit.cover_holds, "count_bound": audit.count_bound,
            "bound_holds": audit.bound_holds, "transfer_holds": audit.transfer_holds,
            "lifted_sunflowers": [{"T": list(T), "petals": list(p)} for T, p in audit.transfer_lifted],
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK if audit.ok else EXIT_NEGATIVE
    if args.L is None:
        raise UsageError("decompose needs --L (or --ell with --f0)")
    root = decompose_L_intersecting(fam, args.L, require_sunflower_free=not args.allow_sunflowers)
    data = root.to_json()
    text = json.dumps(data, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    problems = certificate_problems(root)
    for p in problems:
        print(f"warning: {p}", file=sys.stderr)
    return EXIT_OK if not problems else EXIT_NEGATIVE


def cmd_verify_cert(args) -> int:
    from .prover import verify_certificate

    fam = read_family(args.family)
    with open(args.cert, encoding="utf-8") as fh:
        data = json.load(fh)
    problems = verify_certificate(fam, data)
    if args.json:
        print(json.dumps({"valid": not problems, "problems": problems}))
    else:
        print("certificate valid" if not problems else "\n".join(problems))
    return EXIT_OK if not problems else EXIT_NEGATIVE


def cmd_report(args) -> int:
    from .acceptance import run_all

    results = run_all(seed=args.seed, quick=args.quick, threads=args.threads)
    if args.json:
        print(json.dumps([r.to_json() for r in results], indent=2, default=str))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # global flags work before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized checks")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="sunflower-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="emit JSON")
    ap.add_argument("--seed", type=int, default=20240917, help="seed for randomized checks")
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="cmd", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    p = sub.add_parser("check", help="uniformity and intersection profile of a family file")
    p.add_argument("file")
    p.add_argument("--k", type=int)
    p.add_argument("--L", type=_int_list)
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find-sunflower", help="exact sunflower detection")
    p.add_argument("file")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--expect-free", action="store_true", help="exit 1 if a sunflower is found")
    p.set_defaults(func=cmd_find_sunflower)

    p = sub.add_parser("bounds", help="evaluate bound formulas")
    p.add_argument("--thm", choices=BOUND_NAMES, required=True)
    for name in ("k", "r", "s", "n", "ell"):
        p.add_argument(f"--{name}", type=_int_range)
    p.add_argument("--alpha", type=Fraction)
    p.add_argument("--D", type=Fraction)
    p.add_argument("--c", type=Fraction)
    p.add_argument("--log-base", choices=("e", "2"), default="e")
    p.add_argument("--variant", choices=("both",) + tuple(v.value for v in B.RecursionVariant), default="both")
    p.add_argument("--quiet", action="store_true", help="print values only")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="generate a family")
    p.add_argument("kind", choices=("transversal", "product", "fano"))
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exact extremal search")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--s", type=int, help="maximize over every L of this size")
    grp.add_argument("--L", type=_int_list)
    grp.add_argument("--ell", type=int)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--resume", help="SearchResult JSON of an interrupted run")
    p.add_argument("--witness-out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("decompose", help="certificate tree for an L-intersecting family")
    p.add_argument("file")
    p.add_argument("--L", type=_int_list)
    p.add_argument("--allow-sunflowers", action="store_true")
    p.add_argument("--ell", type=int, help="cover audit over ell-subsets of member --f0")
    p.add_argument("--f0", type=int, default=0)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify-cert", help="re-check a certificate tree against a family")
    p.add_argument("family")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("report", help="run the acceptance table")
    p.add_argument("--reproduce-table", action="store_true")
    p.add_argument("--quick", action="store_true", help="smaller sample sizes")
    p.set_defaults(func=cmd_report)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except FamilyFormatError as exc:
        print(f"error: {args.__dict__.get('file') or ''}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, FamilyError, B.BoundDomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

__all__ = ["run", "main", "BACKEND"]
