"""Command-line entry point: ``zcperm <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 verification mismatch.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import correlation, equivalence, experiments, permpoly, zc

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2

LONG_CENSUS_N = 100
LONG_SCAN_NMAX = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _load_seq(arg: str) -> zc.ExponentSeq:
    try:
        return zc.ExponentSeq.from_json(_read_text(arg))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read exponent sequence from {arg!r}: {exc}") from exc


def _load_perm(arg: str) -> permpoly.Permutation:
    text = _read_text(arg).strip()
    try:
        if text.startswith("["):
            return permpoly.Permutation.from_json(text)
        return permpoly.to_permutation(permpoly.PolyModN.parse(text))
    except permpoly.NotBijective as exc:
        raise UsageError(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(f"cannot read permutation from {arg!r}: {exc}") from exc


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    out = getattr(args, "out", None)
    if out:
        experiments.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_gen_zc(args):
    _emit(args, zc.zc_exponents(args.n, args.u, args.l).to_json())
    return EXIT_OK


def cmd_pp_test(args):
    poly = permpoly.PolyModN.parse(args.poly)
    if poly.modulus != args.n:
        raise UsageError(f"--n {args.n} does not match polynomial modulus {poly.modulus}")
    result = {"schema": 1, "poly": poly.format()}
    brute = None
    if args.method in ("brute", "both"):
        try:
            perm = permpoly.to_permutation(poly)
            brute = True
            result["permutation"] = list(perm.map)
        except permpoly.NotBijective as exc:
            brute = False
            result["collision"] = list(exc.witness)
        result["brute"] = brute
    if args.method in ("lemma", "both"):
        result["lemma"] = permpoly.is_pp(poly)
    result["is_pp"] = brute if brute is not None else result["lemma"]
    _emit(args, _dump(result))
    if args.method == "both" and result["lemma"] != brute:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_pp_family(args):
    if args.qpp:
        polys = permpoly.qpp_family(args.n)
    else:
        if args.p is None:
            raise UsageError("--p is required unless --qpp is given")
        try:
            polys = permpoly.family_xp_ax_b(args.n, args.p, include_b=args.include_b)
        except permpoly.FamilyPreconditionError as exc:
            raise UsageError(str(exc)) from exc
    _emit(args, _dump({"schema": 1, "n": args.n, "count": len(polys),
                       "polys": [p.format() for p in polys]}))
    return EXIT_OK


def cmd_interleave(args):
    seq = _load_seq(args.seq)
    perm = _load_perm(args.perm)
    try:
        out = zc.interleave_inverse(seq, perm) if args.inverse else zc.interleave(seq, perm)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, out.to_json())
    return EXIT_OK


def cmd_autocorr(args):
    seq = _load_seq(args.seq)
    prof = correlation.profile(seq, with_aperiodic=args.aperiodic)
    if args.format == "csv":
        _emit(args, prof.to_csv(include_exact=args.exact))
    else:
        d = prof.to_dict()
        if not args.exact:
            d.pop("exact_zero")
            d.pop("zero_set")
        _emit(args, _dump(d))
    return EXIT_OK


def cmd_cazac(args):
    seq = _load_seq(args.seq)
    v = correlation.cazac_verdict(seq)
    _emit(args, _dump({"schema": 1, "n": seq.n, **v.to_dict(),
                       "zero_set": correlation.periodic_autocorr(seq).zero_set}))
    return EXIT_OK


def cmd_equiv(args):
    s1, s2 = _load_seq(args.seq1), _load_seq(args.seq2)
    if s1.n != s2.n:
        raise UsageError(f"length mismatch: {s1.n} vs {s2.n}")
    w = equivalence.are_equivalent(s1, s2)
    _emit(args, _dump({"schema": 1, "equivalent": w is not None,
                       "witness": None if w is None else w.to_dict()}))
    return EXIT_OK


def cmd_census(args):
    if args.n > LONG_CENSUS_N and not args.allow_long:
        raise UsageError(f"census at N={args.n} is long-running; pass --allow-long")
    try:
        rep = equivalence.census(args.n, args.candidates, args.references, args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, _dump(rep.to_dict()))
    return EXIT_OK


def cmd_aperiodic_scan(args):
    if args.nmax > LONG_SCAN_NMAX and not args.allow_long:
        raise UsageError(f"n_max={args.nmax} is long-running; pass --allow-long")
    poly = permpoly.PolyModN.parse(args.qpp) if ":" in args.qpp else None
    if poly is not None:
        if poly.degree > 2 or poly.coeff(0):
            raise UsageError("--qpp must be a quadratic with zero constant, e.g. 'a2,a1' or 'N:0,a1,a2'")
        a2, a1 = poly.coeff(2), poly.coeff(1)
    else:
        try:
            a2, a1 = (int(x) for x in args.qpp.split(","))
        except ValueError as exc:
            raise UsageError(f"--qpp expects 'a2,a1', got {args.qpp!r}") from exc
    try:
        rep = correlation.aperiodic_scan(args.nmin, args.nmax, a2, a1, args.u)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, rep.to_json())
    return EXIT_OK


def cmd_reproduce(args):
    reg = experiments.REGISTRY
    if args.list:
        for spec in reg.values():
            tag = " (long)" if spec.long else ""
            print(f"{spec.id}\t{spec.description}{tag}")
        return EXIT_OK
    if not args.id:
        raise UsageError("reproduce needs --id or --list")
    if args.id not in reg:
        sys.stderr.write(f"unknown experiment id {args.id!r}; registered ids:\n")
        for k in reg:
            sys.stderr.write(f"  {k}\n")
        return EXIT_USAGE
    spec = reg[args.id]
    if spec.long and not args.allow_long:
        raise UsageError(f"{spec.id} is long-running; pass --allow-long")
    result = experiments.run_experiment(spec.id)
    _emit(args, result.to_json())
    if not result.match:
        for m in result.mismatches:
            sys.stderr.write(f"mismatch: {m}\n")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_pp_search(args):
    found = permpoly.search_xp_ax_b(args.n, args.p)
    _emit(args, _dump({"schema": 1, "n": args.n, "p": args.p, "a": found}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="zcperm", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write output here instead of stdout")
        return p

    p = add("gen-zc", cmd_gen_zc, "generate a ZC exponent sequence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--l", type=int, default=0)

    p = add("pp-test", cmd_pp_test, "test whether a polynomial permutes Z_N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poly", required=True, help="N:a0,a1,...,am")
    p.add_argument("--method", choices=["brute", "lemma", "both"], default="both")

    p = add("pp-family", cmd_pp_family, "list x^p+ax (+b) or QPP families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--qpp", action="store_true")
    p.add_argument("--include-b", action="store_true")

    p = add("interleave", cmd_interleave, "interleave a sequence by a permutation")
    p.add_argument("--seq", required=True, help="JSON file or inline {n, exps}")
    p.add_argument("--perm", required=True, help="JSON array or N:a0,... polynomial")
    p.add_argument("--inverse", action="store_true")

    p = add("autocorr", cmd_autocorr, "autocorrelation profile")
    p.add_argument("--seq", required=True)
    p.add_argument("--aperiodic", action="store_true")
    p.add_argument("--exact", action="store_true", help="include exact zero verdicts")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = add("cazac", cmd_cazac, "exact CAZAC verdict")
    p.add_argument("--seq", required=True)

    p = add("equiv", cmd_equiv, "search for an equivalence witness")
    p.add_argument("--seq1", required=True)
    p.add_argument("--seq2", required=True)

    p = add("census", cmd_census, "count candidates inequivalent to a reference family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--mode", default="exhaustive", help="exhaustive | sampled:K:SEED")
    p.add_argument("--allow-long", action="store_true")

    p = add("aperiodic-scan", cmd_aperiodic_scan, "aperiodic peak scaling over N = 2^n")
    p.add_argument("--nmin", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--qpp", default="2,1", help="'a2,a1' for a2 x^2 + a1 x")
    p.add_argument("--u", type=int, default=1)
    p.add_argument("--allow-long", action="store_true")

    p = add("reproduce", cmd_reproduce, "rerun a registered experiment against golden data")
    p.add_argument("--id")
    p.add_argument("--list", action="store_true")
    p.add_argument("--allow-long", action="store_true")

    p = add("pp-search", cmd_pp_search, "brute-force every a with x^p + a x a PP of Z_N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"zcperm: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
