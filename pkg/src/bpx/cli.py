"""Command-line front end.

Subcommands: exponents, congruence, density, check, supersingular,
classpoly, table2.  Every run echoes its resolved configuration into the
output document; identical configurations produce byte-identical output
regardless of thread count.  Exit codes: 0 success, 2 invalid input or an
unmet hypothesis (an expected state), 1 broken internal invariant (a bug).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .borcherds import exact_exponents, fit_congruence, verify_congruence
from .classpoly import (cache_stats, default_cache_dir, eligibility,
                        hilbert_class_poly, hurwitz_class_number)
from .density import asymptotic_table, empirical_table
from .errors import InputError, InternalConsistencyError
from .kernel import backend
from .ssforms import supersingular_poly, supersingular_poly_bruteforce


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="bpx",
        description="Borcherds product exponents of class polynomials: "
                    "exact tables, congruences mod l, density tables.")
    top.add_argument("--version", action="version", version=f"bpx {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, d=False, ell=False, n=None):
        if d:
            p.add_argument("--d", type=int, required=True,
                           help="positive d with -d a negative discriminant")
        if ell:
            p.add_argument("--ell", type=int, required=True, help="odd prime modulus")
        if n is not None:
            p.add_argument("--n", type=int, default=n, help="index bound")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--cache-dir", default=None,
                       help="class polynomial cache directory")
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("exponents", help="exact exponents A(n^2, d)")
    common(p, d=True, n=10)

    p = sub.add_parser("congruence", help="fit the congruence constants mod l")
    common(p, d=True, ell=True)
    p.add_argument("--verify-to", type=int, default=None)

    p = sub.add_parser("density", help="asymptotic or empirical density table")
    common(p, d=True, ell=True)
    p.add_argument("--empirical", "--x", dest="x", type=int, default=None,
                   metavar="X", help="tally primes below X instead of the limit table")

    p = sub.add_parser("check", help="verify exact exponents against the formula")
    common(p, d=True, ell=True, n=300)

    p = sub.add_parser("supersingular", help="supersingular polynomial s_l")
    common(p, ell=True)

    p = sub.add_parser("classpoly", help="weighted class polynomial of -d")
    common(p, d=True)

    p = sub.add_parser("table2", help="d <= dmax whose class polynomial divides s_l")
    common(p, ell=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--D", type=int, default=1)
    return top


def _emit(doc: dict, args, text_lines: list[str]) -> None:
    doc["meta"] = {
        "tool": f"bpx {__version__}",
        "kernel_backend": backend(),
        "config": {k: v for k, v in sorted(vars(args).items())
                   if k not in ("format", "out")},
    }
    if args.format == "json":
        body = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    elif args.format == "csv":
        body = doc.get("csv") or _csv_fallback(doc)
    else:
        body = "\n".join(text_lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _csv_fallback(doc: dict) -> str:
    rows = doc.get("rows")
    if not rows:
        raise InputError("this command has no CSV form; use --format json")
    header = list(rows[0].keys())
    lines = [",".join(header)]
    lines += [",".join(str(r[k]) for k in header) for r in rows]
    return "\n".join(lines) + "\n"


def _cmd_exponents(args) -> dict:
    table = exact_exponents(args.d, args.n, cache_dir=args.cache_dir)
    rows = [{"n": n, "A": table[n]} for n in range(1, args.n + 1)]
    doc = table.to_document()
    doc["rows"] = rows
    text = [f"A(n^2, {args.d}) for n = 1..{args.n}:"]
    text += [f"  n={r['n']:>4}  {r['A']}" for r in rows]
    return doc, text


def _cmd_congruence(args) -> dict:
    F = fit_congruence(args.d, args.ell, verify_to=args.verify_to,
                       cache_dir=args.cache_dir)
    doc = F.to_document()
    text = [f"congruence for A(n^2, {args.d}) mod {args.ell}:",
            f"  c0 = {doc['c0']}   c = {doc['c']}",
            f"  eigenforms: {doc['basis']}",
            f"  verified to order {doc['verified_to']}"]
    return doc, text


def _cmd_density(args) -> dict:
    F = fit_congruence(args.d, args.ell, cache_dir=args.cache_dir)
    if args.x is None:
        tab = asymptotic_table(F)
    else:
        tab = empirical_table(F, args.x, threads=args.threads)
    doc = json.loads(tab.to_json())
    doc["csv"] = tab.to_csv()
    text = [f"{tab.kind} density of A(p^2, {args.d}) mod {args.ell}"
            + (f" for p < {args.x}" if args.x else "")]
    for row in tab.to_rows():
        if tab.kind == "asymptotic":
            text.append(f"  t={row['t']:>2}  {row['density']:>14}  {row['decimal']}")
        else:
            text.append(f"  t={row['t']:>2}  count={row['count']:>8}  {row['ratio']}")
    return doc, text


def _cmd_check(args) -> dict:
    verified, skipped = verify_congruence(args.d, args.ell, args.n,
                                          cache_dir=args.cache_dir)
    doc = {"d": args.d, "ell": args.ell, "n": args.n,
           "verified": verified, "skipped": skipped, "ok": True}
    text = [f"OK: {args.n} indices verified ({skipped} skipped, l|n)"]
    return doc, text


def _cmd_supersingular(args) -> dict:
    s = supersingular_poly(args.ell)
    doc = {"ell": args.ell, "s": str(s), "degree": s.degree,
           "coeffs": [c.value for c in s.coeffs]}
    if args.ell <= 1000:
        brute = supersingular_poly_bruteforce(args.ell)
        doc["bruteforce_match"] = brute == s
    text = [f"s_{args.ell}(x) = {s}"]
    if "bruteforce_match" in doc:
        text.append(f"matches point-counting enumeration: {doc['bruteforce_match']}")
    return doc, text


def _cmd_classpoly(args) -> dict:
    w = hilbert_class_poly(args.d, cache_dir=args.cache_dir)
    doc = w.to_document()
    doc["h"] = str(w.h)
    doc["cached"] = w.cached
    text = [f"weighted class polynomial for -{args.d} (h = {w.h}):"]
    text += [f"  ({poly})^({wt})" for poly, wt in w.components]
    return doc, text


def _cmd_table2(args) -> dict:
    if args.D != 1:
        raise InputError("the divisibility scan is implemented for D = 1")
    flagged = []
    for d in range(3, args.dmax + 1):
        if d % 4 not in (0, 3):
            continue
        rep = eligibility(d, args.ell, cache_dir=args.cache_dir)
        if rep.divides:
            wcp = hilbert_class_poly(d, cache_dir=args.cache_dir)
            flagged.append({
                "d": d,
                "h": str(hurwitz_class_number(d)),
                "class_poly_mod_ell": str(wcp.product_mod(args.ell)),
                "squarefree": rep.squarefree,
            })
    s = supersingular_poly(args.ell)
    doc = {"ell": args.ell, "dmax": args.dmax, "s_ell": str(s),
           "d_list": [r["d"] for r in flagged], "rows": flagged}
    text = [f"d <= {args.dmax} with class polynomial dividing "
            f"s_{args.ell} = {s} over F_{args.ell}:",
            "  " + ", ".join(str(r["d"]) for r in flagged)]
    return doc, text


_COMMANDS = {
    "exponents": _cmd_exponents,
    "congruence": _cmd_congruence,
    "density": _cmd_density,
    "check": _cmd_check,
    "supersingular": _cmd_supersingular,
    "classpoly": _cmd_classpoly,
    "table2": _cmd_table2,
}


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.cache_dir is None:
        args.cache_dir = default_cache_dir()
    before = cache_stats()
    try:
        doc, text = _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    after = cache_stats()
    doc["cache"] = {k: after[k] - before[k] for k in after}
    _emit(doc, args, text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
