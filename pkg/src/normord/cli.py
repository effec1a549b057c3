"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 violated mathematical
precondition, 3 failed verification.  ``NORMORD_ORDER`` sets the default
truncation order.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import ParseError, PreconditionError, VerificationFailure
from .expr import to_polynomial
from .flow import group_law_check, solve_flow_bivariate, solve_flow_expr
from .series import DEFAULT_ORDER, as_fraction, format_fraction, render_series
from .sheffer import ShefferPair, catalog, sequence_values, sheffer_from_flow, sheffer_polynomials
from .verify import run_all
from .weyl import normal_order_exp, weyl_table


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, TypeError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {n}")
    return n


def _z_value(text: str):
    return None if text == "symbolic" else _rational(text)


def default_order() -> int:
    raw = os.environ.get("NORMORD_ORDER")
    if raw is None:
        return DEFAULT_ORDER
    try:
        return _nonneg(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"NORMORD_ORDER: {exc}")


def build_parser() -> argparse.ArgumentParser:
    order = default_order()
    p = _Parser(prog="normord", description="Normal ordering of exp(L (q(ad) a + v(ad))) with exact rational series.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt="json"):
        sp.add_argument("--format", choices=("json", "csv", "pretty"), default=fmt)
        sp.add_argument("--output", "-o", help="write here instead of standard output")

    sp = sub.add_parser("flow", help="solve the flow equations for T and g")
    sp.add_argument("--q", required=True)
    sp.add_argument("--v", required=True)
    sp.add_argument("--x0", type=_rational, default=Fraction(0))
    sp.add_argument("--order", type=_nonneg, default=order)
    sp.add_argument("--bivariate", action="store_true", help="keep coefficients as series in x - x0")
    sp.add_argument("--xorder", type=_nonneg, help="x-order in bivariate mode (default: --order)")
    sp.add_argument("--check-group-law", action="store_true")
    common(sp)

    sp = sub.add_parser("normal-order", help="normally ordered exponential of q(ad) a + v(ad)")
    sp.add_argument("--q", required=True)
    sp.add_argument("--v", required=True)
    sp.add_argument("--x0", type=_rational, default=Fraction(0))
    sp.add_argument("--order", type=_nonneg, default=min(order, 8))
    common(sp, "pretty")

    sp = sub.add_parser("weyl", help="normal-ordered powers of q(ad) a + v(ad), polynomial q and v")
    sp.add_argument("--q", required=True)
    sp.add_argument("--v", required=True)
    sp.add_argument("--nmax", type=_nonneg, default=min(order, 8))
    common(sp)

    sp = sub.add_parser("sheffer", help="Sheffer pair and polynomials from a flow or a pair")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--from-flow", action="store_true")
    src.add_argument("--from-pair", action="store_true")
    sp.add_argument("--q")
    sp.add_argument("--v")
    sp.add_argument("--A")
    sp.add_argument("--B")
    sp.add_argument("--zprime", type=_rational, default=Fraction(1))
    sp.add_argument("--nmax", type=_nonneg, default=min(order, 8))
    sp.add_argument("--z", type=_z_value, default=None, help="a rational or 'symbolic' (default)")
    common(sp)

    sp = sub.add_parser("sequence", help="a combinatorial sequence from the shipped catalog")
    sp.add_argument("--catalog", required=True, dest="entry")
    sp.add_argument("--r", type=int)
    sp.add_argument("--nmax", type=_nonneg, default=min(order, 8))
    sp.add_argument("--verify-oracle", action="store_true")
    common(sp, "csv")

    sp = sub.add_parser("verify", help="run the invariant suite")
    sp.add_argument("--all", action="store_true", required=True)
    sp.add_argument("--order", type=_nonneg, default=min(order, 8))
    common(sp, "pretty")
    return p


def _frac(x: Fraction) -> str:
    return format_fraction(x)


def _table(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_flow(args):
    if args.bivariate:
        sol = solve_flow_bivariate(args.q, args.v, args.x0, args.order, args.xorder)
    else:
        sol = solve_flow_expr(args.q, args.v, args.x0, args.order)
    report = None
    if args.check_group_law:
        biv = sol if sol.bivariate else solve_flow_bivariate(args.q, args.v, args.x0, args.order)
        report = group_law_check(biv)
    if args.format == "json":
        data = sol.to_json()
        if report is not None:
            data["group_law"] = report.to_json()
        text = _dump(data)
    elif args.format == "csv":
        rows = [["k", "T_k", "g_k"]]
        for k, (t, g) in enumerate(zip(sol.T.coeffs, sol.g.coeffs)):
            rows.append([k, render_series(t) if sol.bivariate else _frac(t), render_series(g) if sol.bivariate else _frac(g)])
        text = _table(rows)
    else:
        lines = [f"T = {render_series(sol.T)}", f"g = {render_series(sol.g)}"]
        if report is not None:
            lines.append(f"group law to order {report.order_checked}: {'holds' if report.passed else 'FAILS'}")
        text = "\n".join(lines) + "\n"
    if report is not None and not report.passed:
        return text, VerificationFailure(f"group law fails: {', '.join(report.mismatches[:5])}")
    return text, None


def cmd_normal_order(args):
    form = normal_order_exp(args.q, args.v, args.x0, args.order)
    if args.format == "json":
        return _dump(form.to_json()), None
    if args.format == "csv":
        return _table([["field", "value"], ["display", form.display], ["closed_form", form.closed_form or ""]]), None
    lines = [form.display]
    if form.closed_form:
        lines.append(f"closed form: {form.closed_form}")
    return "\n".join(lines) + "\n", None


def cmd_weyl(args):
    table = weyl_table(to_polynomial(args.q), to_polynomial(args.v), args.nmax)
    if args.format == "json":
        return _dump(table.to_json()), None
    if args.format == "csv":
        rows = [["n", "k", "coefficient"]]
        for n in range(table.n_max + 1):
            rows.append([n, 0, str(table.h[n])])
            for k in range(1, n + 1):
                rows.append([n, k, str(table.f_nk(n, k))])
        return _table(rows), None
    lines = []
    for n in range(table.n_max + 1):
        terms = [f"({table.h[n]})"] + [f"({table.f_nk(n, k)})*a^{k}" for k in range(1, n + 1)]
        lines.append(f"W^{n} = " + " + ".join(terms))
    return "\n".join(lines) + "\n", None


def cmd_sheffer(args):
    if args.from_flow:
        if args.q is None or args.v is None:
            raise UsageError("--from-flow needs --q and --v")
        pair = sheffer_from_flow(solve_flow_expr(args.q, args.v, args.zprime, max(args.nmax, 1)))
    else:
        if args.A is None or args.B is None:
            raise UsageError("--from-pair needs --A and --B")
        pair = ShefferPair.from_expressions(args.A, args.B, args.zprime, max(args.nmax, 1))
    polys = sheffer_polynomials(pair, args.nmax)
    values = None if args.z is None else sequence_values(pair, args.z, args.nmax).values
    if args.format == "json":
        data = {
            "zprime": _frac(pair.z_prime_star),
            "A": render_series(pair.A),
            "B": render_series(pair.B),
            "pair": pair.to_json(),
            "polynomials": [str(p) for p in polys],
        }
        if values is not None:
            data["z"] = _frac(args.z)
            data["values"] = [str(v) for v in values]
        return _dump(data), None
    if args.format == "csv":
        if values is None:
            return _table([["n", "S_n(z)"]] + [[n, str(p)] for n, p in enumerate(polys)]), None
        return _table([["n", "a(n)"]] + [[n, str(v)] for n, v in enumerate(values)]), None
    lines = [f"A = {render_series(pair.A)}", f"B = {render_series(pair.B)}"]
    lines += [f"S_{n}(z) = {p}" for n, p in enumerate(polys)]
    if values is not None:
        lines.append(f"a(n) at z = {_frac(args.z)}: " + ", ".join(str(v) for v in values))
    return "\n".join(lines) + "\n", None


def cmd_sequence(args):
    result = catalog(args.entry, args.nmax, r=args.r, verify_oracle=args.verify_oracle)
    if args.format == "json":
        return _dump(result.to_json()), None
    if args.format == "csv":
        return result.to_csv(), None
    lines = [f"{result.name}: " + ", ".join(str(v) for v in result.values)]
    if result.oracle is not None:
        lines.append("oracle agrees")
    lines += [f"note: {a}" for a in result.annotations]
    return "\n".join(lines) + "\n", None


def cmd_verify(args):
    results = run_all(args.order)
    failed = [r for r in results if not r.passed]
    if args.format == "json":
        text = _dump({"order": args.order, "passed": not failed, "checks": [r.to_json() for r in results]})
    elif args.format == "csv":
        text = _table([["check", "passed", "detail"]] + [[r.name, r.passed, r.detail] for r in results])
    else:
        text = "".join(f"{'PASS' if r.passed else 'FAIL'} {r.name}{': ' + r.detail if r.detail else ''}\n" for r in results)
    if failed:
        return text, VerificationFailure(f"{len(failed)} of {len(results)} checks failed")
    return text, None


COMMANDS = {
    "flow": cmd_flow,
    "normal-order": cmd_normal_order,
    "weyl": cmd_weyl,
    "sheffer": cmd_sheffer,
    "sequence": cmd_sequence,
    "verify": cmd_verify,
}


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, failure = COMMANDS[args.command](args)
        _emit(text, args.output)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"precondition violated ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 3
    if failure is not None:
        print(f"verification failed: {failure}", file=sys.stderr)
        return 3
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
