"""Command-line front end.

Every subcommand prints a report; exit status is 0 on success, 1 when a
verification fails (the report is still written) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import appendix_cmp, exact_arith, free_lie, kv_core, trace_eq
from .exact_arith import Series1, as_rational, rational_str

ORDER_CAP = 12
SERIES_NAMES = ("phi1", "psi", "beta", "gamma", "gamma_odd", "R", "gamma_vergne", "gamma_am")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _csv_rows(report: dict) -> list[list]:
    if "coeffs" in report and isinstance(report["coeffs"], list):
        return [["degree", "coefficient"]] + [[k, c] for k, c in enumerate(report["coeffs"])]
    rows = [["key", "value"]]
    for key in sorted(report):
        value = report[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, separators=(",", ":"))
        rows.append([key, value])
    return rows


def _pretty(report: dict) -> str:
    if "pretty" in report:
        return report["pretty"]
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        body = {k: v for k, v in report.items() if k != "pretty"}
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_csv_rows(report))
        return buf.getvalue()
    if fmt == "pretty":
        return _pretty(report) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def emit(report: dict, fmt: str, sink=None) -> None:
    """Write a report; ``sink`` is a path, a text stream, or None for stdout."""
    text = render(report, fmt)
    if sink is None:
        sys.stdout.write(text)
    elif isinstance(sink, str):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sink.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _series_by_name(name: str, alpha: Fraction, order: int) -> Series1:
    if name == "phi1":
        return exact_arith.phi1_series(order)
    if name == "psi":
        return exact_arith.psi_series(order)
    if name == "beta":
        return kv_core.beta_series(alpha, order)
    if name == "gamma":
        return kv_core.gamma_series(alpha, order)
    if name == "gamma_odd":
        return kv_core.gamma_odd_series(alpha, order)
    if name == "R":
        return appendix_cmp.r_series(order)
    if name == "gamma_vergne":
        return appendix_cmp.gamma_vergne(order)
    if name == "gamma_am":
        return appendix_cmp.am_gamma_series(order)
    raise UsageError(f"unknown series {name!r}")


def cmd_series(args) -> dict:
    s = _series_by_name(args.name, args.alpha, args.order)
    report = {"name": args.name, "order": args.order, "coeffs": s.to_json(), "pretty": s.pretty()}
    if args.name in ("beta", "gamma", "gamma_odd"):
        report["alpha"] = rational_str(args.alpha)
    report["pass"] = True
    return report


def cmd_bch(args) -> dict:
    z = free_lie.bch(args.order)
    report = {"check": "bch", "order": args.order, "hall_coords": z.to_json()}
    ok = True
    if args.dynkin:
        ok = z == free_lie.dynkin_bch(args.order)
        report["dynkin_agrees"] = ok
    report["pass"] = ok
    terms = z.hall_terms()
    report["pretty"] = " + ".join(f"({rational_str(c)}){w}" for w, c in terms.items())
    return report


def cmd_hall(args) -> dict:
    words = free_lie.hall_basis(args.order)
    counts = {}
    for w in words:
        counts[w.degree] = counts.get(w.degree, 0) + 1
    witt = {d: free_lie.witt_dimension(d) for d in range(1, args.order + 1)}
    ok = all(counts.get(d, 0) == witt[d] for d in witt)
    return {
        "check": "hall",
        "order": args.order,
        "words": [str(w) for w in words],
        "counts": [counts.get(d, 0) for d in range(1, args.order + 1)],
        "witt": [witt[d] for d in range(1, args.order + 1)],
        "pass": ok,
        "pretty": "\n".join(f"{w.degree}\t{w}" for w in words),
    }


def cmd_verify_eq1(args) -> dict:
    jet = kv_core.kv_jet(args.alpha, args.order, args.convention)
    report = kv_core.verify_eq1_jet(jet, args.order)
    if args.scan_conventions:
        report["convention_scan"] = kv_core.select_pi_convention(args.alpha, args.order)["results"]
    return report


def cmd_verify_d2(args) -> dict:
    if args.order < 3:
        raise UsageError("verify-d2 needs --order >= 3")
    return kv_core.verify_lemma_d2_report(args.order)


def cmd_verify_trace(args) -> dict:
    gamma = kv_core.gamma_series(args.alpha, args.order)
    return trace_eq.verify_eq2_linearized(args.alpha, gamma, args.rho, args.order)


def cmd_verify_symmetry(args) -> dict:
    return kv_core.verify_symmetry_order1_report(args.alpha, args.order)


def cmd_independence(args) -> dict:
    n_values = [args.n] if args.n is not None else None
    l14 = {}
    skew = {}
    if n_values is None:
        l14_ns = [n for n in range(args.order) if 2 * n + 3 <= args.order]
        skew_ns = [n for n in range(1, args.order - 1)]
    else:
        l14_ns = skew_ns = n_values
    for n in l14_ns:
        if 2 * n + 3 > args.order:
            raise UsageError(f"lemma check for n={n} needs --order >= {2 * n + 3}")
        l14[str(n)] = kv_core.lemma_l14_check(n)
    for n in skew_ns:
        if n + 2 > args.order or n < 1:
            raise UsageError(f"skew injectivity for n={n} needs n >= 1 and --order >= {n + 2}")
        skew[str(n)] = kv_core.skew_injectivity_check(n)
    return {
        "check": "independence",
        "order": args.order,
        "lemma_l14": l14,
        "skew_injectivity": skew,
        "pass": all(l14.values()) and all(skew.values()),
    }


def _parse_perturbation(text: str) -> tuple[int, Fraction]:
    try:
        k, c = text.split(":", 1)
        return int(k), as_rational(c)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"perturbation must look like 'k:p/q', got {text!r}") from exc


def cmd_f_check(args) -> dict:
    f_order = args.order + 1
    f = exact_arith.psi_series(f_order)
    for text in args.perturb or ():
        k, c = _parse_perturbation(text)
        f = f + Series1.monomial(k, f_order, c)
    gamma_f, consistent = trace_eq.f_consistency_check(f, args.alpha, args.order)
    first = None
    if not consistent:
        if f[0] != 0:
            first = {"series": "f", "degree": 0, "value": rational_str(f[0])}
        else:
            odd = exact_arith.parity_split(gamma_f)[1]
            ref = kv_core.gamma_odd_series(args.alpha, gamma_f.order)
            k = next(k for k in range(gamma_f.order + 1) if odd[k] != ref[k])
            first = {"series": "gamma_f_odd", "degree": k, "value": rational_str(odd[k]), "expected": rational_str(ref[k])}
    return {
        "check": "f_check",
        "order": args.order,
        "alpha": rational_str(args.alpha),
        "f": f.to_json(),
        "gamma_f": gamma_f.to_json(),
        "consistent": consistent,
        "first_failure": first,
        "pass": consistent,
    }


def cmd_compare_appendix(args) -> dict:
    if args.order < 4:
        raise UsageError("compare-appendix needs --order >= 4")
    return appendix_cmp.compare_solutions_report(args.order)


# ---------------------------------------------------------------------------
# parser


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational 'p/q', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=8, help="truncation degree (default 8)")
    common.add_argument("--alpha", type=_rational_arg, default=Fraction(1, 4), help="alpha as p/q (default 1/4)")
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--output", default=None, help="write the report to this file")
    common.add_argument("--unsafe-order", action="store_true", help=f"allow --order above {ORDER_CAP}")

    parser = argparse.ArgumentParser(prog="kvjet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", parents=[common], help="coefficients of a named series")
    p.add_argument("--name", choices=SERIES_NAMES, required=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("bch", parents=[common], help="Campbell-Hausdorff series in Hall coordinates")
    p.add_argument("--dynkin", action="store_true", help="cross-check against Dynkin's formula")
    p.set_defaults(func=cmd_bch)

    p = sub.add_parser("hall", parents=[common], help="Hall basis up to --order")
    p.set_defaults(func=cmd_hall)

    p = sub.add_parser("verify-eq1", parents=[common], help="first KV equation on the jet")
    p.add_argument("--convention", choices=[c.value for c in kv_core.PiConvention], default=None)
    p.add_argument("--scan-conventions", action="store_true")
    p.set_defaults(func=cmd_verify_eq1)

    p = sub.add_parser("verify-d2", parents=[common], help="second derivative of ln(exp(sY)exp(X))")
    p.set_defaults(func=cmd_verify_d2)

    p = sub.add_parser("verify-trace", parents=[common], help="trace equation linearized in epsilon")
    p.add_argument("--rho", type=_rational_arg, default=Fraction(0))
    p.set_defaults(func=cmd_verify_trace)

    p = sub.add_parser("verify-symmetry", parents=[common], help="symmetry at order one")
    p.set_defaults(func=cmd_verify_symmetry)

    p = sub.add_parser("independence", parents=[common], help="independence lemmas in L(x,y)")
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_independence)

    p = sub.add_parser("f-check", parents=[common], help="consistency of the f-variant")
    p.add_argument("--perturb", action="append", metavar="K:C", help="add C t^K to psi (repeatable)")
    p.set_defaults(func=cmd_f_check)

    p = sub.add_parser("compare-appendix", parents=[common], help="Vergne / AM / universal comparison")
    p.set_defaults(func=cmd_compare_appendix)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        if args.order < 1:
            raise UsageError("--order must be >= 1")
        if args.order > ORDER_CAP and not args.unsafe_order:
            raise UsageError(f"--order {args.order} exceeds the cap {ORDER_CAP}; pass --unsafe-order to override")
        report = args.func(args)
    except UsageError as exc:
        print(f"kvjet: error: {exc}", file=sys.stderr)
        return 2
    try:
        emit(report, args.format, args.output)
    except OSError as exc:
        print(f"kvjet: error: {exc}", file=sys.stderr)
        return 1
    return 0 if report.get("pass", True) else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
