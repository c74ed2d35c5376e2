"""``hodgeham`` command line: hodge tables, verification suites, report diffs.

Exit codes: 0 every check passed, 1 some check failed, 2 usage error,
3 a block exceeded the dimension cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import suites
from .hochschild import DEFAULT_CAP, ResourceCapExceeded, default_jobs, hodge_table
from .kaehler import omega_table
from .monomial import ModuleKind
from .report import Check, HodgeReport, SchemaError, diff_reports, load_report

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hodgeham", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--module", default="regular", help="regular | trunc:M | var:I")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=_positive, help="worker processes (default: HODGEHAM_JOBS or CPU count)")

    hodge = sub.add_parser("hodge", parents=[common], help="Hodge-resolved homology table with checks")
    hodge.add_argument("--k", type=_positive, required=True, help="number of variables")
    hodge.add_argument("--nmax", type=_positive, required=True)
    hodge.add_argument("--degmax", type=_nonneg, required=True)
    hodge.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="largest cell (sum of three block dims)")

    verify = sub.add_parser("verify", parents=[common], help="run a named invariant suite")
    verify.add_argument("suite_pos", nargs="?", metavar="SUITE", help=", ".join(suites.SUITES))
    verify.add_argument("--suite")
    verify.add_argument("--k", type=_positive)
    verify.add_argument("--nmax", type=_positive)
    verify.add_argument("--degmax", type=_nonneg)
    verify.add_argument("--p", type=_nonneg, default=0, help="prime (0 for rationals), deriv-growth only")

    diff = sub.add_parser("diff", help="compare two JSON reports")
    diff.add_argument("a")
    diff.add_argument("b")
    return parser


def _jobs(args) -> int:
    if args.jobs is not None:
        return args.jobs
    try:
        return default_jobs()
    except ValueError:
        raise UsageError("HODGEHAM_JOBS must be an integer") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_checks(checks: list[Check], stream) -> None:
    for c in checks:
        line = f"{c.status.upper()} {c.name}"
        if not c.passed and c.witness:
            line += f"  witness: {c.witness}"
        print(line, file=stream)
        if c.detail:
            print(f"  {c.detail}", file=stream)


def cmd_hodge(args) -> int:
    try:
        module = ModuleKind.parse(args.module, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    jobs = _jobs(args)
    try:
        report = hodge_table(args.k, args.nmax, args.degmax, module, cap=args.cap, jobs=jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(report.render(args.format), args.out)
    failed = [c for c in report.checks if not c.passed]
    _print_checks(failed, sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    name = args.suite or args.suite_pos
    if args.suite and args.suite_pos and args.suite != args.suite_pos:
        raise UsageError("suite given twice with different names")
    if name not in suites.SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(suites.SUITES)}")
    cfg = suites.SuiteConfig(args.k, args.nmax, args.degmax, args.module, args.p, _jobs(args))
    k, module = suites.suite_algebra(name, cfg)
    try:
        ModuleKind.parse(module, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    checks = suites.run_suite(name, cfg)
    _print_checks(checks, sys.stdout)
    if args.out:
        if args.format == "csv" and name in ("kunneth-omega", "hh1-iso"):
            text = omega_table(k, suites.resolved_config(name, cfg).deg_max)
        else:
            text = HodgeReport(k, module, [], checks).render(args.format)
        _emit(text, args.out)
    return EXIT_PASS if all(c.passed for c in checks) else EXIT_FAIL


def cmd_diff(args) -> int:
    try:
        a, b = load_report(args.a), load_report(args.b)
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    problems = diff_reports(a, b)
    for line in problems:
        print(line)
    return EXIT_FAIL if problems else EXIT_PASS


COMMANDS = {"hodge": cmd_hodge, "verify": cmd_verify, "diff": cmd_diff}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hodgeham: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapExceeded as exc:
        print(f"hodgeham: refused: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
