"""Command-line interface: build, verify, scan, report.

Exit codes: 0 success, 1 verification failure, 2 class-C rejection, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .groups import ClosureCapExceeded
from .pipeline import (
    CHECKS,
    ConfigError,
    PipelineConfig,
    build_bundle,
    report_text,
    run_report,
    scan_alignments,
)
from .sandwich import NotClassC, RestrictionError
from .serialize import BundleError, canonical_json, dumps_bundle, loads_bundle

EXIT_OK, EXIT_FAIL, EXIT_NOT_CLASS_C, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _rank(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"rank must be an integer, got {text!r}") from None


def _hstar(text: str) -> list[Fraction]:
    try:
        parts = [p for p in text.replace(" ", "").split(",") if p]
        return [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"h* must be comma-separated rationals, got {text!r}") from None


def _checks(text: str) -> list[str]:
    if text == "all":
        return list(CHECKS)
    names = [c.strip() for c in text.split(",") if c.strip()]
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    return names


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        v = 0
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sandwich", description="Weyl groups of class-C sandwich algebras in exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def ambient_args(sp):
        sp.add_argument("--ambient", required=True, help="root system type: A B C D E F G")
        sp.add_argument("--rank", type=_rank, default=None, help="rank (implied for E6/E7/E8 labels, F4, G2)")

    def group_args(sp):
        sp.add_argument("--checks", type=_checks, default=list(CHECKS), help="comma-separated check names or 'all'")
        sp.add_argument("--workers", type=_positive, default=1, help="threads used for group closure")
        sp.add_argument("--cap", type=_positive, default=None, help="closure cap (default: $SANDWICH_CAP or 10^7)")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")

    b = sub.add_parser("build", help="align, check class C, restrict; write a bundle")
    ambient_args(b)
    b.add_argument("--hstar", type=_hstar, required=True, help="grading vector, e.g. 1,0,0")
    b.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="run checks on a bundle")
    v.add_argument("bundle", help="bundle JSON file, or - for stdin")
    group_args(v)

    s = sub.add_parser("scan", help="list class-C grading vectors with small integer entries")
    ambient_args(s)
    s.add_argument("--bound", type=_positive, default=2)

    r = sub.add_parser("report", help="build and verify in one step")
    ambient_args(r)
    r.add_argument("--hstar", type=_hstar, required=True)
    group_args(r)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _reject(exc: NotClassC) -> int:
    print(canonical_json({"error": "not class C", "center": exc.center.to_dict()}), file=sys.stderr)
    return EXIT_NOT_CLASS_C


def _verify_output(report: dict, fmt: str) -> str:
    if fmt == "text":
        return report_text(report)
    return json.dumps(report, sort_keys=True, indent=2)


def cmd_build(args) -> int:
    try:
        bundle = build_bundle(args.ambient, args.rank, args.hstar)
    except NotClassC as exc:
        return _reject(exc)
    _emit(dumps_bundle(bundle, indent=2), args.out)
    return EXIT_OK


def _run(bundle, args, config: dict) -> int:
    report = run_report(bundle, args.checks, cap=args.cap, workers=args.workers, config=config)
    _emit(_verify_output(report, args.format), args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        if args.bundle == "-":
            text = sys.stdin.read()
        else:
            with open(args.bundle, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read bundle: {exc}") from exc
    try:
        bundle = loads_bundle(text)
    except BundleError as exc:
        raise UsageError(str(exc)) from exc
    return _run(bundle, args, {"bundle": args.bundle if args.bundle == "-" else "file", "checks": list(args.checks)})


def cmd_report(args) -> int:
    cfg = PipelineConfig(args.ambient, args.rank, list(args.hstar), list(args.checks), args.format, args.cap, args.workers)
    cfg.validate()
    try:
        bundle = build_bundle(args.ambient, args.rank, args.hstar)
    except NotClassC as exc:
        return _reject(exc)
    return _run(bundle, args, cfg.to_dict())


def cmd_scan(args) -> int:
    rows = scan_alignments(args.ambient, args.rank, args.bound)
    print(canonical_json({"ambient": args.ambient, "rank": args.rank, "bound": args.bound, "alignments": rows}))
    return EXIT_OK


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "scan": cmd_scan, "report": cmd_report}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"sandwich: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RestrictionError as exc:
        print(f"sandwich: restriction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ClosureCapExceeded as exc:
        print(f"sandwich: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
