"""Command line front end.

    expower <command> FILE [--degree-bound D] [--truncation T] [--seed S]
                           [--format human|machine] [--parallel N] [--timing]
    expower selftest [--format ...]
    expower generate [--seed S] [--count N] [--kinds mulind,ldim,...]

Exit codes: 0 all PASS, 1 some FAIL, 2 some INCONCLUSIVE and no FAIL,
3 parse or usage error (and any check that raised an ERROR).
"""

import argparse
import sys

from .commands import COMMAND_KINDS, run_file
from .instance import InstanceError, parse_instance
from .report import Report

USAGE_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _report_flags(p):
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--timing", action="store_true",
                   help="add per-section wall-clock seconds (reports stop being byte-identical)")
    p.add_argument("--output", "-o", help="write the report to this file instead of stdout")


def build_parser():
    parser = _Parser(prog="expower", description="Exact checks for exponential fields "
                     "with raising to powers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMAND_KINDS:
        p = sub.add_parser(name, help=f"run the {', '.join(COMMAND_KINDS[name])} sections of FILE")
        p.add_argument("file", help="instance file ('-' reads stdin)")
        p.add_argument("--degree-bound", type=int, dest="D", metavar="D",
                       help="degree bound for relation searches (default 4, or the file's D=)")
        p.add_argument("--truncation", type=int, dest="T", metavar="T",
                       help="series truncation order (default 16, or the file's T=)")
        p.add_argument("--seed", type=int, help="seed for randomized steps (default 0)")
        p.add_argument("--parallel", type=int, default=1, metavar="N",
                       help="run sections in N worker processes")
        _report_flags(p)
    p = sub.add_parser("selftest", help="run the built-in golden examples")
    _report_flags(p)
    p = sub.add_parser("generate", help="print a random instance file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=5, help="sections per kind")
    p.add_argument("--kinds", default="mulind,ldim,chain,ax",
                   help="comma-separated section kinds")
    return parser


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "generate":
        from .generators import generate_instance

        try:
            kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
            sys.stdout.write(generate_instance(args.seed, args.count, kinds))
        except ValueError as exc:
            print(f"expower: {exc}", file=sys.stderr)
            return USAGE_ERROR
        return 0

    if args.command == "selftest":
        from .selftest import run_selftest

        report = Report("selftest", run_selftest())
        _emit(report.render(args.format, args.timing), args.output)
        return report.exit_code

    for flag in ("D", "T", "parallel"):
        value = getattr(args, flag)
        if value is not None and value < 1:
            parser.error(f"{flag if flag != 'parallel' else '--parallel'} must be positive")
    if args.seed is not None and args.seed < 0:
        parser.error("--seed must be non-negative")
    try:
        instance = parse_instance(_read(args.file))
    except OSError as exc:
        print(f"expower: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except InstanceError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    overrides = {"D": args.D, "T": args.T, "seed": args.seed}
    report = Report(args.command, run_file(instance, args.command, overrides, args.parallel))
    _emit(report.render(args.format, args.timing), args.output)
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
