"""Command-line front end.

Exit status: 0 success, 1 stuck / disagreement / failed proof, 2 out of
fuel, 3 invalid program, term, core or script, 4 usage error.
"""
from __future__ import annotations

import argparse
import sys
import threading

from .coretype import builtin_core, describe_support, parse_core
from .deduction import check_script
from .equations import parse_program
from .errors import EqError, NotGroundTyped
from .reducer import OutOfFuel, ReduceConfig, Stuck, Value, differential, outcome_summary, reduce
from .signature import FnType, format_type
from .terms import infer_type, parse_term, print_term

OK, STUCK, OUT_OF_FUEL, INVALID, USAGE = 0, 1, 2, 3, 4
BUILTIN_CORES = ("eager", "lazy", "miranda")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eqsem", description="Evaluate and reason about typed equation systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text, needs_term=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("program", help="program file (.eq)")
        if needs_term:
            p.add_argument("--term", required=True, help="closed term of ground type")
        return p

    command("check", "validate a program and print its symbol table", needs_term=False)

    ev = command("eval", "reduce a term to a value")
    _semantics_arg(ev)
    _fuel_arg(ev)
    ev.add_argument("--trace", action="store_true", help="print every iterate")
    ev.add_argument("--max-trace", type=_positive, metavar="N", help="print at most N trace lines")
    ev.add_argument(
        "--detect-cycles", type=_positive, nargs="?", const=1024, default=0, metavar="WINDOW",
        help="also stop on cycles longer than one step among the last WINDOW iterates",
    )

    sp = command("support", "is a term in the support system of a core type?")
    _semantics_arg(sp)

    df = command("diff", "reduce under several core types and compare the values")
    df.add_argument("--cores", default=",".join(BUILTIN_CORES),
                    help="comma-separated semantics (eager, lazy, miranda or @file)")
    _fuel_arg(df)

    pr = command("prove", "check an equational-reasoning script", needs_term=False)
    pr.add_argument("--proof", required=True, help="proof script (.eqp)")
    _semantics_arg(pr)
    return parser


def _semantics_arg(p):
    p.add_argument("--semantics", default="lazy",
                   help="eager, lazy (default), miranda, or @path to a core file")


def _fuel_arg(p):
    p.add_argument("--fuel", type=_positive, default=100_000, help="maximum number of steps")


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _core(selector: str, sig):
    if selector.startswith("@"):
        return parse_core(_read(selector[1:]), sig)
    if selector not in BUILTIN_CORES:
        raise UsageError(f"unknown semantics {selector!r}")
    return builtin_core(selector, sig)


def _term(text: str, system):
    t = parse_term(text, system.env, system.signature)
    ty = infer_type(t, system.env, system.signature)
    if isinstance(ty, FnType):
        raise NotGroundTyped(f"{text} has functional type {format_type(ty)}")
    return t


def run(args, out=None) -> int:
    out = out or sys.stdout
    sig, system = parse_program(_read(args.program))
    match args.command:
        case "check":
            for line in system.describe():
                print(line, file=out)
            return OK
        case "eval":
            core = _core(args.semantics, sig)
            t = _term(args.term, system)
            config = ReduceConfig(core, args.fuel, record_trace=args.trace,
                                  detect_cycles=args.detect_cycles)
            outcome = reduce(t, system, config)
            print(outcome_summary(outcome), file=out)
            trace = outcome.trace
            if args.max_trace is not None and len(trace) > args.max_trace:
                print(f"trace truncated to {args.max_trace} of {len(trace)} lines", file=sys.stderr)
                trace = trace[: args.max_trace]
            for n, term in enumerate(trace):
                print(f"{n}: {print_term(term)}", file=out)
            return _status(outcome)
        case "support":
            core = _core(args.semantics, sig)
            print(describe_support(_term(args.term, system), core), file=out)
            return OK
        case "diff":
            cores = [_core(s.strip(), sig) for s in args.cores.split(",") if s.strip()]
            if len(cores) < 2:
                raise UsageError("--cores needs at least two semantics")
            report = differential(_term(args.term, system), system, cores, args.fuel)
            for label, outcome in report.outcomes.items():
                print(f"{label}: {outcome_summary(outcome)}", file=out)
            if report.agreed:
                print("agreement", file=out)
                return OK
            for v in report.violations:
                print(f"disagreement: {v.first} gives {print_term(v.first_value)},"
                      f" {v.second} gives {print_term(v.second_value)}", file=out)
            return STUCK
        case "prove":
            core = _core(args.semantics, sig)
            verdict = check_script(_read(args.proof), system, core)
            print(verdict, file=out)
            return OK if verdict.ok else STUCK
    raise UsageError(f"unknown command {args.command!r}")


def _status(outcome) -> int:
    match outcome:
        case Value():
            return OK
        case Stuck():
            return STUCK
        case OutOfFuel():
            return OUT_OF_FUEL
    raise TypeError(outcome)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    result = []

    def target():
        try:
            result.append(run(args))
        except UsageError as e:
            print(f"eqsem: {e}", file=sys.stderr)
            result.append(USAGE)
        except EqError as e:
            print(f"eqsem: {type(e).__name__}: {e}", file=sys.stderr)
            result.append(INVALID)

    # deep terms need deep recursion; give it a thread with a large stack
    sys.setrecursionlimit(1_000_000)
    threading.stack_size(512 * 1024 * 1024)
    worker = threading.Thread(target=target)
    worker.start()
    worker.join()
    return result[0] if result else INVALID


if __name__ == "__main__":
    sys.exit(main())
