"""Command-line front end: ``prove``, ``check`` and ``bruteforce``.

Stdout carries only the stable key=value rows (one ITER row per size step,
one final RESULT row, plus SURVIVOR rows when requested), so runs can be
diffed byte for byte.  The text report adds timing lines on stderr; the
machine report adds nothing.  Exit codes: 0 for a yes/no result, 2 for
maybe, 1 for usage or I/O errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .driver import (
    Answer,
    BudgetExceededError,
    IterationStats,
    RunReport,
    brute_force_min_size,
    default_size_budget,
    generate_and_prune,
)
from .networks import MAX_CHANNELS, CapacityError, format_network
from .witnesslog import LogReader, LogWriter


class _Parser(argparse.ArgumentParser):
    # Usage problems are exit code 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def render_result(answer: Answer) -> str:
    if answer.kind == "yes":
        return f"RESULT yes n={answer.n} k={answer.k}"
    if answer.kind == "no":
        size = len(answer.survivors) if answer.survivors is not None else 0
        return f"RESULT no n={answer.n} k={answer.k} |R|={size}"
    return "RESULT maybe"


def render_iteration(s: IterationStats) -> str:
    return (
        f"ITER k={s.k} |N|={s.candidates} |R|={s.survivors} "
        f"witnesses_used={s.witnesses_used} witnesses_skipped={s.witnesses_skipped}"
    )


def _print_timings(report: RunReport) -> None:
    for s in report.iterations:
        print(
            f"# iter k={s.k} generate={s.generate_seconds:.3f}s "
            f"prune={s.prune_seconds:.3f}s",
            file=sys.stderr,
        )
    print(f"# total {report.total_seconds():.3f}s", file=sys.stderr)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-n", type=int, required=True, dest="n",
                     help="number of channels (0..%d)" % MAX_CHANNELS)
    sub.add_argument("--max-size", type=int, default=None,
                     help="size budget (default: best known size + 1)")
    sub.add_argument("--report", choices=("text", "machine"), default="text",
                     help="text adds timing lines on stderr")


def build_parser() -> _Parser:
    parser = _Parser(prog="sortnet",
                     description="Optimal-size sorting network prover/checker")
    subs = parser.add_subparsers(dest="command", required=True)

    prove = subs.add_parser("prove", parents=[], help="run the search, emit witnesses")
    _add_common(prove)
    prove.add_argument("--emit", metavar="PATH", default=None,
                       help="write the witness log here")
    prove.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="worker processes for the pruning step")
    prove.add_argument("--dump-survivors", action="store_true",
                       help="on a no answer, print one SURVIVOR row per network")
    prove.set_defaults(func=cmd_prove)

    check = subs.add_parser("check", help="replay an untrusted witness log")
    _add_common(check)
    check.add_argument("--oracle", metavar="PATH", required=True,
                       help="witness log to replay")
    check.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="accepted for symmetry; checking is sequential")
    check.add_argument("--dump-survivors", action="store_true",
                       help="on a no answer, print one SURVIVOR row per network")
    check.set_defaults(func=cmd_check)

    brute = subs.add_parser("bruteforce", help="independent exhaustive cross-check")
    _add_common(brute)
    brute.set_defaults(func=cmd_bruteforce)
    return parser


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_CHANNELS:
        raise CapacityError(f"-n must be in 0..{MAX_CHANNELS}, got {n}")


def _finish(args, answer: Answer, report: RunReport) -> int:
    print(render_result(answer))
    if answer.kind == "no" and getattr(args, "dump_survivors", False):
        for net in answer.survivors.members:
            print(f"SURVIVOR {format_network(net)}")
    sys.stdout.flush()
    if args.report == "text":
        _print_timings(report)
    return 0 if answer.kind in ("yes", "no") else 2


def cmd_prove(args) -> int:
    _check_n(args.n)
    max_size = default_size_budget(args.n) if args.max_size is None else args.max_size
    emit_fp = open(args.emit, "wb") if args.emit else None
    try:
        sink = LogWriter(emit_fp, args.n) if emit_fp else None
        outcome = generate_and_prune(
            args.n,
            max_size,
            "prover",
            witness_sink=sink,
            threads=max(1, args.threads),
            progress=lambda s: print(render_iteration(s), flush=True),
        )
    finally:
        if emit_fp:
            emit_fp.close()
    return _finish(args, outcome.answer, outcome.report)


def cmd_check(args) -> int:
    _check_n(args.n)
    max_size = default_size_budget(args.n) if args.max_size is None else args.max_size
    with open(args.oracle, "rb") as fp:
        outcome = generate_and_prune(
            args.n,
            max_size,
            "checker",
            oracle=LogReader(fp),
            progress=lambda s: print(render_iteration(s), flush=True),
        )
    return _finish(args, outcome.answer, outcome.report)


def cmd_bruteforce(args) -> int:
    _check_n(args.n)
    max_size = default_size_budget(args.n) if args.max_size is None else args.max_size
    k = brute_force_min_size(args.n, max_size)
    if k is not None:
        print(f"RESULT yes n={args.n} k={k}")
    else:
        print(f"RESULT no n={args.n} k={max_size}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CapacityError, BudgetExceededError, ValueError) as exc:
        print(f"sortnet: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"sortnet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
