"""Command-line interface: synthesize, classify, run and query monitors.

Exit codes: ``run`` encodes the final verdict (0 TOP, 1 BOT, 2 ?, 3 x) so
shell pipelines can branch on monitor outcomes; every command uses 64 for
usage errors and 65 for data errors (unparsable formulas, bad files).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .fsm import Verdict, synthesize_monitor
from .formats import emit_dot, emit_monitor, parse_monitor, parse_trace
from .ltl import Alphabet, Formula, atoms_in_order, parse_formula, LassoWord, lasso_eval
from .partial import classify, partialize
from .runtime import run_trace

EX_OK = 0
EX_USAGE = 64
EX_DATAERR = 65

_VERDICT_EXIT = {Verdict.TOP: 0, Verdict.BOT: 1, Verdict.UNKNOWN: 2, Verdict.GIVEUP: 3}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _split_events(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _load_formula(args) -> tuple[Formula, Alphabet]:
    """Parse the formula against an explicit or inferred alphabet."""
    if getattr(args, "alphabet", None):
        alphabet = Alphabet(_split_events(args.alphabet))
        return parse_formula(args.formula, alphabet), alphabet
    phi = parse_formula(args.formula)
    names = atoms_in_order(phi)
    if not names:
        raise ValueError(
            "cannot infer an alphabet from a formula without events; use -a"
        )
    return phi, Alphabet(names)


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _add_formula_options(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("-f", "--formula", required=required, help="LTL formula text")
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "-a",
        "--alphabet",
        help="comma-separated event names, e.g. ev1,ev2,ev3",
    )
    group.add_argument(
        "--infer-alphabet",
        action="store_true",
        help="use the formula's events, in order of first occurrence",
    )


def _require_alphabet_choice(parser: argparse.ArgumentParser, args) -> None:
    if not args.alphabet and not args.infer_alphabet:
        parser.error("one of -a/--alphabet or --infer-alphabet is required")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="partmon", description="Partial monitors for LTL properties")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    synth = sub.add_parser("synth", help="synthesize a partial monitor and write it as PMF")
    _add_formula_options(synth)
    synth.add_argument("-o", "--output", default="-", help="PMF output path (default stdout)")
    synth.add_argument("--dot", help="also write a Graphviz rendering to this path")
    synth.add_argument(
        "--no-minimize",
        action="store_true",
        help="skip Moore minimization (debugging aid)",
    )

    cls = sub.add_parser("classify", help="report what the monitor can still conclude")
    _add_formula_options(cls)

    run = sub.add_parser("run", help="replay a trace file through a monitor")
    run.add_argument("-m", "--monitor", help="PMF monitor file")
    _add_formula_options(run, required=False)
    run.add_argument("-t", "--trace", required=True, help="trace file path (- for stdin)")
    run.add_argument(
        "--stop-early",
        action="store_true",
        help="stop consuming events at the first conclusive or give-up verdict",
    )

    oracle = sub.add_parser(
        "oracle", help="evaluate a formula on an ultimately periodic word"
    )
    oracle.add_argument("-f", "--formula", required=True, help="LTL formula text")
    oracle.add_argument("-a", "--alphabet", help="comma-separated event names")
    oracle.add_argument("--stem", default="", help="comma-separated finite prefix (may be empty)")
    oracle.add_argument("--loop", required=True, help="comma-separated loop, repeated forever")
    return parser


def _cmd_synth(args) -> int:
    phi, alphabet = _load_formula(args)
    machine = partialize(
        synthesize_monitor(phi, alphabet, minimize=not args.no_minimize)
    )
    _write_text(args.output, emit_monitor(machine))
    if args.dot:
        _write_text(args.dot, emit_dot(machine))
    return EX_OK


def _cmd_classify(args) -> int:
    phi, alphabet = _load_formula(args)
    report = classify(partialize(synthesize_monitor(phi, alphabet)))
    print(json.dumps(report.as_dict(), indent=2))
    return EX_OK


def _cmd_run(parser: argparse.ArgumentParser, args) -> int:
    if bool(args.monitor) == bool(args.formula):
        parser.error("exactly one of -m/--monitor or -f/--formula is required")
    if args.monitor:
        machine = parse_monitor(_read_text(args.monitor))
        if not machine.partial:
            machine = partialize(machine)
    else:
        _require_alphabet_choice(parser, args)
        phi, alphabet = _load_formula(args)
        machine = partialize(synthesize_monitor(phi, alphabet))
    trace = parse_trace(_read_text(args.trace), machine.alphabet)
    results = run_trace(machine, trace, stop_early=args.stop_early)
    for position, verdict in results:
        print(f"{position} {trace[position - 1]} {verdict.text}")
    final = results[-1][1] if results else machine.output(machine.initial)
    print(f"FINAL {final.text}")
    return _VERDICT_EXIT[final]


def _cmd_oracle(args) -> int:
    if args.alphabet:
        alphabet = Alphabet(_split_events(args.alphabet))
        phi = parse_formula(args.formula, alphabet)
    else:
        phi = parse_formula(args.formula)
        alphabet = None
    stem = _split_events(args.stem)
    loop = _split_events(args.loop)
    if alphabet is not None:
        for event in stem + loop:
            alphabet.index(event)  # raises UnknownEventError
    word = LassoWord(tuple(stem), tuple(loop))
    print("SAT" if lasso_eval(phi, word) else "UNSAT")
    return EX_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            _require_alphabet_choice(parser, args)
            return _cmd_synth(args)
        if args.command == "classify":
            _require_alphabet_choice(parser, args)
            return _cmd_classify(args)
        if args.command == "run":
            return _cmd_run(parser, args)
        if args.command == "oracle":
            return _cmd_oracle(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
