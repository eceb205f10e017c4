"""Command-line frontend.

Reads a script (file or stdin), answers each ``(check-sat)`` with ``sat``,
``unsat`` or ``unknown`` and each ``(get-model)`` after a ``sat`` with a
``(model ...)`` block. Exit status: 0 on any verdict, 1 on input errors,
2 on internal errors.
"""

from __future__ import annotations

import argparse
import sys
import traceback

from regexlen import automata
from regexlen.alphabet import Alphabet
from regexlen.budget import Budgets
from regexlen.formula import InRe, nnf
from regexlen.parser import ParseError, format_model, parse_script
from regexlen.solver import HeuristicConfig, solve


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text):
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _alphabet(text):
    try:
        return Alphabet.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="regexlen",
        description="Decide regex membership constraints with length arithmetic.",
    )
    p.add_argument("input", nargs="?", default="-", help="script file, or - for stdin (default)")
    p.add_argument("--mode", choices=("lazy", "eager"), default="lazy",
                   help="witness search over the individual automata (lazy) or the intersection (eager)")
    p.add_argument("--no-length-syntax", action="store_true", help="no length abstraction from regex syntax")
    p.add_argument("--no-lazy-intersection", action="store_true", help="intersect in input order, all automata up front")
    p.add_argument("--no-prefix-suffix", action="store_true", help="skip the first/last character screen")
    p.add_argument("--no-length-refine", action="store_true", help="no bound refinement from exact length sets")
    p.add_argument("--no-arith-integration", action="store_true",
                   help="no minimization and only whole-assignment blocking in the length loop")
    p.add_argument("--max-cubes", type=_positive_int, default=4096)
    p.add_argument("--max-states", type=_positive_int, default=1_000_000)
    p.add_argument("--max-lia-nodes", type=_positive_int, default=100_000)
    p.add_argument("--max-length-models", type=_positive_int, default=10_000)
    p.add_argument("--timeout", type=_positive_float, default=20.0, metavar="SECONDS")
    p.add_argument("--alphabet", type=_alphabet, default=Alphabet.ascii_printable(),
                   help="ascii-printable (default) or custom:<chars>")
    p.add_argument("--stats", action="store_true", help="print counters as key=value lines on stderr")
    p.add_argument("--dot", metavar="PATH", help="write the compiled membership automata as Graphviz DOT")
    p.add_argument("-v", "--verbose", action="store_true", help="report the deciding phase on stderr")
    return p


def config_from_args(args) -> HeuristicConfig:
    return HeuristicConfig(
        length_abstraction_from_syntax=not args.no_length_syntax,
        lazy_cost_ordered_intersection=not args.no_lazy_intersection,
        prefix_suffix=not args.no_prefix_suffix,
        automata_length_refinement=not args.no_length_refine,
        arithmetic_integration=not args.no_arith_integration,
    )


def budgets_from_args(args) -> Budgets:
    return Budgets(
        max_cubes=args.max_cubes,
        max_states=args.max_states,
        max_lia_nodes=args.max_lia_nodes,
        max_length_models=args.max_length_models,
        timeout=args.timeout,
    )


def write_dot(path: str, formula, alphabet: Alphabet, max_states: int):
    parts = []
    seen = set()
    for atom in _memberships(nnf(formula)):
        if atom in seen:
            continue
        seen.add(atom)
        a = automata.compile_regex(atom.re, alphabet, max_states)
        parts.append(automata.to_dot(a, alphabet, name=f"{atom.var}_{len(seen) - 1}"))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))


def _memberships(f):
    stack = [f]
    out = []
    while stack:
        g = stack.pop()
        if isinstance(g, InRe):
            out.append(g)
        elif hasattr(g, "args"):
            stack.extend(reversed(g.args))
        elif hasattr(g, "arg"):
            stack.append(g.arg)
    return out


def run(args, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        print(f"error: {e}", file=stderr)
        return 1
    try:
        script = parse_script(text, args.alphabet, lenient=True)
    except ParseError as e:
        print(f"error: {e}", file=stderr)
        return 1

    cfg = config_from_args(args)
    budgets = budgets_from_args(args)
    last = None
    for i, (cmd, n) in enumerate(script.commands):
        if cmd == "check-sat":
            if script.unsupported_from is not None and i >= script.unsupported_from:
                print("unknown", file=stdout)
                print(f"error: {script.unsupported}", file=stderr)
                last = None
                continue
            formula = script.formula_at(n)
            result = solve(formula, cfg, budgets, args.alphabet, args.mode)
            print(result.verdict, file=stdout)
            stdout.flush()
            if args.stats:
                for line in result.stats.lines():
                    print(line, file=stderr)
            if args.verbose:
                detail = result.stats.reason if result.verdict == "unknown" else result.stats.phase
                print(f"; {result.verdict} ({detail})", file=stderr)
            if args.dot:
                write_dot(args.dot, formula, args.alphabet, args.max_states)
            last = result
        else:
            if last is not None and last.verdict == "sat":
                print(format_model(last.model, script.declarations), file=stdout)
            else:
                print('(error "model is not available")', file=stdout)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except Exception:  # noqa: BLE001 - internal error, report and exit 2
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
