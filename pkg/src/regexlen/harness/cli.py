"""``regexlen-harness``: generate instances and run differential reports.

    regexlen-harness generate --seed 1 --count 50 --out corpus/
    regexlen-harness run --generate 200 --seed 1 --configs all-on,all-off --out report/
    regexlen-harness run corpus/*.smt2 --all-combinations --out report/

``run`` writes ``table.txt``, ``results.csv`` and ``cactus.png`` into the
output directory and exits 1 if any soundness error was found.
"""

from __future__ import annotations

import argparse
import os
import sys

from regexlen.budget import Budgets
from regexlen.harness.differential import HARNESS_BUDGETS, NAMED_CONFIGS, differential_run
from regexlen.harness.generate import GenSpec, generate, generate_intersection_heavy
from regexlen.solver import HeuristicConfig


def _spec(args) -> GenSpec:
    return GenSpec(seed=args.seed, alphabet_size=args.alphabet_size, regex_size=args.regex_size,
                   max_regexes=args.max_regexes, max_string_vars=args.max_string_vars,
                   complement_prob=args.complement_prob, arith_atoms=args.arith_atoms)


def _add_gen_args(p):
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--alphabet-size", type=int, default=3)
    p.add_argument("--regex-size", type=int, default=8)
    p.add_argument("--max-regexes", type=int, default=5)
    p.add_argument("--max-string-vars", type=int, default=2)
    p.add_argument("--complement-prob", type=float, default=0.2)
    p.add_argument("--arith-atoms", type=int, default=3)
    p.add_argument("--family", choices=("mixed", "intersection-heavy"), default="mixed")


def _scripts(args, count):
    if args.family == "intersection-heavy":
        return generate_intersection_heavy(args.seed, count, max(3, args.alphabet_size))
    return generate(_spec(args), count)


def cmd_generate(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    for i, text in enumerate(_scripts(args, args.count)):
        with open(os.path.join(args.out, f"inst{i:04d}.smt2"), "w", encoding="utf-8") as fh:
            fh.write(text)
    print(f"wrote {args.count} scripts to {args.out}")
    return 0


def cmd_run(args) -> int:
    if args.files:
        scripts, names = [], []
        for path in args.files:
            with open(path, encoding="utf-8") as fh:
                scripts.append(fh.read())
            names.append(os.path.basename(path))
        seeds = [0] * len(scripts)
    else:
        scripts = _scripts(args, args.generate)
        names = [f"s{args.seed}-{i:04d}" for i in range(len(scripts))]
        seeds = [args.seed] * len(scripts)
    if args.all_combinations:
        configs = {c.name: c for c in HeuristicConfig.combinations()}
    else:
        configs = {}
        for name in args.configs.split(","):
            if name not in NAMED_CONFIGS:
                print(f"error: unknown config {name!r}; choose from {', '.join(NAMED_CONFIGS)}", file=sys.stderr)
                return 2
            configs[name] = NAMED_CONFIGS[name]
    budgets = Budgets(max_length_models=args.max_length_models, max_lia_nodes=HARNESS_BUDGETS.max_lia_nodes,
                      max_states=HARNESS_BUDGETS.max_states, timeout=args.timeout)
    chars = "abcd"[:args.alphabet_size]
    report = differential_run(scripts, configs, None if args.no_oracle else args.oracle_bound,
                              chars, budgets, seeds, names, args.workers, args.mode)
    os.makedirs(args.out, exist_ok=True)
    table = report.table()
    with open(os.path.join(args.out, "table.txt"), "w", encoding="utf-8") as fh:
        fh.write(table)
    report.write_csv(os.path.join(args.out, "results.csv"))
    if not args.no_plot:
        from regexlen.harness.plots import cactus

        cactus(report, os.path.join(args.out, "cactus.png"))
    print(table, end="")
    excluded = sum(1 for v in report.oracle.values() if v == "budget")
    if excluded:
        print(f"{excluded} instances exceeded the oracle budget and were not cross-checked")
    errors = report.soundness_errors()
    for r in errors:
        print(f"SOUNDNESS ERROR: {r.instance} config={r.config} verdict={r.verdict}", file=sys.stderr)
    return 1 if errors else 0


def build_parser():
    p = argparse.ArgumentParser(prog="regexlen-harness", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("generate", help="write random instances")
    _add_gen_args(g)
    g.add_argument("--count", type=int, default=100)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)
    r = sub.add_parser("run", help="differential run with table, CSV and cactus plot")
    _add_gen_args(r)
    r.add_argument("files", nargs="*", help="scripts to run (default: generate)")
    r.add_argument("--generate", type=int, default=200, metavar="N")
    r.add_argument("--configs", default="all-on,all-off", help=f"comma list of {', '.join(NAMED_CONFIGS)}")
    r.add_argument("--all-combinations", action="store_true", help="all 32 heuristic combinations")
    r.add_argument("--oracle-bound", type=int, default=8)
    r.add_argument("--no-oracle", action="store_true")
    r.add_argument("--timeout", type=float, default=HARNESS_BUDGETS.timeout)
    r.add_argument("--max-length-models", type=int, default=HARNESS_BUDGETS.max_length_models)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--mode", choices=("lazy", "eager"), default="lazy")
    r.add_argument("--out", default="report")
    r.add_argument("--no-plot", action="store_true")
    r.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
