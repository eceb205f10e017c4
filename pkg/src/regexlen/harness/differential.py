"""Run the solver under several heuristic configurations and cross-check.

Unsat answers are checked against the brute-force oracle; sat answers are
checked by validating the model, since a correct witness may be longer than
the oracle bound.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from regexlen.alphabet import Alphabet
from regexlen.budget import Budgets
from regexlen.harness.oracle import DEFAULT_BOUND, OracleBudgetExceeded, oracle
from regexlen.parser import parse_script
from regexlen.solver import HeuristicConfig, solve, validate_model

CSV_COLUMNS = ["instance", "seed", "config", "verdict", "time_ms", "automata_built",
               "intersections", "length_models", "cubes", "heuristic_fired"]

TABLE_ROWS = ["sat", "unsat", "unknown", "timeout", "soundness error", "total correct",
              "time", "time w/o timeouts"]

# one column per ablation, as in a heuristic comparison table
NAMED_CONFIGS = {
    "all-on": HeuristicConfig(),
    "no-lazy": HeuristicConfig(lazy_cost_ordered_intersection=False),
    "no-prefix-suffix": HeuristicConfig(prefix_suffix=False),
    "no-length-syntax": HeuristicConfig(length_abstraction_from_syntax=False),
    "no-length-refine": HeuristicConfig(automata_length_refinement=False),
    "no-arith": HeuristicConfig(arithmetic_integration=False),
    "all-off": HeuristicConfig.all_off(),
}

HARNESS_BUDGETS = Budgets(max_length_models=200, max_lia_nodes=20_000, max_states=200_000, timeout=5.0)


@dataclass
class RunRecord:
    instance: str
    seed: int
    config: str
    verdict: str  # sat | unsat | unknown | timeout
    time_ms: float
    automata_built: int
    intersections: int
    length_models: int
    cubes: int
    heuristic_fired: int
    model: dict | None = None
    valid: bool | None = None

    def csv_row(self) -> list:
        return [self.instance, self.seed, self.config, self.verdict, f"{self.time_ms:.3f}",
                self.automata_built, self.intersections, self.length_models, self.cubes,
                self.heuristic_fired]


@dataclass
class Report:
    configs: list
    records: list = field(default_factory=list)
    oracle: dict = field(default_factory=dict)  # instance -> "sat" | "unsat-up-to-bound" | "budget"

    def by_config(self, name: str) -> list:
        return [r for r in self.records if r.config == name]

    def record(self, instance: str, config: str) -> RunRecord:
        return next(r for r in self.records if r.instance == instance and r.config == config)

    def soundness_errors(self, name: str | None = None) -> list:
        out = []
        for r in self.records:
            if name is not None and r.config != name:
                continue
            if r.verdict == "sat" and not r.valid:
                out.append(r)
            elif r.verdict == "unsat" and self.oracle.get(r.instance) == "sat":
                out.append(r)
        return out

    def summary(self, name: str) -> dict:
        recs = self.by_config(name)
        errors = self.soundness_errors(name)
        counts = {k: sum(1 for r in recs if r.verdict == k) for k in ("sat", "unsat", "unknown", "timeout")}
        total = sum(r.time_ms for r in recs) / 1000
        no_to = sum(r.time_ms for r in recs if r.verdict != "timeout") / 1000
        counts.update({
            "soundness error": len(errors),
            "total correct": counts["sat"] + counts["unsat"] - len(errors),
            "time": round(total, 3),
            "time w/o timeouts": round(no_to, 3),
        })
        return counts

    def table(self) -> str:
        names = list(self.configs)
        width = max(12, *(len(n) for n in names)) + 2
        head = " " * 20 + "".join(n.rjust(width) for n in names)
        lines = [head]
        sums = {n: self.summary(n) for n in names}
        for row in TABLE_ROWS:
            cells = []
            for n in names:
                v = sums[n][row]
                cells.append((f"{v:.2f}s" if isinstance(v, float) else str(v)).rjust(width))
            lines.append(row.ljust(20) + "".join(cells))
        return "\n".join(lines) + "\n"

    def csv_text(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            row = r.csv_row()
            if not timing:
                row[4] = ""
            w.writerow(row)
        return buf.getvalue()

    def write_csv(self, path: str):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.csv_text())


def run_instance(name: str, seed: int, text: str, config_name: str, cfg: HeuristicConfig,
                 chars: str, budgets: Budgets, mode: str = "lazy") -> RunRecord:
    alphabet = Alphabet(chars)
    f = parse_script(text, alphabet).formula
    t0 = time.perf_counter()
    res = solve(f, cfg, budgets, alphabet, mode)
    dt = (time.perf_counter() - t0) * 1000
    st = res.stats
    verdict = res.verdict
    if verdict == "unknown" and st.reason == "timeout":
        verdict = "timeout"
    valid = validate_model(f, res.model) if res.verdict == "sat" else None
    return RunRecord(name, seed, config_name, verdict, dt, st.automata_built, st.intersections,
                     st.length_models, st.cubes, st.heuristic_fired, res.model, valid)


def run_oracle(name: str, text: str, chars: str, bound: int) -> tuple:
    alphabet = Alphabet(chars)
    f = parse_script(text, alphabet).formula
    try:
        o = oracle(f, chars, bound)
    except OracleBudgetExceeded:
        return name, "budget", None
    if o.verdict == "sat":
        words, ints = o.witness
        # the oracle's own witness must hold up as well
        assert validate_model(f, {**words, **ints}), f"oracle witness failed on {name}"
    return name, o.verdict, o.witness


def _task(args):
    kind = args[0]
    if kind == "oracle":
        return run_oracle(*args[1:])
    return run_instance(*args[1:])


def differential_run(scripts, configs: dict | None = None, oracle_bound: int | None = DEFAULT_BOUND,
                     chars: str = "abc", budgets: Budgets = HARNESS_BUDGETS, seeds=None,
                     names=None, workers: int = 1, mode: str = "lazy") -> Report:
    """Run every script under every configuration (and the oracle).

    ``configs`` maps column names to :class:`HeuristicConfig`. With
    ``oracle_bound=None`` the oracle is skipped and only models are checked.
    Results are ordered by instance then configuration regardless of
    ``workers``, so reports are reproducible.
    """
    configs = configs or {"all-on": NAMED_CONFIGS["all-on"], "all-off": NAMED_CONFIGS["all-off"]}
    names = names or [f"i{k:04d}" for k in range(len(scripts))]
    seeds = seeds or [0] * len(scripts)
    tasks = []
    if oracle_bound is not None:
        tasks += [("oracle", n, s, chars, oracle_bound) for n, s in zip(names, scripts)]
    for n, seed, s in zip(names, seeds, scripts):
        for cname, cfg in configs.items():
            tasks.append(("solve", n, seed, s, cname, cfg, chars, budgets, mode))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks, chunksize=8))
    else:
        results = [_task(t) for t in tasks]
    report = Report(list(configs))
    for r in results:
        if isinstance(r, RunRecord):
            report.records.append(r)
        else:
            report.oracle[r[0]] = r[1]
    order = {n: i for i, n in enumerate(names)}
    corder = {c: i for i, c in enumerate(configs)}
    report.records.sort(key=lambda r: (order[r.instance], corder[r.config]))
    return report
