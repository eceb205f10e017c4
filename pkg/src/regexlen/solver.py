"""Length-aware decision procedure for regex membership plus length arithmetic.

A formula is put in negation normal form and split into cubes. Each cube
goes through the same phases:

1. length abstraction of every membership and an arithmetic consistency
   check of the abstraction together with the integer atoms;
2. bound refinement against the exact accepted lengths;
3. the first/last-character screen;
4. intersection emptiness per variable, cheapest automata first;
5. the length-model loop: the arithmetic solver proposes lengths, a joint
   path search looks for words of exactly those lengths, and failed lengths
   are blocked.

Every budget that runs out turns into ``unknown``; ``sat`` always comes with
a model.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field, fields

from regexlen import automata, lia, prefix_suffix
from regexlen.alphabet import Alphabet
from regexlen.budget import (
    BudgetExceeded,
    Budgets,
    Deadline,
    DeadlineExceeded,
    LengthModelBudgetExceeded,
    ProgressionCapExceeded,
    checkpoint,
    reset_deadline,
    set_deadline,
)
from regexlen.formula import Cube, Formula, IntEq, IntLt, cubes, evaluate, linear_form, nnf, variables
from regexlen.lengths import (
    Bounds,
    EmptyLanguage,
    Exact,
    SemilinearSet,
    abstract_lengths,
    automaton_lengths,
    refine_bounds,
    semilinear_intersect,
)
from regexlen.lia import LinearConstraint as LC
from regexlen.reference import matches

# beyond this many progression combinations per cube, exact sets are
# weakened to bounds (the path search still checks every length)
MAX_BRANCHES = 256


@dataclass(frozen=True)
class HeuristicConfig:
    length_abstraction_from_syntax: bool = True
    lazy_cost_ordered_intersection: bool = True
    prefix_suffix: bool = True
    automata_length_refinement: bool = True
    arithmetic_integration: bool = True

    @classmethod
    def all_on(cls) -> "HeuristicConfig":
        return cls()

    @classmethod
    def all_off(cls) -> "HeuristicConfig":
        return cls(False, False, False, False, False)

    @classmethod
    def combinations(cls) -> list["HeuristicConfig"]:
        """All 32 flag combinations, all-on first."""
        return [cls(*bits) for bits in itertools.product((True, False), repeat=5)]

    @property
    def name(self) -> str:
        off = [f.name for f in fields(self) if not getattr(self, f.name)]
        if not off:
            return "all-on"
        if len(off) == len(fields(self)):
            return "all-off"
        return "no-" + "+".join(_SHORT[n] for n in off)


_SHORT = {
    "length_abstraction_from_syntax": "length-syntax",
    "lazy_cost_ordered_intersection": "lazy",
    "prefix_suffix": "prefix-suffix",
    "automata_length_refinement": "length-refine",
    "arithmetic_integration": "arith",
}


@dataclass
class Stats:
    automata_built: int = 0
    intersections: int = 0
    length_models: int = 0
    cubes: int = 0
    lia_calls: int = 0
    heuristic_fired: int = 0
    syntax_refutations: int = 0
    refinement_refutations: int = 0
    prefix_suffix_refutations: int = 0
    prefix_suffix_empty_string: int = 0
    lazy_early_stops: int = 0
    phase: str = ""
    reason: str = ""
    refined_bounds: dict = field(default_factory=dict)
    first_length_model: dict | None = None

    def as_dict(self) -> dict:
        return asdict(self)

    def lines(self) -> list[str]:
        """``key=value`` lines, deterministic order."""
        out = []
        for k, v in self.as_dict().items():
            if isinstance(v, dict):
                v = ",".join(f"{name}:{_fmt(val)}" for name, val in sorted(v.items()))
            elif v is None:
                v = ""
            out.append(f"{k}={v}")
        return out


def _fmt(v):
    if isinstance(v, tuple):
        return "..".join("inf" if x is None else str(x) for x in v)
    return str(v)


@dataclass
class SolverResult:
    verdict: str  # "sat" | "unsat" | "unknown"
    model: dict | None = None
    stats: Stats = field(default_factory=Stats)

    def __post_init__(self):
        if (self.verdict == "sat") != (self.model is not None):
            raise ValueError("a model is present exactly for sat")


class _Unsat(Exception):
    def __init__(self, phase: str):
        self.phase = phase


def solve(f: Formula, cfg: HeuristicConfig | None = None, budgets: Budgets | None = None,
          alphabet: Alphabet | None = None, mode: str = "lazy") -> SolverResult:
    """Decide ``f``. ``mode`` is ``lazy`` (joint path search over the
    individual automata) or ``eager`` (witnesses from the intersection)."""
    cfg = cfg or HeuristicConfig()
    budgets = budgets or Budgets()
    alphabet = alphabet or Alphabet.ascii_printable()
    if mode not in ("lazy", "eager"):
        raise ValueError(f"unknown mode {mode!r}")
    stats = Stats()
    token = set_deadline(Deadline(budgets.timeout))
    built0 = automata.construction_count()
    try:
        return _solve(f, cfg, budgets, alphabet, mode, stats)
    finally:
        stats.automata_built = automata.construction_count() - built0
        reset_deadline(token)


def _solve(f, cfg, budgets, alphabet, mode, stats) -> SolverResult:
    str_vars, int_vars = variables(f)
    reasons = []
    try:
        for cube in cubes(nnf(f), budgets.max_cubes):
            stats.cubes += 1
            verdict, model = _run_cube(cube, cfg, budgets, alphabet, mode, stats)
            if verdict == "sat":
                full = {v: "" for v in str_vars}
                full.update({v: 0 for v in int_vars})
                full.update(model)
                stats.phase = "model"
                return SolverResult("sat", full, stats)
            if verdict == "unknown":
                reasons.append(stats.reason)
    except BudgetExceeded as e:
        reasons.append(e.reason)
    if reasons:
        stats.reason = reasons[0]
        stats.phase = "budget"
        return SolverResult("unknown", None, stats)
    if stats.cubes != 1:
        stats.phase = "boolean" if stats.cubes == 0 else "all-cubes"
    return SolverResult("unsat", None, stats)


def solve_cube(cube: Cube, cfg: HeuristicConfig | None = None, budgets: Budgets | None = None,
               alphabet: Alphabet | None = None, mode: str = "lazy") -> SolverResult:
    """Run the phases on a single cube."""
    cfg = cfg or HeuristicConfig()
    budgets = budgets or Budgets()
    alphabet = alphabet or Alphabet.ascii_printable()
    stats = Stats(cubes=1)
    token = set_deadline(Deadline(budgets.timeout))
    built0 = automata.construction_count()
    try:
        verdict, model = _run_cube(cube, cfg, budgets, alphabet, mode, stats)
    finally:
        stats.automata_built = automata.construction_count() - built0
        reset_deadline(token)
    return SolverResult(verdict, model, stats)


def _run_cube(cube, cfg, budgets, alphabet, mode, stats):
    try:
        return _CubeSolver(cube, cfg, budgets, alphabet, mode, stats).run()
    except _Unsat as u:
        stats.phase = u.phase
        return "unsat", None
    except DeadlineExceeded:
        raise
    except BudgetExceeded as e:
        stats.reason = e.reason
        return "unknown", None


# -- per-cube work ---------------------------------------------------------


def _len(s):
    return ("len", s)


def _arith_constraint(atom) -> LC:
    lc, lk = linear_form(atom.left)
    rc, rk = linear_form(atom.right)
    coeffs = dict(lc)
    for v, c in rc.items():
        coeffs[v] = coeffs.get(v, 0) - c
    bound = rk - lk
    if isinstance(atom, IntEq):
        return LC.eq(coeffs, bound)
    assert isinstance(atom, IntLt)
    return LC.lt(coeffs, bound)


@dataclass
class _Var:
    name: str
    regexes: list
    abstractions: list = field(default_factory=list)
    lengths: SemilinearSet | None = None  # exact joint set when known
    lo: int = 0
    up: int | None = None
    automata: dict = field(default_factory=dict)  # regex index -> Automaton
    intersection: automata.Automaton | None = None
    fixed_empty: bool = False


class _CubeSolver:
    def __init__(self, cube: Cube, cfg, budgets, alphabet, mode, stats):
        self.cfg, self.budgets, self.alphabet, self.mode, self.stats = cfg, budgets, alphabet, mode, stats
        self.psi = [_arith_constraint(a) for a in cube.arith_constraints]
        self.vars: dict[str, _Var] = {}
        for s, r in cube.regex_constraints:
            self.vars.setdefault(s, _Var(s, [])).regexes.append(r)
        self.len_vars = {s for s in self.vars}
        for c in self.psi:
            for kind, name in c.variables():
                if kind == "len":
                    self.len_vars.add(name)
        self.fresh = itertools.count()

    # helpers

    def _lia(self, constraints, blocks=(), objective=None):
        self.stats.lia_calls += 1
        nonneg = [_len(s) for s in sorted(self.len_vars)]
        if objective is None:
            return lia.check_sat(constraints, blocks, nonneg, self.budgets.max_lia_nodes)
        return lia.minimize(objective, constraints, blocks, nonneg, self.budgets.max_lia_nodes)

    def _compile(self, v: _Var, i: int):
        a = v.automata.get(i)
        if a is None:
            a = automata.compile_regex(v.regexes[i], self.alphabet, self.budgets.max_states)
            v.automata[i] = a
        return a

    def _branches(self):
        """Alternative constraint sets, one per combination of progressions."""
        per_var = []
        for name in sorted(self.vars):
            v = self.vars[name]
            base = [LC.ge({_len(name): 1}, v.lo)]
            if v.up is not None:
                base.append(LC.le({_len(name): 1}, v.up))
            if v.lengths is None:
                per_var.append([base])
                continue
            alts = []
            for o, p in v.lengths.progressions:
                if p == 0:
                    alts.append(base + [LC.eq({_len(name): 1}, o)])
                else:
                    k = ("k", next(self.fresh))
                    alts.append(base + [LC.eq({_len(name): 1, k: -p}, o), LC.ge({k: 1}, 0)])
            per_var.append(alts)
        total = 1
        for alts in per_var:
            total *= len(alts)
        # weaken the widest sets until the product is manageable
        while total > MAX_BRANCHES:
            i = max(range(len(per_var)), key=lambda j: len(per_var[j]))
            total //= len(per_var[i])
            name = sorted(self.vars)[i]
            v = self.vars[name]
            weak = [LC.ge({_len(name): 1}, max(v.lo, v.lengths.min()))]
            up = v.lengths.max() if v.up is None else v.up
            if up is not None:
                weak.append(LC.le({_len(name): 1}, up))
            per_var[i] = [weak]
        return [self.psi + [c for part in combo for c in part] for combo in itertools.product(*per_var)]

    def _live(self, branches):
        live = []
        for b in branches:
            r = self._lia(b)
            if not r.unsat:
                live.append(b)
        return live

    # phases

    def run(self):
        self.phase_abstraction()
        checkpoint()
        self.phase_refinement()
        checkpoint()
        self.phase_prefix_suffix()
        checkpoint()
        self.phase_intersection()
        checkpoint()
        return self.phase_length_models()

    def phase_abstraction(self):
        cap = self.budgets.max_progressions
        for v in self.vars.values():
            exact, lo, up = None, 0, None
            for r in v.regexes:
                la = abstract_lengths(r, cap) if self.cfg.length_abstraction_from_syntax else Bounds()
                v.abstractions.append(la)
                if la is EmptyLanguage:
                    self.stats.syntax_refutations += 1
                    self.stats.heuristic_fired += 1
                    raise _Unsat("abstraction")
                if isinstance(la, Exact):
                    if exact is None:
                        exact = la.set
                    else:
                        try:
                            exact = semilinear_intersect(exact, la.set, cap)
                        except ProgressionCapExceeded:
                            # any single exact set is still a sound superset
                            if len(la.set.progressions) < len(exact.progressions):
                                exact = la.set
                lo = max(lo, la.lower)
                if la.upper is not None:
                    up = la.upper if up is None else min(up, la.upper)
            if exact is not None and not exact:
                self.stats.syntax_refutations += 1
                self.stats.heuristic_fired += 1
                raise _Unsat("abstraction")
            v.lengths, v.lo, v.up = exact, lo, up
            if up is not None and up < lo:
                raise _Unsat("abstraction")
        self.live = self._live(self._branches())
        if not self.live:
            if any(v.lengths is not None for v in self.vars.values()):
                self.stats.syntax_refutations += 1
                self.stats.heuristic_fired += 1
            raise _Unsat("abstraction")

    def _upper_from_psi(self, name):
        # single-variable constraints c * len <= b with c > 0
        up = None
        for c in self.psi:
            if len(c.coeffs) == 1 and c.coeffs[0][0] == _len(name) and c.coeffs[0][1] > 0:
                b = c.bound // c.coeffs[0][1]
                up = b if up is None else min(up, b)
        return up

    def phase_refinement(self):
        if not self.cfg.automata_length_refinement:
            return
        changed = False
        for name in sorted(self.vars):
            v = self.vars[name]
            # least length the arithmetic allows, over all live branches
            lo = None
            for b in self.live:
                r = self._lia(b, objective=_len(name))
                if r.sat:
                    m = r.model[_len(name)]
                    lo = m if lo is None else min(lo, m)
                elif not r.unsat:
                    lo = None
                    break
            lo = v.lo if lo is None else max(v.lo, lo)
            up = self._upper_from_psi(name)
            if v.up is not None:
                up = v.up if up is None else min(up, v.up)
            window = (lo, up)
            for i, la in enumerate(v.abstractions):
                a = None if isinstance(la, Exact) else self._compile(v, i)
                res = refine_bounds(la, a, window)
                if res is None:
                    self.stats.refinement_refutations += 1
                    self.stats.heuristic_fired += 1
                    self.stats.refined_bounds[name] = window
                    raise _Unsat("refinement")
                window = (max(window[0], res[0]),
                          res[1] if window[1] is None else (window[1] if res[1] is None else min(window[1], res[1])))
                if window[1] is not None and window[1] < window[0]:
                    self.stats.refinement_refutations += 1
                    self.stats.heuristic_fired += 1
                    self.stats.refined_bounds[name] = window
                    raise _Unsat("refinement")
            self.stats.refined_bounds[name] = window
            if window != (v.lo, v.up):
                changed = True
            v.lo, v.up = window
        if changed:
            self.live = self._live(self._branches())
            if not self.live:
                self.stats.refinement_refutations += 1
                self.stats.heuristic_fired += 1
                raise _Unsat("refinement")

    def phase_prefix_suffix(self):
        if not self.cfg.prefix_suffix:
            return
        fixed = False
        for name in sorted(self.vars):
            v = self.vars[name]
            profiles = [prefix_suffix.edge_profile(r, self.alphabet) for r in v.regexes]
            verdict = prefix_suffix.joint_check(profiles)
            if verdict is prefix_suffix.JointVerdict.EMPTY_INTERSECTION:
                self.stats.prefix_suffix_refutations += 1
                self.stats.heuristic_fired += 1
                raise _Unsat("prefix-suffix")
            if verdict is prefix_suffix.JointVerdict.ONLY_EMPTY_STRING:
                # every profile is nullable, so "" is the only candidate and
                # it satisfies every membership
                self.stats.prefix_suffix_empty_string += 1
                self.stats.heuristic_fired += 1
                v.fixed_empty = True
                v.lengths, v.lo, v.up = SemilinearSet.singleton(0), 0, 0
                fixed = True
        if fixed:
            self.live = self._live(self._branches())
            if not self.live:
                raise _Unsat("prefix-suffix")

    def phase_intersection(self):
        lazy = self.cfg.lazy_cost_ordered_intersection
        names = [n for n in sorted(self.vars) if not self.vars[n].fixed_empty]
        if not lazy:
            # eager: every automaton up front, in input order
            for n in names:
                for i in range(len(self.vars[n].regexes)):
                    self._compile(self.vars[n], i)
        else:
            names.sort(key=lambda n: min(automata.estimate_cost(r) for r in self.vars[n].regexes))
        for n in names:
            v = self.vars[n]
            order = list(range(len(v.regexes)))
            if lazy:
                order.sort(key=lambda i: automata.estimate_cost(v.regexes[i]))
            acc = self._compile(v, order[0])
            if automata.is_empty(acc):
                raise _Unsat("intersection")
            for step, i in enumerate(order[1:], 1):
                checkpoint()
                acc = automata.intersect(acc, self._compile(v, i), self.budgets.max_states)
                self.stats.intersections += 1
                if automata.is_empty(acc):
                    if lazy and step < len(order) - 1:
                        self.stats.lazy_early_stops += 1
                        self.stats.heuristic_fired += 1
                    raise _Unsat("intersection")
            v.intersection = acc
            if self.cfg.automata_length_refinement:
                exact = automaton_lengths(acc, self.budgets.max_progressions)
                if exact is not None:
                    v.lengths = exact
                    v.lo = max(v.lo, exact.min())
                    if exact.max() is not None:
                        v.up = exact.max() if v.up is None else min(v.up, exact.max())
                    if v.up is not None and v.up < v.lo:
                        raise _Unsat("intersection")
        if self.cfg.automata_length_refinement:
            self.live = self._live(self._branches())
            if not self.live:
                raise _Unsat("intersection")

    def _word(self, v: _Var, n: int) -> str | None:
        if self.mode == "eager" or len(v.regexes) == 1:
            return automata.extract_word_of_length(v.intersection, n, self.alphabet, self.budgets.max_states)
        autos = [self._compile(v, i) for i in range(len(v.regexes))]
        return automata.joint_path_of_length(autos, n, self.alphabet, self.budgets.max_states)

    def phase_length_models(self):
        integrate = self.cfg.arithmetic_integration
        objective = {_len(s): 1 for s in self.len_vars} or None
        unknown = None
        for branch in self.live:
            blocks: list[dict] = []
            while True:
                checkpoint()
                if self.stats.length_models >= self.budgets.max_length_models:
                    raise LengthModelBudgetExceeded()
                self.stats.length_models += 1
                r = self._lia(branch, blocks, objective if integrate else None)
                if r.unsat:
                    break
                if not r.sat:
                    unknown = "lia budget"
                    break
                m = r.model
                if self.stats.first_length_model is None:
                    self.stats.first_length_model = {s: m.get(_len(s), 0) for s in sorted(self.len_vars)}
                words, failed = {}, []
                for name in sorted(self.vars):
                    v = self.vars[name]
                    n = m.get(_len(name), 0)
                    w = "" if v.fixed_empty else self._word(v, n)
                    if w is None:
                        failed.append(name)
                    else:
                        words[name] = w
                if not failed:
                    for s in self.len_vars - set(self.vars):
                        words[s] = self.alphabet.first() * m.get(_len(s), 0)
                    model = dict(words)
                    model.update({name: val for (kind, name), val in m.items() if kind == "int"})
                    return "sat", model
                if integrate:
                    # a variable's memberships do not mention other variables,
                    # so its failed length is a conflict on its own
                    blocks.extend({_len(s): m.get(_len(s), 0)} for s in failed)
                else:
                    blocks.append({_len(s): m.get(_len(s), 0) for s in sorted(self.len_vars)})
        if unknown:
            self.stats.reason = unknown
            return "unknown", None
        raise _Unsat("length-models")


def validate_model(f: Formula, model: dict) -> bool:
    """Check ``model`` against ``f`` with the reference evaluator."""
    strings = {k: v for k, v in model.items() if isinstance(v, str)}
    ints = {k: v for k, v in model.items() if isinstance(v, int) and not isinstance(v, bool)}
    return evaluate(f, strings, ints, matches)
