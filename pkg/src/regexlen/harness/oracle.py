"""Brute-force ground truth up to a length bound.

Words are enumerated per string variable and grouped by their signature
(length plus membership in every regex constraining that variable), so only
one representative per signature takes part in the cross product. Membership
is decided by derivatives, never by the automata engine. Integer variables
left over after fixing the words are handled by the arithmetic core.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from regexlen import lia
from regexlen.budget import BudgetExceeded
from regexlen.formula import Formula, IntEq, IntLt, cubes, linear_form, nnf, variables
from regexlen.reference import derivative, nullable

DEFAULT_BOUND = 8
MAX_COMBINATIONS = 200_000


class OracleBudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class OracleVerdict:
    verdict: str  # "sat" | "unsat-up-to-bound"
    witness: tuple | None = None  # (strings, ints)
    bound: int = DEFAULT_BOUND


def _signatures(regexes: list, chars: str, max_len: int) -> dict:
    """Map signature -> least word (shortlex) over ``chars``."""
    out: dict = {}
    # depth-first over the word tree, carrying one derivative per regex
    stack = [("", tuple(regexes))]
    while stack:
        word, states = stack.pop()
        sig = (len(word), tuple(nullable(s) for s in states))
        best = out.get(sig)
        if best is None or (len(word), word) < (len(best), best):
            out[sig] = word
        if len(word) < max_len:
            for c in reversed(chars):
                stack.append((word + c, tuple(derivative(s, c) for s in states)))
    return out


def oracle(f: Formula, chars: str, max_len: int = DEFAULT_BOUND,
           max_combinations: int = MAX_COMBINATIONS, max_cubes: int = 4096) -> OracleVerdict:
    """Search for a model with every word of length ``<= max_len``.

    Raises :class:`OracleBudgetExceeded` when the search space is too large.
    """
    g = nnf(f)
    try:
        cube_list = list(cubes(g, max_cubes))
    except BudgetExceeded as e:
        raise OracleBudgetExceeded(str(e)) from None
    str_vars, int_vars = variables(f)
    svars = sorted(str_vars)
    # every regex that mentions each variable, across all cubes
    per_var: dict = {v: [] for v in svars}
    for cube in cube_list:
        for v, r in cube.regex_constraints:
            if r not in per_var[v]:
                per_var[v].append(r)
    tables = {}
    space = 1
    for v in svars:
        tables[v] = sorted(_signatures(per_var[v], chars, max_len).items())
        space *= len(tables[v])
        if space > max_combinations:
            raise OracleBudgetExceeded(f"{space} signature combinations")
    index = {v: {r: i for i, r in enumerate(per_var[v])} for v in svars}
    for combo in itertools.product(*(tables[v] for v in svars)):
        words = {v: w for v, (_, w) in zip(svars, combo)}
        member = {v: sig[1] for v, (sig, _) in zip(svars, combo)}
        for cube in cube_list:
            if not all(member[v][index[v][r]] for v, r in cube.regex_constraints):
                continue
            ints = _arith(cube.arith_constraints, words)
            if ints is not None:
                full_ints = {n: 0 for n in int_vars}
                full_ints.update(ints)
                return OracleVerdict("sat", (words, full_ints), max_len)
    return OracleVerdict("unsat-up-to-bound", None, max_len)


def _arith(atoms, words) -> dict | None:
    """Integer assignment satisfying ``atoms`` with lengths fixed, or None."""
    rows = []
    for a in atoms:
        lc, lk = linear_form(a.left)
        rc, rk = linear_form(a.right)
        coeffs = dict(lc)
        for k, c in rc.items():
            coeffs[k] = coeffs.get(k, 0) - c
        const = rk - lk
        free = {}
        for (kind, name), c in coeffs.items():
            if kind == "len":
                const -= c * len(words.get(name, ""))
            else:
                free[name] = c
        if isinstance(a, IntEq):
            rows.append(lia.LinearConstraint.eq(free, const))
        else:
            assert isinstance(a, IntLt)
            rows.append(lia.LinearConstraint.lt(free, const))
    r = lia.check_sat(rows)
    if r.status == "unknown":
        raise OracleBudgetExceeded("arithmetic")
    return r.model if r.sat else None

