"""Random instances in the supported fragment.

Two families: a general mix (half single-predicate, half with several
memberships on one variable, predicates possibly negated) and an
intersection-heavy family of mostly unsat instances whose refutation only
needs one cheap pair of regexes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from regexlen.formula import Const, int_to_smtlib
from regexlen.regex import Comp, Concat, Lit, Regex, Star, Union, char_class, concat, plus, to_smtlib


@dataclass(frozen=True)
class GenSpec:
    seed: int = 0
    alphabet_size: int = 3
    regex_size: int = 8
    max_regexes: int = 5
    max_string_vars: int = 2
    complement_prob: float = 0.2
    arith_atoms: int = 3
    coef_bound: int = 3

    def __post_init__(self):
        if not 1 <= self.alphabet_size <= 4:
            raise ValueError("alphabet_size must be in 1..4")
        if not 1 <= self.max_regexes <= 5:
            raise ValueError("max_regexes must be in 1..5")
        if not 1 <= self.max_string_vars <= 3:
            raise ValueError("max_string_vars must be in 1..3")
        if not 0.0 <= self.complement_prob <= 1.0:
            raise ValueError("complement_prob must be in [0, 1]")
        if self.regex_size < 1 or self.arith_atoms < 0 or self.coef_bound < 1:
            raise ValueError("bounds must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def chars(self) -> str:
        return "abcd"[: self.alphabet_size]


def random_regex(rng: random.Random, chars: str, size: int, complement_prob: float = 0.0) -> Regex:
    """A regex with at most ``size`` AST nodes."""
    if size <= 1:
        return _leaf(rng, chars)
    if size >= 2 and rng.random() < complement_prob:
        return Comp(random_regex(rng, chars, size - 1, complement_prob))
    kind = rng.choice(("star", "concat", "concat", "union", "union") if size >= 3 else ("star",))
    if kind == "star":
        return Star(random_regex(rng, chars, size - 1, complement_prob))
    left = rng.randint(1, size - 2)
    right = rng.randint(1, size - 1 - left)
    a = random_regex(rng, chars, left, complement_prob)
    b = random_regex(rng, chars, right, complement_prob)
    return Concat(a, b) if kind == "concat" else Union(a, b)


def _leaf(rng, chars) -> Lit:
    r = rng.random()
    if r < 0.05:
        return Lit("")
    n = 1 if r < 0.7 else 2
    return Lit("".join(rng.choice(chars) for _ in range(n)))


def _membership(var, re: Regex, negate: bool) -> str:
    atom = f"(str.in_re {var} {to_smtlib(re)})"
    return f"(not {atom})" if negate else atom


def _arith_atom(rng, spec: GenSpec, svars, ivars) -> str:
    terms = []
    pool = [f"(str.len {v})" for v in svars] + list(ivars)
    for t in rng.sample(pool, rng.randint(1, min(2, len(pool)))):
        c = rng.randint(1, spec.coef_bound) * rng.choice((1, 1, -1))
        terms.append(t if c == 1 else f"(* {int_to_smtlib(Const(c))} {t})")
    lhs = terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"
    op = rng.choice(("<", "<=", "=", ">=", ">"))
    k = rng.randint(0, 3 * spec.coef_bound)
    return f"({op} {lhs} {k})"


def generate_one(rng: random.Random, spec: GenSpec, complex_shape: bool) -> str:
    chars = spec.chars
    nvars = rng.randint(1, spec.max_string_vars)
    svars = [f"X{i}" for i in range(nvars)]
    ivars = ["n0"] if spec.arith_atoms and rng.random() < 0.3 else []
    atoms = []
    if complex_shape and spec.max_regexes >= 2:
        k = rng.randint(2, spec.max_regexes)
        targets = [svars[0]] * 2 + [rng.choice(svars) for _ in range(k - 2)]
    else:
        targets = [svars[0]]
    for v in targets:
        size = rng.randint(1, spec.regex_size)
        re = random_regex(rng, chars, size, spec.complement_prob)
        negate = rng.random() < spec.complement_prob
        atoms.append(_membership(v, re, negate))
    for _ in range(rng.randint(0, spec.arith_atoms)):
        atoms.append(_arith_atom(rng, spec, svars, ivars))
    # occasional disjunction to exercise the Boolean layer
    if len(atoms) >= 3 and rng.random() < 0.2:
        i = rng.randrange(len(atoms) - 1)
        atoms[i:i + 2] = [f"(or {atoms[i]} {atoms[i + 1]})"]
    lines = [f"(declare-const {v} String)" for v in svars]
    lines += [f"(declare-const {v} Int)" for v in ivars]
    lines += [f"(assert {a})" for a in atoms]
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def generate(spec: GenSpec, count: int) -> list[str]:
    """``count`` scripts, alternating simple and complex shapes."""
    rng = random.Random(spec.seed)
    return [generate_one(rng, spec, complex_shape=bool(i % 2)) for i in range(count)]


# -- intersection-heavy family ------------------------------------------------


def _expensive(rng: random.Random, chars: str) -> Regex:
    """Large but harmless regexes: they accept the words the cheap pair needs
    to agree on, so only the cheap pair refutes."""
    sigma = char_class(chars)
    any_ = Star(sigma)
    k = rng.randint(3, 5)
    c = rng.choice(chars)
    choices = [
        # no c exactly k positions before the end: determinization blows up
        lambda: Comp(concat(any_, Lit(c), *([sigma] * (k + 2)))),
        lambda: Comp(concat(any_, Lit(c), *([sigma] * (k + 2)))),
        # words with c exactly k positions before the end, or anything long enough
        lambda: Union(concat(any_, Lit(c), *([sigma] * k)), concat(*([sigma] * (k + 2)), any_)),
        # complement of a sparse language
        lambda: Comp(concat(Lit(c * (k + 2)), any_, Lit(c * 2))),
        # complement of a complement, kept as-is so the cost estimate sees it
        lambda: Comp(Comp(Union(concat(any_, sigma, sigma, sigma), concat(sigma, any_)))),
        lambda: Comp(concat(any_, Lit(rng.choice(chars) * (k + 1)), any_)),
    ]
    return rng.choice(choices)()


def generate_intersection_heavy(seed: int, count: int, alphabet_size: int = 3,
                                unsat_ratio: float = 0.8) -> list[str]:
    """Single-variable instances with expensive regexes first and a cheap
    pair last; most cheap pairs are disjoint (``a b+ a`` against ``a c+ a``)."""
    if alphabet_size < 3:
        raise ValueError("needs at least three letters")
    rng = random.Random(seed)
    chars = "abcd"[:alphabet_size]
    out = []
    for _ in range(count):
        x, y, z = rng.sample(chars, 3)
        regs = [_expensive(rng, chars) for _ in range(rng.randint(1, 3))]
        first = concat(Lit(x), plus(Lit(y)), Lit(x))
        if rng.random() < unsat_ratio:
            second = concat(Lit(x), plus(Lit(z)), Lit(x))
        else:
            second = concat(Lit(x), Star(Union(Lit(y), Lit(z))), Lit(x))
        regs += [first, second]
        lines = ["(declare-const X String)"]
        lines += [f"(assert {_membership('X', r, False)})" for r in regs]
        if rng.random() < 0.5:
            lines.append(f"(assert (>= (str.len X) {rng.randint(2, 6)}))")
        lines.append("(check-sat)")
        out.append("\n".join(lines) + "\n")
    return out
