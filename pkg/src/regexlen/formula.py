"""Boolean structure over regex-membership and integer atoms.

Includes negation normal form, lazy cube (DNF) enumeration and direct
evaluation under a concrete assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from regexlen.budget import CubeBudgetExceeded, tick
from regexlen.regex import Comp, Regex
from regexlen.regex import to_smtlib as regex_to_smtlib

# -- integer terms ---------------------------------------------------------


class IntTerm:
    __slots__ = ()


@dataclass(frozen=True)
class Const(IntTerm):
    value: int


@dataclass(frozen=True)
class IntVar(IntTerm):
    name: str


@dataclass(frozen=True)
class Len(IntTerm):
    var: str


@dataclass(frozen=True)
class Add(IntTerm):
    left: IntTerm
    right: IntTerm


@dataclass(frozen=True)
class Mul(IntTerm):
    coef: int
    inner: IntTerm


def linear_form(t: IntTerm) -> tuple[dict, int]:
    """Return ``(coeffs, constant)``; keys are ``("len", s)`` or ``("int", v)``."""
    coeffs: dict = {}
    const = 0

    def walk(t, scale):
        nonlocal const
        if isinstance(t, Const):
            const += scale * t.value
        elif isinstance(t, IntVar):
            key = ("int", t.name)
            coeffs[key] = coeffs.get(key, 0) + scale
        elif isinstance(t, Len):
            key = ("len", t.var)
            coeffs[key] = coeffs.get(key, 0) + scale
        elif isinstance(t, Add):
            walk(t.left, scale)
            walk(t.right, scale)
        elif isinstance(t, Mul):
            walk(t.inner, scale * t.coef)
        else:
            raise TypeError(t)

    walk(t, 1)
    return {k: c for k, c in coeffs.items() if c}, const


def eval_int(t: IntTerm, strings: dict, ints: dict) -> int:
    coeffs, const = linear_form(t)
    total = const
    for (kind, name), c in coeffs.items():
        total += c * (len(strings.get(name, "")) if kind == "len" else ints.get(name, 0))
    return total


def int_to_smtlib(t: IntTerm) -> str:
    if isinstance(t, Const):
        return str(t.value) if t.value >= 0 else f"(- {-t.value})"
    if isinstance(t, IntVar):
        return t.name
    if isinstance(t, Len):
        return f"(str.len {t.var})"
    if isinstance(t, Add):
        return f"(+ {int_to_smtlib(t.left)} {int_to_smtlib(t.right)})"
    if isinstance(t, Mul):
        return f"(* {int_to_smtlib(Const(t.coef))} {int_to_smtlib(t.inner)})"
    raise TypeError(t)


# -- formulas --------------------------------------------------------------


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class BoolConst(Formula):
    value: bool


@dataclass(frozen=True)
class InRe(Formula):
    var: str
    re: Regex


@dataclass(frozen=True)
class IntEq(Formula):
    left: IntTerm
    right: IntTerm


@dataclass(frozen=True)
class IntLt(Formula):
    left: IntTerm
    right: IntTerm


@dataclass(frozen=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    args: tuple


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


TRUE = BoolConst(True)
FALSE = BoolConst(False)
ATOMS = (BoolConst, InRe, IntEq, IntLt)


def conj(*args: Formula) -> Formula:
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def disj(*args: Formula) -> Formula:
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


def to_smtlib(f: Formula) -> str:
    if isinstance(f, BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, InRe):
        return f"(str.in_re {f.var} {regex_to_smtlib(f.re)})"
    if isinstance(f, IntEq):
        return f"(= {int_to_smtlib(f.left)} {int_to_smtlib(f.right)})"
    if isinstance(f, IntLt):
        return f"(< {int_to_smtlib(f.left)} {int_to_smtlib(f.right)})"
    if isinstance(f, And):
        return "(and " + " ".join(to_smtlib(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(to_smtlib(a) for a in f.args) + ")"
    if isinstance(f, Not):
        return f"(not {to_smtlib(f.arg)})"
    raise TypeError(f)


def variables(f: Formula) -> tuple[set, set]:
    """String and integer variable names occurring in ``f``."""
    strings, ints = set(), set()

    def walk_int(t):
        for kind, name in linear_form(t)[0]:
            (strings if kind == "len" else ints).add(name)

    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, InRe):
            strings.add(g.var)
        elif isinstance(g, (IntEq, IntLt)):
            walk_int(g.left)
            walk_int(g.right)
        elif isinstance(g, (And, Or)):
            stack.extend(g.args)
        elif isinstance(g, Not):
            stack.append(g.arg)
    return strings, ints


def nnf(f: Formula) -> Formula:
    """Push negations into the atoms.

    A negated membership becomes membership in the complement; negated
    integer atoms are rewritten by trichotomy.
    """
    return _nnf(f, False)


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, And):
        args = tuple(_nnf(a, neg) for a in f.args)
        return Or(args) if neg else And(args)
    if isinstance(f, Or):
        args = tuple(_nnf(a, neg) for a in f.args)
        return And(args) if neg else Or(args)
    if not neg:
        return f
    if isinstance(f, BoolConst):
        return BoolConst(not f.value)
    if isinstance(f, InRe):
        return InRe(f.var, Comp(f.re))
    if isinstance(f, IntEq):
        return Or((IntLt(f.left, f.right), IntLt(f.right, f.left)))
    if isinstance(f, IntLt):
        return Or((IntLt(f.right, f.left), IntEq(f.right, f.left)))
    raise TypeError(f)


@dataclass(frozen=True)
class Cube:
    """A conjunction: positive regex constraints plus integer atoms."""

    regex_constraints: tuple = ()
    arith_constraints: tuple = ()

    def atoms(self):
        return tuple(InRe(v, r) for v, r in self.regex_constraints) + self.arith_constraints

    def formula(self) -> Formula:
        return conj(*self.atoms())


def _dnf(f: Formula) -> Iterator[tuple]:
    # yields tuples of atoms; ``False`` atoms prune the branch
    if isinstance(f, BoolConst):
        if f.value:
            yield ()
        return
    if isinstance(f, (InRe, IntEq, IntLt)):
        yield (f,)
        return
    if isinstance(f, Or):
        for a in f.args:
            yield from _dnf(a)
        return
    if isinstance(f, And):
        yield from _dnf_product(f.args, 0)
        return
    raise ValueError(f"cubes() expects a formula in negation normal form, got {type(f).__name__}")


def _dnf_product(args, i):
    if i == len(args):
        yield ()
        return
    for head in _dnf(args[i]):
        for tail in _dnf_product(args, i + 1):
            yield head + tail


def _make_cube(atoms: tuple) -> Cube:
    regs, arith, seen = [], [], set()
    for a in atoms:
        if a in seen:
            continue
        seen.add(a)
        if isinstance(a, InRe):
            regs.append((a.var, a.re))
        else:
            arith.append(a)
    return Cube(tuple(regs), tuple(arith))


def cubes(f: Formula, cap: int = 4096) -> Iterator[Cube]:
    """Lazily enumerate the cubes of an NNF formula.

    Raises :class:`CubeBudgetExceeded` when more than ``cap`` cubes would be
    needed.
    """
    count = 0
    for atoms in _dnf(f):
        tick()
        if count >= cap:
            raise CubeBudgetExceeded(f"more than {cap} cubes")
        count += 1
        yield _make_cube(atoms)


def evaluate(f: Formula, strings: dict, ints: dict, member: Callable[[str, Regex], bool]) -> bool:
    """Truth value of ``f``; ``member(word, regex)`` decides membership.

    Variables missing from the assignment default to ``""`` and ``0``.
    """
    if isinstance(f, BoolConst):
        return f.value
    if isinstance(f, InRe):
        return member(strings.get(f.var, ""), f.re)
    if isinstance(f, IntEq):
        return eval_int(f.left, strings, ints) == eval_int(f.right, strings, ints)
    if isinstance(f, IntLt):
        return eval_int(f.left, strings, ints) < eval_int(f.right, strings, ints)
    if isinstance(f, And):
        return all(evaluate(a, strings, ints, member) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, strings, ints, member) for a in f.args)
    if isinstance(f, Not):
        return not evaluate(f.arg, strings, ints, member)
    raise TypeError(f)
