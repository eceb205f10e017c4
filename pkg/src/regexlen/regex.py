"""Grounded regex terms.

The five constructors of the input language plus ``Empty`` (the empty
language, spelled ``re.none``). Terms are immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce


class Regex:
    __slots__ = ()


@dataclass(frozen=True)
class Lit(Regex):
    word: str


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Comp(Regex):
    inner: Regex


@dataclass(frozen=True)
class Empty(Regex):
    pass


EPSILON = Lit("")
EMPTY = Empty()


def concat(*parts: Regex) -> Regex:
    if not parts:
        return EPSILON
    return reduce(Concat, parts)


def union(*parts: Regex) -> Regex:
    if not parts:
        return EMPTY
    # balanced, so long character classes do not produce deep recursion
    parts = list(parts)
    while len(parts) > 1:
        parts = [Union(parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i]
                 for i in range(0, len(parts), 2)]
    return parts[0]


def plus(r: Regex) -> Regex:
    return Concat(r, Star(r))


def opt(r: Regex) -> Regex:
    return Union(r, EPSILON)


def char_class(chars) -> Regex:
    return union(*(Lit(c) for c in chars))


def intersection(a: Regex, b: Regex) -> Regex:
    # only via complement: the input language has no native intersection
    return Comp(Union(Comp(a), Comp(b)))


def size(r: Regex) -> int:
    if isinstance(r, (Lit, Empty)):
        return 1
    if isinstance(r, (Concat, Union)):
        return 1 + size(r.left) + size(r.right)
    return 1 + size(r.inner)


def has_complement(r: Regex) -> bool:
    if isinstance(r, Comp):
        return True
    if isinstance(r, (Concat, Union)):
        return has_complement(r.left) or has_complement(r.right)
    if isinstance(r, Star):
        return has_complement(r.inner)
    return False


def literals(r: Regex):
    """Yield every literal word occurring in ``r``."""
    stack = [r]
    while stack:
        t = stack.pop()
        if isinstance(t, Lit):
            yield t.word
        elif isinstance(t, (Concat, Union)):
            stack.append(t.right)
            stack.append(t.left)
        elif isinstance(t, (Star, Comp)):
            stack.append(t.inner)


def simplify_double_complement(r: Regex) -> Regex:
    """Peephole ``comp(comp(R)) -> R``; off by default in the solver."""
    if isinstance(r, Comp):
        inner = simplify_double_complement(r.inner)
        if isinstance(inner, Comp):
            return inner.inner
        return Comp(inner)
    if isinstance(r, Concat):
        return Concat(simplify_double_complement(r.left), simplify_double_complement(r.right))
    if isinstance(r, Union):
        return Union(simplify_double_complement(r.left), simplify_double_complement(r.right))
    if isinstance(r, Star):
        return Star(simplify_double_complement(r.inner))
    return r


def quote(word: str) -> str:
    """SMT-LIB 2.6 string literal with ``\\u{XX}`` escapes for non-printables."""
    out = []
    for c in word:
        code = ord(c)
        if c == '"':
            out.append('""')
        elif c == "\\" or code < 0x20 or code > 0x7E:
            out.append("\\u{%x}" % code)
        else:
            out.append(c)
    return '"' + "".join(out) + '"'


def to_smtlib(r: Regex) -> str:
    if isinstance(r, Lit):
        return f"(str.to_re {quote(r.word)})"
    if isinstance(r, Empty):
        return "re.none"
    if isinstance(r, Concat):
        return f"(re.++ {to_smtlib(r.left)} {to_smtlib(r.right)})"
    if isinstance(r, Union):
        return f"(re.union {to_smtlib(r.left)} {to_smtlib(r.right)})"
    if isinstance(r, Star):
        return f"(re.* {to_smtlib(r.inner)})"
    if isinstance(r, Comp):
        return f"(re.comp {to_smtlib(r.inner)})"
    raise TypeError(r)
