"""Reference membership evaluators, independent of the automata engine.

``matches`` follows the structural definition of membership directly,
enumerating splits of the word with memoization. ``Derivatives`` decides
membership of many words sharing prefixes via Brzozowski derivatives and is
what the brute-force oracle uses.
"""

from __future__ import annotations

from functools import lru_cache

from regexlen.regex import EMPTY, EPSILON, Comp, Concat, Empty, Lit, Regex, Star, Union


def matches(word: str, re: Regex) -> bool:
    """Whether ``word`` belongs to the language of ``re``."""
    return len(word) in _ends(re, word, 0)


def _ends(re: Regex, w: str, i: int) -> frozenset:
    """All ``j`` such that ``w[i:j]`` matches ``re``."""
    memo: dict = {}

    def ends(r, i):
        key = (id(r), i)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(r, Lit):
            out = frozenset([i + len(r.word)]) if w.startswith(r.word, i) else frozenset()
        elif isinstance(r, Empty):
            out = frozenset()
        elif isinstance(r, Union):
            out = ends(r.left, i) | ends(r.right, i)
        elif isinstance(r, Concat):
            out = frozenset(k for j in ends(r.left, i) for k in ends(r.right, j))
        elif isinstance(r, Star):
            # empty word, or a nonempty first factor followed by more factors
            out = {i}
            frontier = [i]
            while frontier:
                j = frontier.pop()
                for k in ends(r.inner, j):
                    if k > j and k not in out:
                        out.add(k)
                        frontier.append(k)
            out = frozenset(out)
        elif isinstance(r, Comp):
            inner = ends(r.inner, i)
            out = frozenset(j for j in range(i, len(w) + 1) if j not in inner)
        else:
            raise TypeError(r)
        memo[key] = out
        return out

    return ends(re, i)


# -- derivatives -----------------------------------------------------------


def _union(a: Regex, b: Regex) -> Regex:
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    if a == b:
        return a
    parts = sorted(set(_flatten_union(a)) | set(_flatten_union(b)), key=repr)
    out = parts[0]
    for p in parts[1:]:
        out = Union(out, p)
    return out


def _flatten_union(r):
    if isinstance(r, Union):
        yield from _flatten_union(r.left)
        yield from _flatten_union(r.right)
    else:
        yield r


def _concat(a: Regex, b: Regex) -> Regex:
    if isinstance(a, Empty) or isinstance(b, Empty):
        return EMPTY
    if a == EPSILON:
        return b
    if b == EPSILON:
        return a
    return Concat(a, b)


@lru_cache(maxsize=None)
def nullable(r: Regex) -> bool:
    if isinstance(r, Lit):
        return r.word == ""
    if isinstance(r, Empty):
        return False
    if isinstance(r, Union):
        return nullable(r.left) or nullable(r.right)
    if isinstance(r, Concat):
        return nullable(r.left) and nullable(r.right)
    if isinstance(r, Star):
        return True
    if isinstance(r, Comp):
        return not nullable(r.inner)
    raise TypeError(r)


@lru_cache(maxsize=200_000)
def derivative(r: Regex, c: str) -> Regex:
    """Brzozowski derivative of ``r`` by the character ``c``."""
    if isinstance(r, Lit):
        if r.word and r.word[0] == c:
            return Lit(r.word[1:])
        return EMPTY
    if isinstance(r, Empty):
        return EMPTY
    if isinstance(r, Union):
        return _union(derivative(r.left, c), derivative(r.right, c))
    if isinstance(r, Concat):
        d = _concat(derivative(r.left, c), r.right)
        if nullable(r.left):
            d = _union(d, derivative(r.right, c))
        return d
    if isinstance(r, Star):
        return _concat(derivative(r.inner, c), r)
    if isinstance(r, Comp):
        return Comp(derivative(r.inner, c))
    raise TypeError(r)


def derivative_matches(word: str, re: Regex) -> bool:
    for c in word:
        re = derivative(re, c)
    return nullable(re)


def words_upto(chars: str, max_len: int):
    """All words over ``chars`` of length ``<= max_len``, shortlex order."""
    layer = [""]
    for _ in range(max_len + 1):
        yield from layer
        layer = [w + c for w in layer for c in chars]
