"""First/last-character over-approximation of regex languages.

Used to refute (or pin to the empty word) a conjunction of memberships on one
variable straight from the regex syntax, without building automata. Only one
character of lookahead is tracked.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from regexlen.alphabet import Alphabet
from regexlen.regex import Comp, Concat, Empty, Lit, Regex, Star, Union


class Nullable(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def _and(a: Nullable, b: Nullable) -> Nullable:
    if Nullable.NO in (a, b):
        return Nullable.NO
    if a is Nullable.YES and b is Nullable.YES:
        return Nullable.YES
    return Nullable.UNKNOWN


def _or(a: Nullable, b: Nullable) -> Nullable:
    if Nullable.YES in (a, b):
        return Nullable.YES
    if a is Nullable.NO and b is Nullable.NO:
        return Nullable.NO
    return Nullable.UNKNOWN


@dataclass(frozen=True)
class EdgeProfile:
    first: frozenset
    last: frozenset
    nullable: Nullable


def edge_profile(re: Regex, alphabet: Alphabet) -> EdgeProfile:
    if isinstance(re, Lit):
        if not re.word:
            return EdgeProfile(frozenset(), frozenset(), Nullable.YES)
        return EdgeProfile(frozenset(re.word[0]), frozenset(re.word[-1]), Nullable.NO)
    if isinstance(re, Empty):
        return EdgeProfile(frozenset(), frozenset(), Nullable.NO)
    if isinstance(re, Union):
        l, r = edge_profile(re.left, alphabet), edge_profile(re.right, alphabet)
        return EdgeProfile(l.first | r.first, l.last | r.last, _or(l.nullable, r.nullable))
    if isinstance(re, Concat):
        l, r = edge_profile(re.left, alphabet), edge_profile(re.right, alphabet)
        first = l.first | r.first if l.nullable is not Nullable.NO else l.first
        last = l.last | r.last if r.nullable is not Nullable.NO else r.last
        return EdgeProfile(first, last, _and(l.nullable, r.nullable))
    if isinstance(re, Star):
        inner = edge_profile(re.inner, alphabet)
        return EdgeProfile(inner.first, inner.last, Nullable.YES)
    if isinstance(re, Comp):
        full = frozenset(alphabet.chars)
        return EdgeProfile(full, full, Nullable.UNKNOWN)
    raise TypeError(re)


class JointVerdict(enum.Enum):
    CONSISTENT = "consistent"
    ONLY_EMPTY_STRING = "only-empty-string"
    EMPTY_INTERSECTION = "empty-intersection"


def joint_check(profiles) -> JointVerdict:
    """Combine the profiles of all memberships on one variable."""
    profiles = list(profiles)
    if len(profiles) < 2:
        return JointVerdict.CONSISTENT
    first = frozenset.intersection(*(p.first for p in profiles))
    last = frozenset.intersection(*(p.last for p in profiles))
    if first and last:
        return JointVerdict.CONSISTENT
    # no nonempty word survives; only the empty word is left to decide
    if any(p.nullable is Nullable.NO for p in profiles):
        return JointVerdict.EMPTY_INTERSECTION
    if all(p.nullable is Nullable.YES for p in profiles):
        return JointVerdict.ONLY_EMPTY_STRING
    return JointVerdict.CONSISTENT
