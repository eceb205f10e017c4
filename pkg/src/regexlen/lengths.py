"""Length abstractions of regexes.

A complement-free regex has an exact length set, computed from its syntax as
a semilinear set (finite union of arithmetic progressions). Anything else is
summarized by lower/upper bounds, which can later be tightened against an
automaton.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd
from typing import Callable

from regexlen import automata
from regexlen.budget import ProgressionCapExceeded, tick
from regexlen.regex import Comp, Concat, Empty, Lit, Regex, Star, Union

DEFAULT_CAP = 64
# canonicalization enumerates one full period; skip it past this size
_CANON_LIMIT = 20_000


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _member(n: int, prog: tuple[int, int]) -> bool:
    o, p = prog
    if p == 0:
        return n == o
    return n >= o and (n - o) % p == 0


def _subsumes(big: tuple[int, int], small: tuple[int, int]) -> bool:
    o1, p1 = big
    o2, p2 = small
    if p1 == 0:
        return p2 == 0 and o1 == o2
    return o2 >= o1 and (o2 - o1) % p1 == 0 and p2 % p1 == 0


def _from_bits(acc: list, mu: int, lam: int) -> list:
    """Progressions for a predicate that is ``lam``-periodic from ``mu`` on."""
    period = lam
    window = acc[mu:mu + lam]
    for d in range(1, lam + 1):
        if lam % d == 0 and all(window[i] == window[i % d] for i in range(lam)):
            period = d
            break
    while mu > 0 and acc[mu - 1] == acc[mu - 1 + period]:
        mu -= 1
    progs = [(i, 0) for i in range(mu) if acc[i]]
    progs += [(mu + r, period) for r in range(period) if acc[mu + r]]
    return progs


def _reduce(progs) -> list:
    progs = sorted(set(progs), key=lambda op: (op[1] == 0, op[1], op[0]))
    kept: list = []
    for cand in progs:
        if not any(_subsumes(k, cand) for k in kept):
            kept = [k for k in kept if not _subsumes(cand, k)]
            kept.append(cand)
    return sorted(kept)


def _canonical(progs) -> list | None:
    periods = [p for _, p in progs if p]
    top = max(o for o, _ in progs)
    if not periods:
        return [(o, 0) for o in sorted({o for o, _ in progs})]
    lam = 1
    for p in periods:
        lam = _lcm(lam, p)
        if lam > _CANON_LIMIT:
            return None
    mu = top + 1
    if mu + lam > 4 * _CANON_LIMIT:
        return None
    acc = [any(_member(n, pr) for pr in progs) for n in range(mu + lam)]
    return _from_bits(acc, mu, lam)


@dataclass(frozen=True)
class SemilinearSet:
    """Finite union of progressions ``{offset + period*k : k >= 0}``.

    Period 0 denotes the singleton ``{offset}``.
    """

    progressions: tuple = ()

    @classmethod
    def of(cls, progs, cap: int = DEFAULT_CAP) -> "SemilinearSet":
        progs = _reduce(progs)
        if len(progs) > 1:
            canon = _canonical(progs)
            if canon is not None and len(canon) < len(progs):
                progs = canon
        if len(progs) > cap:
            raise ProgressionCapExceeded(f"{len(progs)} progressions exceed cap {cap}")
        return cls(tuple(progs))

    @classmethod
    def singleton(cls, n: int) -> "SemilinearSet":
        return cls(((n, 0),))

    def __contains__(self, n: int) -> bool:
        return any(_member(n, pr) for pr in self.progressions)

    def __bool__(self):
        return bool(self.progressions)

    def __len__(self):
        return len(self.progressions)

    @property
    def finite(self) -> bool:
        return all(p == 0 for _, p in self.progressions)

    def min(self) -> int:
        return min(o for o, _ in self.progressions)

    def max(self) -> int | None:
        if not self.finite:
            return None
        return max(o for o, _ in self.progressions)

    def next_member(self, n: int) -> int | None:
        """Smallest member ``>= n``."""
        best = None
        for o, p in self.progressions:
            if o >= n:
                m = o
            elif p == 0:
                continue
            else:
                m = o + -(-(n - o) // p) * p
            if best is None or m < best:
                best = m
        return best

    def prev_member(self, n: int) -> int | None:
        """Largest member ``<= n``."""
        best = None
        for o, p in self.progressions:
            if o > n:
                continue
            m = o if p == 0 else o + (n - o) // p * p
            if best is None or m > best:
                best = m
        return best

    def __str__(self):
        return "{" + ", ".join(f"({o},{p})" for o, p in self.progressions) + "}"


def semilinear_sum(a: SemilinearSet, b: SemilinearSet, cap: int = DEFAULT_CAP) -> SemilinearSet:
    """Minkowski sum ``{x + y : x in a, y in b}``."""
    out = []
    for o1, p1 in a.progressions:
        for o2, p2 in b.progressions:
            base = o1 + o2
            if p1 == 0 or p2 == 0:
                out.append((base, p1 or p2))
                continue
            g = gcd(p1, p2)
            # {i*p1 + j*p2} = union over j < p1/g of (j*p2 + p1*N); pick the cheaper side
            if p1 // g <= p2 // g:
                out += [(base + j * p2, p1) for j in range(p1 // g)]
            else:
                out += [(base + i * p1, p2) for i in range(p2 // g)]
            if len(out) > 64 * cap:
                raise ProgressionCapExceeded("sum too large")
    return SemilinearSet.of(out, cap)


def semilinear_star(a: SemilinearSet, cap: int = DEFAULT_CAP) -> SemilinearSet:
    """Additive closure of ``a`` including 0.

    The closure is a submonoid of the naturals; it is represented by its
    Apery set with respect to its least nonzero element ``m``: for every
    residue r mod m, the least closure element congruent to r, plus period m.
    """
    nonzero = [(o, p) for o, p in a.progressions if o > 0 or p > 0]
    if not nonzero:
        return SemilinearSet.singleton(0)
    m = min(o if o > 0 else o + p for o, p in nonzero)
    gens = set()
    for o, p in nonzero:
        if p == 0:
            gens.add(o)
            continue
        # later elements of the progression repeat a residue mod m at a larger value
        steps = m // gcd(m, p)
        for k in range(steps + 1):
            x = o + k * p
            if x > 0:
                gens.add(x)
    if m > 50 * cap:
        raise ProgressionCapExceeded("star period too large")
    dist = {0: 0}
    heap = [(0, 0)]
    while heap:
        tick()
        d, r = heapq.heappop(heap)
        if dist.get(r) != d:
            continue
        for x in gens:
            nd, nr = d + x, (r + x) % m
            if nr not in dist or nd < dist[nr]:
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    return SemilinearSet.of([(d, m) for d in dist.values()], cap)


def semilinear_intersect(a: SemilinearSet, b: SemilinearSet, cap: int = DEFAULT_CAP) -> SemilinearSet:
    out = []
    for pa in a.progressions:
        for pb in b.progressions:
            pr = _intersect_progressions(pa, pb)
            if pr is not None:
                out.append(pr)
    return SemilinearSet.of(out, cap)


def _intersect_progressions(pa, pb):
    (o1, p1), (o2, p2) = pa, pb
    if p1 == 0:
        return (o1, 0) if _member(o1, pb) else None
    if p2 == 0:
        return (o2, 0) if _member(o2, pa) else None
    g = gcd(p1, p2)
    if (o2 - o1) % g:
        return None
    lo = max(o1, o2)
    period = _lcm(p1, p2)
    # walk the progression with the larger period until it hits the other one
    (oa, pa_), (ob, pb_) = ((o1, p1), (o2, p2)) if p1 >= p2 else ((o2, p2), (o1, p1))
    x = oa if oa >= lo else oa + -(-(lo - oa) // pa_) * pa_
    for _ in range(pb_ // g):
        if (x - ob) % pb_ == 0:
            return (x, period)
        x += pa_
    raise AssertionError("CRT search failed")


# -- abstractions ----------------------------------------------------------


@dataclass(frozen=True)
class Exact:
    """The length set is exactly ``set``."""

    set: SemilinearSet

    @property
    def lower(self) -> int:
        return self.set.min()

    @property
    def upper(self) -> int | None:
        return self.set.max()


@dataclass(frozen=True)
class Bounds:
    """Every length lies in ``[lower, upper]`` (``upper=None`` is unbounded)."""

    lower: int = 0
    upper: int | None = None

    def __post_init__(self):
        if self.lower < 0 or (self.upper is not None and self.upper < self.lower):
            raise ValueError(f"bad bounds {self.lower}..{self.upper}")


class _EmptyLanguage:
    def __repr__(self):
        return "EmptyLanguage"


EmptyLanguage = _EmptyLanguage()


def _as_bounds(x) -> Bounds:
    if isinstance(x, Bounds):
        return x
    return Bounds(x.lower, x.upper)


def _add(u, v):
    return None if u is None or v is None else u + v


def abstract_lengths(re: Regex, cap: int = DEFAULT_CAP):
    """Length abstraction of ``re`` computed from its syntax alone.

    Returns :class:`Exact` for complement-free regexes (unless the
    progression cap forces a bounds over-approximation), :class:`Bounds`
    otherwise, and ``EmptyLanguage`` when the syntax shows the language is
    empty.
    """
    if isinstance(re, Lit):
        return Exact(SemilinearSet.singleton(len(re.word)))
    if isinstance(re, Empty):
        return EmptyLanguage
    if isinstance(re, Comp):
        return Bounds(0, None)
    if isinstance(re, Star):
        inner = abstract_lengths(re.inner, cap)
        if inner is EmptyLanguage:
            return Exact(SemilinearSet.singleton(0))
        if isinstance(inner, Exact):
            try:
                return Exact(semilinear_star(inner.set, cap))
            except ProgressionCapExceeded:
                return Bounds(0, 0 if inner.upper == 0 else None)
        return Bounds(0, 0 if inner.upper == 0 else None)
    left = abstract_lengths(re.left, cap)
    right = abstract_lengths(re.right, cap)
    if isinstance(re, Union):
        if left is EmptyLanguage:
            return right
        if right is EmptyLanguage:
            return left
        if isinstance(left, Exact) and isinstance(right, Exact):
            try:
                return Exact(SemilinearSet.of(left.set.progressions + right.set.progressions, cap))
            except ProgressionCapExceeded:
                pass
        l, r = _as_bounds(left), _as_bounds(right)
        up = None if l.upper is None or r.upper is None else max(l.upper, r.upper)
        return Bounds(min(l.lower, r.lower), up)
    if isinstance(re, Concat):
        if left is EmptyLanguage or right is EmptyLanguage:
            return EmptyLanguage
        if isinstance(left, Exact) and isinstance(right, Exact):
            try:
                return Exact(semilinear_sum(left.set, right.set, cap))
            except ProgressionCapExceeded:
                pass
        l, r = _as_bounds(left), _as_bounds(right)
        return Bounds(l.lower + r.lower, _add(l.upper, r.upper))
    raise TypeError(re)


def automaton_lengths(a: automata.Automaton, cap: int = DEFAULT_CAP) -> SemilinearSet | None:
    """Exact length set of an automaton's language, or ``None`` past the cap."""
    finite, progs = automata.accepting_lengths(a)
    try:
        return SemilinearSet.of([(n, 0) for n in finite] + progs, cap)
    except ProgressionCapExceeded:
        return None


def refine_bounds(la, a: automata.Automaton | None, existing: tuple[int, int | None]):
    """Tighten ``existing = (lower, upper)`` against the accepted lengths.

    Uses the automaton when given (its exact length set), otherwise an exact
    abstraction. Returns the refined pair, never looser than ``existing``,
    or ``None`` when no accepted length lies within the bounds.
    """
    lower, upper = existing
    if a is not None:
        finite, progs = automata.accepting_lengths(a)
        lengths = SemilinearSet(tuple([(n, 0) for n in finite] + progs))
    elif isinstance(la, Exact):
        lengths = la.set
    else:
        b = _as_bounds(la)
        lo = max(lower, b.lower)
        up = upper if b.upper is None else (b.upper if upper is None else min(upper, b.upper))
        return None if up is not None and up < lo else (lo, up)
    if not lengths:
        return None
    lo = lengths.next_member(lower)
    if lo is None or (upper is not None and lo > upper):
        return None
    if upper is not None:
        up = lengths.prev_member(upper)
    else:
        up = lengths.max()
    return lo, up


def to_linear_constraints(la, len_var, fresh: Callable[[], object]) -> list[list]:
    """Linear constraints for an abstraction, as a list of alternative branches.

    Each branch is a list of :class:`~regexlen.lia.LinearConstraint`; exact
    abstractions with several progressions give one branch per progression.
    Every branch includes ``len >= 0``.
    """
    from regexlen.lia import LinearConstraint as LC

    nonneg = LC.ge({len_var: 1}, 0)
    if isinstance(la, Bounds):
        branch = [nonneg, LC.ge({len_var: 1}, la.lower)]
        if la.upper is not None:
            branch.append(LC.le({len_var: 1}, la.upper))
        return [branch]
    branches = []
    for o, p in la.set.progressions:
        if p == 0:
            branches.append([nonneg, LC.eq({len_var: 1}, o)])
        else:
            k = fresh()
            branches.append([nonneg, LC.eq({len_var: 1, k: -p}, o), LC.ge({k: 1}, 0)])
    return branches
