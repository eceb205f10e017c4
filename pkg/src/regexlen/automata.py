"""Finite automata over character-index intervals.

Regexes compile through a Thompson-style construction; epsilon moves are
eliminated before an :class:`Automaton` is handed out, so every automaton
returned by this module is epsilon-free and trimmed (all states reachable and
co-reachable). Complement goes through subset construction with interval
splitting.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from regexlen.alphabet import Alphabet
from regexlen.budget import StateBudgetExceeded, tick
from regexlen.regex import Comp, Concat, Empty, Lit, Regex, Star, Union

DEFAULT_MAX_STATES = 1_000_000
COST_MAX = 2**64 - 1

_constructed = 0


def construction_count() -> int:
    """Number of automata constructed in this process so far."""
    return _constructed


@dataclass(frozen=True, eq=False)
class Automaton:
    size: int
    num_states: int
    initial: int
    accepting: frozenset
    transitions: tuple
    epsilon: tuple
    deterministic: bool = False

    def __post_init__(self):
        global _constructed
        _constructed += 1
        n = self.num_states
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        if len(self.transitions) != n or len(self.epsilon) != n:
            raise ValueError("per-state tables must cover every state")
        for edges in self.transitions:
            for lo, hi, t in edges:
                if not (0 <= lo <= hi < self.size and 0 <= t < n):
                    raise ValueError(f"bad transition {(lo, hi, t)}")
        if self.deterministic:
            if any(self.epsilon):
                raise ValueError("deterministic automaton with epsilon moves")
            for edges in self.transitions:
                ivs = sorted((lo, hi) for lo, hi, _ in edges)
                if any(a[1] >= b[0] for a, b in zip(ivs, ivs[1:])):
                    raise ValueError("overlapping intervals in deterministic automaton")

    @property
    def epsilon_free(self) -> bool:
        return not any(self.epsilon)

    def __repr__(self):
        return (f"Automaton(states={self.num_states}, accepting={sorted(self.accepting)}, "
                f"deterministic={self.deterministic})")


def empty_automaton(size: int) -> Automaton:
    return Automaton(size, 1, 0, frozenset(), ((),), ((),), True)


def universal_automaton(size: int) -> Automaton:
    return Automaton(size, 1, 0, frozenset([0]), (((0, size - 1, 0),),), ((),), True)


# -- construction ----------------------------------------------------------


class _Builder:
    def __init__(self, alphabet: Alphabet, max_states: int):
        self.alphabet = alphabet
        self.max_states = max_states
        self.trans: list[list] = []
        self.eps: list[list] = []

    def state(self) -> int:
        if len(self.trans) >= self.max_states:
            raise StateBudgetExceeded(f"more than {self.max_states} states")
        tick()
        self.trans.append([])
        self.eps.append([])
        return len(self.trans) - 1

    def fragment(self, re: Regex) -> tuple[int, int]:
        if isinstance(re, Lit):
            start = cur = self.state()
            for c in re.word:
                i = self.alphabet.index(c)
                nxt = self.state()
                self.trans[cur].append((i, i, nxt))
                cur = nxt
            return start, cur
        if isinstance(re, Empty):
            return self.state(), self.state()
        if isinstance(re, Concat):
            s1, e1 = self.fragment(re.left)
            s2, e2 = self.fragment(re.right)
            self.eps[e1].append(s2)
            return s1, e2
        if isinstance(re, Union):
            chars = self._char_set(re)
            if chars is not None:
                # a character class: one step, labels merged into intervals
                s, f = self.state(), self.state()
                self.trans[s] = [(i, i, f) for i in sorted(chars)]
                return s, f
            s, f = self.state(), self.state()
            for part in (re.left, re.right):
                si, ei = self.fragment(part)
                self.eps[s].append(si)
                self.eps[ei].append(f)
            return s, f
        if isinstance(re, Star):
            s, f = self.state(), self.state()
            si, ei = self.fragment(re.inner)
            self.eps[s] += [si, f]
            self.eps[ei] += [si, f]
            return s, f
        if isinstance(re, Comp):
            inner = compile_regex(re.inner, self.alphabet, self.max_states)
            return self.embed(complement(inner, self.max_states))
        raise TypeError(re)

    def _char_set(self, re: Regex) -> set | None:
        out = set()
        stack = [re]
        while stack:
            r = stack.pop()
            if isinstance(r, Union):
                stack += [r.left, r.right]
            elif isinstance(r, Lit) and len(r.word) == 1:
                out.add(self.alphabet.index(r.word))
            else:
                return None
        return out

    def embed(self, a: Automaton) -> tuple[int, int]:
        base = len(self.trans)
        for _ in range(a.num_states):
            self.state()
        for q in range(a.num_states):
            self.trans[base + q] = [(lo, hi, base + t) for lo, hi, t in a.transitions[q]]
        f = self.state()
        for q in a.accepting:
            self.eps[base + q].append(f)
        return base + a.initial, f


def compile_regex(re: Regex, alphabet: Alphabet, max_states: int = DEFAULT_MAX_STATES) -> Automaton:
    """Compile a grounded regex to a trimmed epsilon-free automaton."""
    b = _Builder(alphabet, max_states)
    start, end = b.fragment(re)
    return _finish(alphabet.size, b.trans, b.eps, start, {end})


def _merge_intervals(edges) -> tuple:
    by_target: dict[int, list] = {}
    for lo, hi, t in edges:
        by_target.setdefault(t, []).append((lo, hi))
    out = []
    for t, ivs in by_target.items():
        ivs.sort()
        cur_lo, cur_hi = ivs[0]
        for lo, hi in ivs[1:]:
            if lo <= cur_hi + 1:
                cur_hi = max(cur_hi, hi)
            else:
                out.append((cur_lo, cur_hi, t))
                cur_lo, cur_hi = lo, hi
        out.append((cur_lo, cur_hi, t))
    out.sort()
    return tuple(out)


def _finish(size, trans, eps, initial, accepting, deterministic=False) -> Automaton:
    """Eliminate epsilon moves, merge labels, trim and renumber."""
    n = len(trans)
    if any(eps):
        closures = []
        for s in range(n):
            seen = {s}
            stack = [s]
            while stack:
                q = stack.pop()
                for r in eps[q]:
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
            closures.append(seen)
        new_trans = []
        new_acc = set()
        for s in range(n):
            edges = []
            for q in closures[s]:
                edges.extend(trans[q])
            new_trans.append(edges)
            if closures[s] & accepting:
                new_acc.add(s)
        trans, accepting = new_trans, new_acc
    return _trim(size, trans, initial, accepting, deterministic)


def _trim(size, trans, initial, accepting, deterministic=False) -> Automaton:
    n = len(trans)
    order = [initial]
    reach = {initial}
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for _, _, t in sorted(trans[s]):
            if t not in reach:
                reach.add(t)
                order.append(t)
    rev: list[list] = [[] for _ in range(n)]
    for s in order:
        for _, _, t in trans[s]:
            rev[t].append(s)
    live = {s for s in accepting if s in reach}
    stack = list(live)
    while stack:
        q = stack.pop()
        for p in rev[q]:
            if p not in live:
                live.add(p)
                stack.append(p)
    if initial not in live:
        return empty_automaton(size)
    keep = [s for s in order if s in live]
    ren = {s: i for i, s in enumerate(keep)}
    new_trans = tuple(
        _merge_intervals((lo, hi, ren[t]) for lo, hi, t in trans[s] if t in live) for s in keep
    )
    return Automaton(size, len(keep), 0, frozenset(ren[s] for s in accepting if s in live),
                     new_trans, ((),) * len(keep), deterministic)


def _segments(edges, size):
    """Split ``[0, size)`` at every interval boundary of ``edges``."""
    cuts = {0, size}
    for lo, hi, _ in edges:
        cuts.add(lo)
        cuts.add(hi + 1)
    cuts = sorted(cuts)
    return list(zip(cuts, cuts[1:]))


def determinize(a: Automaton, max_states: int = DEFAULT_MAX_STATES, complete: bool = True):
    """Subset construction. Returns ``(trans, accepting_subsets_mask, initial)`` lists.

    The result is complete when ``complete`` is set: missing moves go to the
    empty subset, which becomes an explicit sink.
    """
    size = a.size
    start = frozenset([a.initial])
    index = {start: 0}
    subsets = [start]
    trans: list[list] = []
    i = 0
    while i < len(subsets):
        tick()
        S = subsets[i]
        i += 1
        edges = [e for s in S for e in a.transitions[s]]
        out = []
        for lo, hi in _segments(edges, size):
            tgt = frozenset(t for elo, ehi, t in edges if elo <= lo <= ehi)
            if not tgt and not complete:
                continue
            j = index.get(tgt)
            if j is None:
                if len(subsets) >= max_states:
                    raise StateBudgetExceeded(f"determinization exceeded {max_states} states")
                j = index[tgt] = len(subsets)
                subsets.append(tgt)
            out.append((lo, hi - 1, j))
        trans.append(out)
    accepting = [bool(S & a.accepting) for S in subsets]
    return trans, accepting


def complement(a: Automaton, max_states: int = DEFAULT_MAX_STATES) -> Automaton:
    """Automaton for the complement language (over the same alphabet)."""
    trans, accepting = determinize(a, max_states)
    flipped = {i for i, acc in enumerate(accepting) if not acc}
    return _trim(a.size, trans, 0, flipped, deterministic=True)


def intersect(a: Automaton, b: Automaton, max_states: int = DEFAULT_MAX_STATES) -> Automaton:
    """Reachable part of the product automaton."""
    if a.size != b.size:
        raise ValueError("automata over different alphabets")
    if not a.epsilon_free:
        a = _finish(a.size, [list(e) for e in a.transitions], [list(e) for e in a.epsilon],
                    a.initial, set(a.accepting))
    if not b.epsilon_free:
        b = _finish(b.size, [list(e) for e in b.transitions], [list(e) for e in b.epsilon],
                    b.initial, set(b.accepting))
    start = (a.initial, b.initial)
    index = {start: 0}
    pairs = [start]
    trans: list[list] = []
    i = 0
    while i < len(pairs):
        tick()
        p, q = pairs[i]
        i += 1
        out = []
        for lo1, hi1, t1 in a.transitions[p]:
            for lo2, hi2, t2 in b.transitions[q]:
                lo, hi = max(lo1, lo2), min(hi1, hi2)
                if lo > hi:
                    continue
                key = (t1, t2)
                j = index.get(key)
                if j is None:
                    if len(pairs) >= max_states:
                        raise StateBudgetExceeded(f"product exceeded {max_states} states")
                    j = index[key] = len(pairs)
                    pairs.append(key)
                out.append((lo, hi, j))
        trans.append(out)
    accepting = {j for j, (p, q) in enumerate(pairs) if p in a.accepting and q in b.accepting}
    return _trim(a.size, trans, 0, accepting, a.deterministic and b.deterministic)


# -- queries ---------------------------------------------------------------


def is_empty(a: Automaton) -> bool:
    if not a.accepting:
        return True
    seen = {a.initial}
    stack = [a.initial]
    while stack:
        s = stack.pop()
        if s in a.accepting:
            return False
        for t in list(a.epsilon[s]) + [t for _, _, t in a.transitions[s]]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return True


def accepts(a: Automaton, word: str, alphabet: Alphabet) -> bool:
    cur = _eps_closure(a, {a.initial})
    for c in word:
        if c not in alphabet:
            return False
        i = alphabet.index(c)
        cur = _eps_closure(a, {t for s in cur for lo, hi, t in a.transitions[s] if lo <= i <= hi})
        if not cur:
            return False
    return bool(cur & a.accepting)


def _eps_closure(a: Automaton, states: set) -> set:
    if a.epsilon_free:
        return states
    seen = set(states)
    stack = list(states)
    while stack:
        for t in a.epsilon[stack.pop()]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def shortest_accepting_length(a: Automaton) -> int | None:
    """Length of the shortest accepted word, or ``None`` for the empty language."""
    if not a.accepting:
        return None
    start = _eps_closure(a, {a.initial})
    dist = {s: 0 for s in start}
    queue = deque(sorted(start))
    while queue:
        s = queue.popleft()
        if s in a.accepting:
            return dist[s]
        for t in a.epsilon[s]:
            if t not in dist:
                dist[t] = dist[s]
                queue.appendleft(t)
        for _, _, t in a.transitions[s]:
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)
    return None


def _post(a: Automaton, states: frozenset) -> frozenset:
    return frozenset(t for s in states for _, _, t in a.transitions[s])


def _require_eps_free(a: Automaton):
    if not a.epsilon_free:
        raise ValueError("fixed-length queries need an epsilon-free automaton")


class _Ultimate:
    """Eventually periodic sequence of state sets ``X_{i+1} = step(X_i)``."""

    def __init__(self, first: frozenset, step, limit: int):
        self.sets = [first]
        index = {first: 0}
        while True:
            tick()
            nxt = step(self.sets[-1])
            if nxt in index:
                self.mu = index[nxt]
                self.lam = len(self.sets) - self.mu
                return
            if len(self.sets) >= limit:
                raise StateBudgetExceeded(f"length sequence exceeded {limit} distinct sets")
            index[nxt] = len(self.sets)
            self.sets.append(nxt)

    def __getitem__(self, n: int) -> frozenset:
        if n < len(self.sets):
            return self.sets[n]
        return self.sets[self.mu + (n - self.mu) % self.lam]


def _forward(a: Automaton, limit: int = DEFAULT_MAX_STATES) -> _Ultimate:
    return _Ultimate(frozenset([a.initial]), lambda S: _post(a, S), limit)


def _backward(a: Automaton, limit: int = DEFAULT_MAX_STATES) -> _Ultimate:
    rev: list[set] = [set() for _ in range(a.num_states)]
    for s in range(a.num_states):
        for _, _, t in a.transitions[s]:
            rev[t].add(s)
    return _Ultimate(frozenset(a.accepting),
                     lambda S: frozenset(p for q in S for p in rev[q]), limit)


def has_accepting_path_of_length(a: Automaton, n: int) -> bool:
    """Whether some word of length exactly ``n`` is accepted.

    Iterates the set of states reachable in ``i`` steps; the sequence is
    eventually periodic, so long lengths cost no more than one period.
    """
    _require_eps_free(a)
    if n < 0 or not a.accepting:
        return False
    cur = frozenset([a.initial])
    seen = {cur: 0}
    i = 0
    while i < n:
        cur = _post(a, cur)
        i += 1
        if not cur:
            return False
        j = seen.get(cur)
        if j is not None:
            lam = i - j
            remaining = (n - i) % lam
            for _ in range(remaining):
                cur = _post(a, cur)
            break
        seen[cur] = i
    return bool(cur & a.accepting)


def accepting_lengths(a: Automaton, limit: int = DEFAULT_MAX_STATES):
    """Exact length set of ``L(a)`` as ``(finite, progressions)``.

    ``finite`` lists accepted lengths below the preperiod; ``progressions``
    lists ``(offset, period)`` pairs covering everything from it on.
    """
    _require_eps_free(a)
    seq = _forward(a, limit)
    acc = [bool(S & a.accepting) for S in seq.sets]
    mu, lam = seq.mu, seq.lam
    if not any(acc[mu:]):
        return [i for i in range(mu) if acc[i]], []
    period = lam
    window = acc[mu:mu + lam]
    for d in sorted(_divisors(lam)):
        if all(window[i] == window[i % d] for i in range(lam)):
            period = d
            break
    # pull the periodic part back as far as it goes
    while mu > 0 and acc[mu - 1] == acc[mu - 1 + period]:
        mu -= 1
    finite = [i for i in range(mu) if acc[i]]
    progs = [(mu + r, period) for r in range(period) if acc[mu + r]]
    return finite, progs


def _divisors(n: int):
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return out


def max_accepting_length(a: Automaton) -> int | None:
    """Longest accepted length when ``L(a)`` is finite, else ``None``.

    Expects a trimmed automaton (every automaton built here is): the language
    is finite exactly when the transition graph is acyclic.
    """
    _require_eps_free(a)
    if not a.accepting:
        return None
    n = a.num_states
    color = [0] * n
    longest = [0] * n
    # iterative DFS; longest[s] = longest accepted suffix from s
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(sorted({t for _, _, t in a.transitions[root]})))]
        color[root] = 1
        while stack:
            s, it = stack[-1]
            child = next(it, None)
            if child is None:
                stack.pop()
                color[s] = 2
                best = 0 if s in a.accepting else -1
                for _, _, t in a.transitions[s]:
                    if longest[t] >= 0:
                        best = max(best, longest[t] + 1)
                longest[s] = best
                continue
            if color[child] == 1:
                return None
            if color[child] == 0:
                color[child] = 1
                stack.append((child, iter(sorted({t for _, _, t in a.transitions[child]}))))
    return longest[a.initial] if longest[a.initial] >= 0 else None


def joint_path_of_length(autos, n: int, alphabet: Alphabet,
                         max_states: int = DEFAULT_MAX_STATES) -> str | None:
    """A word of length ``n`` accepted by every automaton, or ``None``.

    Breadth-first over tuples of per-automaton state sets, one layer per
    position; no product automaton is materialized. Sets are pruned to states
    that can still reach acceptance in the remaining number of steps. Layers
    are explored in character order, so the result is the least such word.
    """
    autos = list(autos)
    if not autos:
        raise ValueError("need at least one automaton")
    for a in autos:
        _require_eps_free(a)
        if a.size != alphabet.size:
            raise ValueError("automaton and alphabet disagree")
    if n < 0:
        return None
    backs = [_backward(a, max_states) for a in autos]
    first = tuple(frozenset([a.initial]) & b[n] for a, b in zip(autos, backs))
    if not all(first):
        return None
    layers = [[first]]
    parents: list[list] = [[None]]
    visited = 1
    for pos in range(n):
        rem = n - pos - 1
        layer, nxt_index = [], {}
        nxt_parent = []
        targets = [b[rem] for b in backs]
        for k, tup in enumerate(layers[-1]):
            tick()
            per = [[e for s in S for e in a.transitions[s]] for a, S in zip(autos, tup)]
            for lo, _hi in _segments([e for edges in per for e in edges], alphabet.size):
                succ = []
                for edges, keep in zip(per, targets):
                    S = frozenset(t for elo, ehi, t in edges if elo <= lo <= ehi and t in keep)
                    if not S:
                        break
                    succ.append(S)
                else:
                    key = tuple(succ)
                    if key not in nxt_index:
                        visited += 1
                        if visited > max_states:
                            raise StateBudgetExceeded(f"joint search exceeded {max_states} tuples")
                        nxt_index[key] = len(layer)
                        layer.append(key)
                        nxt_parent.append((k, lo))
        if not layer:
            return None
        layers.append(layer)
        parents.append(nxt_parent)
    chars = []
    k = 0
    for pos in range(n, 0, -1):
        k, c = parents[pos][k]
        chars.append(alphabet.char(c))
    word = "".join(reversed(chars))
    for a in autos:
        assert accepts(a, word, alphabet), "witness failed membership re-check"
    return word


def extract_word_of_length(a: Automaton, n: int, alphabet: Alphabet,
                           max_states: int = DEFAULT_MAX_STATES) -> str | None:
    """Least word of length ``n`` in ``L(a)``, or ``None``."""
    return joint_path_of_length([a], n, alphabet, max_states)


# -- cost estimate ---------------------------------------------------------


def _sat(x: int) -> int:
    return COST_MAX if x > COST_MAX else x


def estimate_cost(re: Regex) -> int:
    """Syntactic estimate of automaton construction cost (saturating)."""
    if isinstance(re, Lit):
        return max(1, len(re.word))
    if isinstance(re, Empty):
        return 1
    if isinstance(re, (Concat, Union)):
        return _sat(estimate_cost(re.left) + estimate_cost(re.right))
    if isinstance(re, Star):
        return _sat(2 * estimate_cost(re.inner))
    if isinstance(re, Comp):
        x = re.inner
        if isinstance(x, (Concat, Union)):
            children = [x.left, x.right]
        elif isinstance(x, (Star, Comp)):
            children = [x.inner]
        else:
            # a leaf has no proper subterms; use the leaf itself
            children = [x]
        prod = 1
        for c in children:
            prod = _sat(prod * estimate_cost(c))
        return prod
    raise TypeError(re)


# -- export ----------------------------------------------------------------


def to_dot(a: Automaton, alphabet: Alphabet, name: str = "A") -> str:
    def label(lo, hi):
        if lo == hi:
            return _dot_char(alphabet.char(lo))
        return f"[{_dot_char(alphabet.char(lo))}-{_dot_char(alphabet.char(hi))}]"

    lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  __start [shape=point];']
    for s in range(a.num_states):
        shape = "doublecircle" if s in a.accepting else "circle"
        lines.append(f"  q{s} [shape={shape}];")
    lines.append(f"  __start -> q{a.initial};")
    for s in range(a.num_states):
        for lo, hi, t in a.transitions[s]:
            lines.append(f'  q{s} -> q{t} [label="{label(lo, hi)}"];')
        for t in a.epsilon[s]:
            lines.append(f'  q{s} -> q{t} [label="&epsilon;"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_char(c: str) -> str:
    if c in '"\\':
        return "\\" + c
    if c == " ":
        return "␣"
    return c

