"""Conjunctive linear integer arithmetic.

Exact rational simplex for the relaxation, branch and bound for integrality,
and blocking clauses ("not all of these equalities at once") handled as
extra branching. Everything is arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd

from regexlen.budget import tick

DEFAULT_MAX_NODES = 100_000
_PROPAGATION_ROUNDS = 8


def _vkey(v):
    return repr(v)


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(c * x for x, c in coeffs) <rel> bound`` with ``rel`` in ``{"<=", "="}``.

    Coefficients are gcd-normalized at construction (which also tightens
    ``<=`` bounds for integers). A constraint with no coefficients is a
    constant: use :attr:`trivial` to read its truth value.
    """

    coeffs: tuple
    rel: str
    bound: int

    @classmethod
    def make(cls, coeffs: dict, rel: str, bound: int) -> "LinearConstraint":
        if rel not in ("<=", "="):
            raise ValueError(rel)
        items = sorted(((v, int(c)) for v, c in coeffs.items() if c), key=lambda vc: _vkey(vc[0]))
        g = 0
        for _, c in items:
            g = gcd(g, c)
        if g > 1:
            items = [(v, c // g) for v, c in items]
            if rel == "<=":
                bound = bound // g
            elif bound % g:
                # no integer solution; keep as the canonical false equality
                return cls((), "=", 1)
            else:
                bound = bound // g
        return cls(tuple(items), rel, int(bound))

    @classmethod
    def le(cls, coeffs, bound):
        return cls.make(coeffs, "<=", bound)

    @classmethod
    def ge(cls, coeffs, bound):
        return cls.make({v: -c for v, c in coeffs.items()}, "<=", -bound)

    @classmethod
    def eq(cls, coeffs, bound):
        return cls.make(coeffs, "=", bound)

    @classmethod
    def lt(cls, coeffs, bound):
        return cls.make(coeffs, "<=", bound - 1)

    @property
    def trivial(self) -> bool | None:
        if self.coeffs:
            return None
        return 0 <= self.bound if self.rel == "<=" else self.bound == 0

    def variables(self):
        return [v for v, _ in self.coeffs]

    def holds(self, model: dict) -> bool:
        lhs = sum(c * model[v] for v, c in self.coeffs)
        return lhs <= self.bound if self.rel == "<=" else lhs == self.bound

    def __str__(self):
        lhs = " + ".join(f"{c}*{v}" for v, c in self.coeffs) or "0"
        return f"{lhs} {self.rel} {self.bound}"


@dataclass(frozen=True)
class LiaResult:
    status: str  # "sat" | "unsat" | "unknown"
    model: dict | None = None
    nodes: int = 0

    @property
    def sat(self):
        return self.status == "sat"

    @property
    def unsat(self):
        return self.status == "unsat"


def block_violated(block: dict, model: dict) -> bool:
    return all(model.get(v) == b for v, b in block.items())


def check_sat(constraints, blocks=(), nonneg=(), max_nodes: int = DEFAULT_MAX_NODES) -> LiaResult:
    """Decide a conjunction of linear constraints over the integers.

    ``blocks`` are dicts ``{var: value}``; a model may not agree with any
    block on all its variables. Variables in ``nonneg`` are constrained to be
    ``>= 0``. Returns ``unknown`` only when ``max_nodes`` is exhausted.
    """
    return _solve(constraints, blocks, nonneg, None, max_nodes)


def minimize(objective, constraints, blocks=(), nonneg=(), max_nodes: int = DEFAULT_MAX_NODES) -> LiaResult:
    """Like :func:`check_sat` but the model minimizes ``objective``.

    ``objective`` is a variable or a ``{var: coefficient}`` dict and must be
    bounded below on the feasible set.
    """
    if not isinstance(objective, dict):
        objective = {objective: 1}
    return _solve(constraints, blocks, nonneg, objective, max_nodes)


def _solve(constraints, blocks, nonneg, objective, max_nodes) -> LiaResult:
    eqs, ineqs = [], []
    names = set(nonneg)
    for c in constraints:
        t = c.trivial
        if t is False:
            return LiaResult("unsat")
        if t is True:
            continue
        (eqs if c.rel == "=" else ineqs).append(c)
        names.update(c.variables())
    blocks = [dict(b) for b in blocks]
    for b in blocks:
        if not b:
            # an empty block forbids every model
            return LiaResult("unsat")
        names.update(b)
    if objective:
        names.update(objective)
    names = sorted(names, key=_vkey)

    # exact integer elimination of the equalities
    resolved = _eliminate([(dict(c.coeffs), -c.bound) for c in eqs])
    if resolved is None:
        return LiaResult("unsat")

    def expr(v):
        return resolved.get(v, ({v: 1}, 0))

    def affine(coeffs):
        out, const = {}, 0
        for v, c in coeffs.items():
            e, k = expr(v)
            const += c * k
            for p, d in e.items():
                out[p] = out.get(p, 0) + c * d
        return {p: d for p, d in out.items() if d}, const

    params = set()
    for v in names:
        params.update(expr(v)[0])
    params = sorted(params, key=_vkey)
    idx = {p: i for i, p in enumerate(params)}
    n = len(params)
    lo = [None] * n
    hi = [None] * n
    lin = []

    def add_row(coeffs: dict, bound: int) -> bool:
        # coeffs . params <= bound over param names; False if trivially violated
        c = LinearConstraint.le(coeffs, bound)
        t = c.trivial
        if t is not None:
            return t
        if len(c.coeffs) == 1:
            (p, a), = c.coeffs
            j = idx[p]
            if a > 0:
                nb = c.bound // a
                hi[j] = nb if hi[j] is None else min(hi[j], nb)
            else:
                nb = -(c.bound // -a)
                lo[j] = nb if lo[j] is None else max(lo[j], nb)
            return True
        lin.append(({idx[p]: a for p, a in c.coeffs}, "<=", c.bound))
        return True

    for c in ineqs:
        e, k = affine(dict(c.coeffs))
        if not add_row(e, c.bound - k):
            return LiaResult("unsat")
    for v in nonneg:
        e, k = expr(v)
        if not add_row({p: -d for p, d in e.items()}, k):
            return LiaResult("unsat")

    # blocks: single-parameter ones become excluded points
    excluded: dict = {}
    general = []
    for b in blocks:
        pairs = []
        never = False
        for v, val in sorted(b.items(), key=lambda vb: _vkey(vb[0])):
            e, k = expr(v)
            target = val - k
            if not e:
                if target != 0:
                    never = True
                    break
                continue
            g = 0
            for d in e.values():
                g = gcd(g, d)
            if target % g:
                never = True
                break
            pairs.append(({idx[p]: d for p, d in e.items()}, target))
        if never:
            continue
        if not pairs:
            return LiaResult("unsat")
        if len(pairs) == 1 and len(pairs[0][0]) == 1:
            (j, d), = pairs[0][0].items()
            excluded.setdefault(j, set()).add(pairs[0][1] // d)
            continue
        general.append(pairs)

    obj, obj_const = affine(objective) if objective else ({}, 0)
    obj = {idx[p]: d for p, d in obj.items()}

    def finish(x):
        model = {}
        for v in names:
            e, k = expr(v)
            model[v] = k + sum(d * x[idx[p]] for p, d in e.items())
        return model

    best = None
    best_val = None
    stack = [(lo, hi, ())]
    nodes = 0
    while stack:
        tick()
        nodes += 1
        if nodes > max_nodes:
            return LiaResult("unknown", nodes=nodes)
        lo, hi, extra = stack.pop()
        lo, hi = list(lo), list(hi)
        rows = lin + list(extra)
        if not _propagate(rows, lo, hi, excluded):
            continue
        corner = [lo[j] if lo[j] is not None else (hi[j] if hi[j] is not None else 0) for j in range(n)]
        fixed = all(lo[j] is not None and lo[j] == hi[j] for j in range(n))
        # the lower corner of the box is optimal whenever it is feasible and
        # the objective cannot decrease from there
        cheap = fixed or all(c >= 0 and lo[j] is not None for j, c in obj.items())
        if cheap and all(_row_holds(r, corner) for r in rows):
            x = [Fraction(v) for v in corner]
            val = sum(c * x[j] for j, c in obj.items())
        elif fixed:
            continue
        else:
            res = _lp(rows, n, lo, hi, obj)
            if res is None:
                continue
            if res == "unbounded":
                return LiaResult("unknown", nodes=nodes)
            x, val = res
        if best_val is not None and ceil(val) >= best_val:
            continue
        frac = next((j for j in range(n) if x[j].denominator != 1), None)
        if frac is None:
            # an LP vertex may still sit on an excluded point
            frac = next((j for j in excluded if int(x[j]) in excluded[j]), None)
            if frac is not None:
                v = int(x[frac])
                down_hi, up_lo = list(hi), list(lo)
                down_hi[frac], up_lo[frac] = v - 1, v + 1
                stack.append((up_lo, hi, extra))
                stack.append((lo, down_hi, extra))
                continue
        if frac is not None:
            v = x[frac]
            down_hi, up_lo = list(hi), list(lo)
            down_hi[frac], up_lo[frac] = floor(v), ceil(v)
            stack.append((up_lo, hi, extra))
            stack.append((lo, down_hi, extra))
            continue
        xi = [int(v) for v in x]
        hit = next((pairs for pairs in general
                    if all(sum(d * xi[j] for j, d in e.items()) == t for e, t in pairs)), None)
        if hit is not None:
            # branch on one equality of the block: e <= t - 1 or e >= t + 1
            open_pairs = [(e, t) for e, t in hit if not _fixed(e, lo, hi)] or [hit[0]]
            e, t = min(open_pairs, key=lambda et: len(et[0]))
            if _fixed(e, lo, hi):
                continue
            if len(e) == 1:
                # on a single parameter the split is just a bound change
                (j, d), = e.items()
                v = t // d
                down_hi, up_lo = list(hi), list(lo)
                down_hi[j], up_lo[j] = v - 1, v + 1
                stack.append((up_lo, hi, extra))
                stack.append((lo, down_hi, extra))
                continue
            down = (e, "<=", t - 1)
            up = ({j: -d for j, d in e.items()}, "<=", -(t + 1))
            stack.append((lo, hi, extra + (up,)))
            stack.append((lo, hi, extra + (down,)))
            continue
        if not obj:
            return LiaResult("sat", finish(xi), nodes)
        value = sum(c * xi[j] for j, c in obj.items())
        if best_val is None or value < best_val:
            best, best_val = finish(xi), value
    if best is not None:
        return LiaResult("sat", best, nodes)
    return LiaResult("unsat", nodes=nodes)


def _fixed(e, lo, hi) -> bool:
    return all(lo[j] is not None and lo[j] == hi[j] for j in e)


def _row_holds(row, x) -> bool:
    coeffs, rel, bound = row
    lhs = sum(c * x[j] for j, c in coeffs.items())
    return lhs <= bound if rel == "<=" else lhs == bound


def _mod_hat(a: int, m: int) -> int:
    # symmetric residue in (-m/2, m/2]
    return a - m * ((2 * a + m) // (2 * m))


def _eliminate(eqs):
    """Solve integer equalities ``sum(c x) + k = 0`` by substitution.

    Returns ``{var: (coeffs, const)}`` expressing every eliminated variable
    over the remaining ones (plus fresh parameters), or ``None`` when the
    equalities have no integer solution. Coefficients larger than one are
    shrunk with the least-remainder step of the Omega test.
    """
    eqs = [({v: c for v, c in e.items() if c}, k) for e, k in eqs]
    subs = []
    fresh = 0
    while eqs:
        tick()
        e, k = eqs.pop()
        e = {v: c for v, c in e.items() if c}
        if not e:
            if k:
                return None
            continue
        g = 0
        for c in e.values():
            g = gcd(g, c)
        if k % g:
            return None
        e = {v: c // g for v, c in e.items()}
        k //= g
        x = min(e, key=lambda v: (abs(e[v]), _vkey(v)))
        a = e[x]
        if abs(a) == 1:
            # x = -a * (rest + k)
            sub = ({v: -a * c for v, c in e.items() if v != x}, -a * k)
            keep = None
        else:
            m = abs(a) + 1
            sigma = ("~sigma", fresh)
            fresh += 1
            sign = 1 if a > 0 else -1
            coeffs = {v: sign * _mod_hat(c, m) for v, c in e.items() if v != x}
            coeffs[sigma] = -sign * m
            sub = ({v: c for v, c in coeffs.items() if c}, sign * _mod_hat(k, m))
            keep = (e, k)
        subs.append((x, sub))
        if keep is not None:
            eqs.append(keep)
        eqs = [_substitute(q, qk, x, sub) for q, qk in eqs]
    resolved: dict = {}
    for x, (e, k) in reversed(subs):
        out, const = {}, k
        for v, c in e.items():
            if v in resolved:
                re_, rk = resolved[v]
                const += c * rk
                for p, d in re_.items():
                    out[p] = out.get(p, 0) + c * d
            else:
                out[v] = out.get(v, 0) + c
        resolved[x] = ({p: d for p, d in out.items() if d}, const)
    return resolved


def _substitute(e: dict, k: int, x, sub):
    c = e.get(x)
    if not c:
        return e, k
    se, sk = sub
    out = {v: d for v, d in e.items() if v != x}
    for v, d in se.items():
        out[v] = out.get(v, 0) + c * d
    return {v: d for v, d in out.items() if d}, k + c * sk


def _propagate(lin, lo, hi, excluded=None) -> bool:
    """Interval bound propagation with integer rounding; False on conflict.

    ``excluded`` maps a variable index to values it may not take; bounds
    sitting on such a value are pushed past it.
    """
    excluded = excluded or {}
    if any(a is not None and b is not None and a > b for a, b in zip(lo, hi)):
        return False
    for _ in range(_PROPAGATION_ROUNDS):
        changed = False
        for j, bad in excluded.items():
            if lo[j] is not None:
                while lo[j] in bad:
                    lo[j] += 1
                    changed = True
            if hi[j] is not None:
                while hi[j] in bad:
                    hi[j] -= 1
                    changed = True
            if lo[j] is not None and hi[j] is not None and lo[j] > hi[j]:
                return False
        for coeffs, rel, bound in lin:
            for sense in ((1,) if rel == "<=" else (1, -1)):
                # sense * sum(c x) <= sense * bound
                b = sense * bound
                terms = [(j, sense * c) for j, c in coeffs.items()]
                mins = []
                inf_count = 0
                total = 0
                for j, c in terms:
                    m = (c * lo[j] if lo[j] is not None else None) if c > 0 else \
                        (c * hi[j] if hi[j] is not None else None)
                    mins.append(m)
                    if m is None:
                        inf_count += 1
                    else:
                        total += m
                if inf_count > 1:
                    continue
                for (j, c), m in zip(terms, mins):
                    if inf_count == 1 and m is not None:
                        continue
                    rest = total - (m if m is not None else 0)
                    # c * x_j <= b - rest
                    slack = b - rest
                    if c > 0:
                        nb = slack // c
                        if hi[j] is None or nb < hi[j]:
                            hi[j] = nb
                            changed = True
                    else:
                        nb = -((slack) // (-c))
                        if lo[j] is None or nb > lo[j]:
                            lo[j] = nb
                            changed = True
                    if lo[j] is not None and hi[j] is not None and lo[j] > hi[j]:
                        return False
        if not changed:
            break
    return True


def _lp(lin, n, lo, hi, obj):
    """Minimize ``obj`` over the rational relaxation.

    Returns ``(x, value)``, ``None`` if infeasible or ``"unbounded"``.
    """
    # column layout: each variable is an offset plus signed nonnegative columns
    cols: list[list] = []
    offset = [0] * n
    ncol = 0
    bound_rows = []
    for j in range(n):
        if lo[j] is not None:
            offset[j] = lo[j]
            cols.append([(ncol, 1)])
            if hi[j] is not None:
                if hi[j] == lo[j]:
                    cols[-1] = []
                    continue
                bound_rows.append(({ncol: 1}, "<=", hi[j] - lo[j]))
            ncol += 1
        elif hi[j] is not None:
            offset[j] = hi[j]
            cols.append([(ncol, -1)])
            ncol += 1
        else:
            cols.append([(ncol, 1), (ncol + 1, -1)])
            ncol += 2
    rows = []
    for coeffs, rel, bound in lin:
        r = {}
        rhs = bound
        for j, c in coeffs.items():
            rhs -= c * offset[j]
            for col, s in cols[j]:
                r[col] = r.get(col, 0) + c * s
        r = {k: v for k, v in r.items() if v}
        if not r:
            if (rel == "<=" and rhs < 0) or (rel == "=" and rhs != 0):
                return None
            continue
        rows.append((r, rel, rhs))
    rows += bound_rows
    cost = [Fraction(0)] * ncol
    const = 0
    for j, c in obj.items():
        const += c * offset[j]
        for col, s in cols[j]:
            cost[col] += c * s
    y = _simplex(rows, ncol, cost)
    if y is None or y == "unbounded":
        return y
    x = []
    for j in range(n):
        v = Fraction(offset[j])
        for col, s in cols[j]:
            v += s * y[col]
        x.append(v)
    value = const + sum((cost[k] * y[k] for k in range(ncol)), Fraction(0))
    return x, value


def _pivot(T, r, c):
    row = T[r]
    p = row[c]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]


def _run(T, basis, m, limit_col):
    """Bland's-rule simplex on tableau rows ``T[:m]``; objective row is ``T[m]``."""
    while True:
        tick()
        obj = T[m]
        enter = next((j for j in range(limit_col) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, best[1], enter)
        basis[best[1]] = enter


def _simplex(rows, ncol, cost):
    """Two-phase simplex for ``min cost.y`` s.t. rows, ``y >= 0``."""
    if not rows:
        if any(c < 0 for c in cost):
            return "unbounded"
        return [Fraction(0)] * ncol
    nslack = sum(1 for _, rel, _ in rows if rel == "<=")
    width = ncol + nslack
    T = []
    basis = []
    need_art = []
    s = ncol
    for r, rel, rhs in rows:
        line = [Fraction(0)] * (width + 1)
        for k, v in r.items():
            line[k] = Fraction(v)
        slack = None
        if rel == "<=":
            line[s] = Fraction(1)
            slack = s
            s += 1
        line[-1] = Fraction(rhs)
        if rhs < 0:
            line = [-v for v in line]
            slack = None
        T.append(line)
        basis.append(slack)
        if slack is None:
            need_art.append(len(T) - 1)
    m = len(T)
    nart = len(need_art)
    if nart:
        for i in range(m):
            T[i] = T[i][:-1] + [Fraction(0)] * nart + [T[i][-1]]
        for k, i in enumerate(need_art):
            T[i][width + k] = Fraction(1)
            basis[i] = width + k
        obj = [Fraction(0)] * (width + nart + 1)
        for k in range(nart):
            obj[width + k] = Fraction(1)
        for i in need_art:
            obj = [a - b for a, b in zip(obj, T[i])]
        T.append(obj)
        _run(T, basis, m, width + nart)
        if T[m][-1] != 0:
            return None
        T.pop()
        # drive artificial variables out of the basis
        i = 0
        while i < len(T):
            if basis[i] >= width:
                j = next((j for j in range(width) if T[i][j] != 0), None)
                if j is None:
                    T.pop(i)
                    basis.pop(i)
                    continue
                _pivot(T, i, j)
                basis[i] = j
            i += 1
        T = [line[:width] + [line[-1]] for line in T]
        m = len(T)
    obj = [Fraction(c) for c in cost] + [Fraction(0)] * (width - ncol) + [Fraction(0)]
    for i in range(m):
        cb = obj[basis[i]]
        if cb:
            obj = [a - cb * b for a, b in zip(obj, T[i])]
    T.append(obj)
    if not _run(T, basis, m, width):
        return "unbounded"
    y = [Fraction(0)] * width
    for i in range(m):
        y[basis[i]] = T[i][-1]
    return y[:ncol]
