import random

from hypothesis import given
from hypothesis import strategies as st

from conftest import lia_brute_force, random_lia_system
from regexlen.lia import LinearConstraint as LC
from regexlen.lia import block_violated, check_sat, minimize


def test_multiple_of_three_at_least_five():
    r = minimize("len", [LC.eq({"len": 1, "k": -3}, 0), LC.ge({"len": 1}, 5)], nonneg=["len", "k"])
    assert r.sat and r.model["len"] == 6 and r.model["k"] == 2


def test_contradictory_bounds():
    assert check_sat([LC.ge({"len": 1}, 7), LC.le({"len": 1}, 5)]).unsat


def test_no_common_multiple_in_window():
    cons = [LC.eq({"len": 1, "k": -3}, 0), LC.eq({"len": 1, "m": -2}, 0),
            LC.ge({"len": 1}, 1), LC.le({"len": 1}, 5)]
    assert check_sat(cons, nonneg=["k", "m"]).unsat


def test_parity_conflict_terminates():
    # no bounds at all: needs exact reasoning, not branching
    cons = [LC.eq({"l": 1, "k": -2}, 0), LC.eq({"l": 1, "n": -2}, 1)]
    assert check_sat(cons, nonneg=["l", "k"]).unsat


def test_minimize_trivial_cases():
    assert minimize("len", [LC.ge({"len": 1}, 0)]).model["len"] == 0
    assert minimize("len", [LC.ge({"len": 1}, 7), LC.le({"len": 1}, 5)]).unsat


def test_blocking():
    cons = [LC.eq({"len": 1, "k": -3}, 0)]
    r = minimize("len", cons, blocks=[{"len": 0}, {"len": 3}], nonneg=["len", "k"])
    assert r.model["len"] == 6
    # many blocks on one variable stay cheap
    r = minimize("len", [LC.ge({"len": 1}, 0)], blocks=[{"len": i} for i in range(300)], nonneg=["len"])
    assert r.model["len"] == 300


def test_constant_folding():
    assert LC.eq({}, 0).trivial is True
    assert LC.le({}, -1).trivial is False
    assert LC.eq({"x": 2}, 3).trivial is False
    assert LC.le({"x": 2}, 3) == LC.le({"x": 1}, 1)
    assert LC.lt({"x": 1}, 3) == LC.le({"x": 1}, 2)


def test_node_budget_gives_unknown():
    # a tiny budget may give up, but never with a wrong answer
    cons = [LC.le({"x": 3, "y": 5, "z": 7}, 1000), LC.ge({"x": 3, "y": 5, "z": 7}, 1000),
            LC.ge({"x": 1}, 0), LC.ge({"y": 1}, 0), LC.ge({"z": 1}, 0)]
    r = check_sat(cons, blocks=[{"x": i} for i in range(0, 300)], max_nodes=3)
    assert r.status in ("unknown", "sat")
    if r.sat:
        assert all(c.holds(r.model) for c in cons)


def test_boxed_systems_match_brute_force():
    rng = random.Random(17)
    for _ in range(150):
        cons, blocks, vs, ranges = random_lia_system(rng)
        pts = lia_brute_force(cons, blocks, vs, ranges)
        r = check_sat(cons, blocks)
        assert r.status == ("sat" if pts else "unsat"), (cons, blocks)
        if r.sat:
            assert all(c.holds(r.model) for c in cons)
            assert not any(block_violated(b, r.model) for b in blocks)


def test_minimize_is_optimal():
    rng = random.Random(23)
    for _ in range(100):
        cons, blocks, vs, ranges = random_lia_system(rng, max_vars=3)
        obj = {v: rng.randint(-3, 3) for v in vs}
        pts = lia_brute_force(cons, blocks, vs, ranges)
        r = minimize(obj, cons, blocks)
        if not pts:
            assert r.unsat
            continue
        best = min(sum(c * m[v] for v, c in obj.items()) for m in pts)
        val = sum(c * r.model[v] for v, c in obj.items())
        assert val == best
        # nothing strictly better exists
        assert check_sat(cons + [LC.le(obj, best - 1)], blocks).unsat or not any(obj.values())


@given(st.integers(0, 30), st.integers(1, 6), st.lists(st.integers(0, 40), max_size=6))
def test_blocked_assignment_never_returned(lo, p, blocked):
    cons = [LC.eq({"len": 1, "k": -p}, lo), LC.le({"len": 1}, lo + 10 * p)]
    blocks = [{"len": b} for b in blocked]
    r = minimize("len", cons, blocks, nonneg=["len", "k"])
    free = [lo + p * i for i in range(11) if lo + p * i not in blocked]
    if free:
        assert r.sat and r.model["len"] == free[0]
    else:
        assert r.unsat
