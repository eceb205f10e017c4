import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import AB, ABC, regexes, seeded_regexes
from regexlen import automata as A
from regexlen.budget import ProgressionCapExceeded
from regexlen.lengths import (Bounds, EmptyLanguage, Exact, SemilinearSet, abstract_lengths,
                              refine_bounds, semilinear_intersect, semilinear_star, semilinear_sum,
                              to_linear_constraints)
from regexlen.lia import LinearConstraint as LC
from regexlen.regex import EMPTY, Comp, Concat, Lit, Star, Union

S = SemilinearSet.of


def members(s, upto=50):
    return {n for n in range(upto + 1) if n in s}


def test_star_literal_is_multiples_of_three():
    la = abstract_lengths(Star(Lit("abc")))
    assert isinstance(la, Exact)
    assert la.set.progressions == ((0, 3),)


def test_empty_literal():
    assert abstract_lengths(Lit("")).set.progressions == ((0, 0),)


def test_union_of_singleton_and_star():
    la = abstract_lengths(Union(Lit("aa"), Star(Lit("aaa"))))
    assert sorted(la.set.progressions) == [(0, 3), (2, 0)]
    re = Union(Lit("aa"), Star(Lit("aaa")))
    a = A.compile_regex(re, AB)
    for n in range(61):
        assert (n in la.set) == A.has_accepting_path_of_length(a, n)


def test_complement_gives_bounds():
    la = abstract_lengths(Comp(Lit("a")))
    assert la == Bounds(0, None)


def test_empty_factor():
    assert abstract_lengths(Concat(Lit("a"), EMPTY)) is EmptyLanguage


def test_sum_examples():
    assert semilinear_sum(S([(0, 3)]), S([(0, 0)])).progressions == ((0, 3),)
    assert semilinear_sum(S([(1, 0)]), S([(2, 0)])).progressions == ((3, 0),)
    both = semilinear_sum(S([(0, 2)]), S([(0, 3)]))
    assert members(both) == {n for n in range(51) if n != 1}


def test_star_examples():
    assert semilinear_star(S([(3, 0)])).progressions == ((0, 3),)
    assert semilinear_star(S([(0, 0)])).progressions == ((0, 0),)
    assert members(semilinear_star(S([(2, 0), (3, 0)]))) == {n for n in range(51) if n != 1}


def _brute_sum(a, b):
    return {x + y for x in a for y in b if x + y <= 50}


def _brute_star(a):
    reach = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for y in a:
            if y and x + y <= 50 and x + y not in reach:
                reach.add(x + y)
                frontier.append(x + y)
    return reach


progs = st.lists(st.tuples(st.integers(0, 9), st.integers(0, 6)), min_size=1, max_size=3)


@given(progs, progs)
def test_sum_matches_brute_force(p, q):
    a, b = S(p), S(q)
    assert members(semilinear_sum(a, b)) == _brute_sum(members(a), members(b))


@given(progs)
def test_star_matches_brute_force(p):
    a = S(p)
    assert members(semilinear_star(a)) == _brute_star(members(a))


@given(progs, progs)
def test_intersect_matches_brute_force(p, q):
    a, b = S(p), S(q)
    assert members(semilinear_intersect(a, b)) == members(a) & members(b)


@given(progs)
def test_normalized(p):
    s = S(p)
    ps = s.progressions
    for x, y in itertools.permutations(ps, 2):
        # no progression subsumed by another with the same period
        assert not (x[1] == y[1] and x[0] >= y[0] and (y[1] == 0 and x[0] == y[0] or y[1] and (x[0] - y[0]) % y[1] == 0))


@given(progs, st.integers(0, 40))
def test_next_and_prev_member(p, n):
    s = S(p)
    mem = members(s, 120)
    above = [m for m in mem if m >= n]
    below = [m for m in mem if m <= n]
    assert s.next_member(n) == (min(above) if above else None)
    assert s.prev_member(n) == (max(below) if below else None)


def test_progression_cap():
    with pytest.raises(ProgressionCapExceeded):
        SemilinearSet.of([(n, 0) for n in range(0, 40, 2)], cap=4)


def test_cap_degrades_to_bounds():
    re = Lit("")
    for k in range(1, 12):
        re = Union(re, Lit("a" * (3 * k)))
    la = abstract_lengths(re, cap=4)
    assert isinstance(la, Bounds)
    assert la.lower == 0 and la.upper == 33


def test_refine_examples():
    a7 = A.compile_regex(Concat(Lit("abcabca"), Star(Lit("ab"))), ABC)
    assert refine_bounds(Bounds(0, None), a7, (5, None))[0] == 7
    ab = A.compile_regex(Lit("ab"), ABC)
    assert refine_bounds(Bounds(0, None), ab, (0, None)) == (2, 2)
    star = A.compile_regex(Star(Lit("abc")), ABC)
    assert refine_bounds(Bounds(0, None), star, (4, None)) == (6, None)
    la = abstract_lengths(Star(Lit("abc")))
    assert refine_bounds(la, None, (4, None)) == (6, None)


def test_to_linear_constraints():
    names = iter(("k0", "k1", "k2"))

    def fresh():
        return next(names)

    branches = to_linear_constraints(Exact(S([(0, 3)])), "len", fresh)
    assert len(branches) == 1
    assert LC.eq({"len": 1, "k0": -3}, 0) in branches[0] and LC.ge({"k0": 1}, 0) in branches[0]
    assert to_linear_constraints(Bounds(7, None), "len", fresh) == [[LC.ge({"len": 1}, 0), LC.ge({"len": 1}, 7)]]
    two = to_linear_constraints(Exact(S([(2, 0), (0, 3)])), "len", fresh)
    assert len(two) == 2
    assert any(LC.eq({"len": 1}, 2) in b for b in two)
    assert any(LC.eq({"len": 1, "k1": -3}, 0) in b for b in two)


# -- properties against the automata engine ---------------------------------------


def test_exact_abstraction_500_regexes():
    for re in seeded_regexes(101, 500, "abc", 8):
        la = abstract_lengths(re)
        a = A.compile_regex(re, ABC)
        for n in range(31):
            has = A.has_accepting_path_of_length(a, n)
            if la is EmptyLanguage:
                assert not has
            else:
                assert isinstance(la, Exact)
                assert (n in la.set) == has, (re, n)


@given(regexes("ab", 5))
def test_bounds_sound(re):
    la = abstract_lengths(re)
    a = A.compile_regex(re, AB)
    for n in range(21):
        if A.has_accepting_path_of_length(a, n):
            assert la is not EmptyLanguage
            assert la.lower <= n
            assert la.upper is None or n <= la.upper


@given(regexes("ab", 5), st.integers(0, 8), st.one_of(st.none(), st.integers(0, 12)))
def test_refine_monotone_and_sound(re, lo, up):
    if up is not None and up < lo:
        lo, up = up, lo
    la = abstract_lengths(re)
    a = A.compile_regex(re, AB)
    got = refine_bounds(Bounds(0, None) if la is EmptyLanguage else la, a, (lo, up))
    if got is None:
        # no accepting length in the window
        assert not any(A.has_accepting_path_of_length(a, n) for n in range(lo, (up if up is not None else lo + 30) + 1))
        return
    new_lo, new_up = got
    assert new_lo >= lo
    if up is not None:
        assert new_up is not None and new_up <= up
    for n in range(lo, 40):
        if (up is None or n <= up) and A.has_accepting_path_of_length(a, n):
            assert new_lo <= n and (new_up is None or n <= new_up)
