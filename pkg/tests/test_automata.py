import pytest
from hypothesis import given

from conftest import AB, ABC, language, regexes, seeded_regexes
from regexlen import automata as A
from regexlen.alphabet import Alphabet
from regexlen.budget import StateBudgetExceeded
from regexlen.reference import derivative_matches, matches, words_upto
from regexlen.regex import Comp, Concat, Lit, Star, Union, char_class, concat, plus


def compile_(re, alphabet=ABC):
    return A.compile_regex(re, alphabet)


def accepted(a, alphabet, max_len):
    return {w for w in words_upto(alphabet.chars, max_len) if A.accepts(a, w, alphabet)}


ABC_STAR = Star(Lit("abc"))
A_OR_B_PLUS = Union(plus(Lit("a")), plus(Lit("b")))


def test_literal_chain():
    a = compile_(Lit("abc"))
    assert a.num_states == 4
    assert accepted(a, ABC, 4) == {"abc"}


def test_star_literal():
    a = compile_(ABC_STAR)
    for w in ("", "abc", "abcabc"):
        assert A.accepts(a, w, ABC)
    for w in ("ab", "abca"):
        assert not A.accepts(a, w, ABC)


def test_complement_of_union():
    a = compile_(Comp(Union(Lit("a"), Lit("b"))), AB)
    assert accepted(a, AB, 2) == {"", "aa", "ab", "ba", "bb"}


def test_intersect_examples():
    univ = A.universal_automaton(ABC.size)
    base = compile_(Union(Lit("ab"), Star(Lit("c"))))
    assert accepted(A.intersect(base, univ), ABC, 4) == accepted(base, ABC, 4)
    empty = A.intersect(compile_(ABC_STAR), compile_(A_OR_B_PLUS))
    assert A.is_empty(empty)
    aa = A.intersect(compile_(Star(Lit("a"))), compile_(Lit("aa")))
    assert accepted(aa, ABC, 3) == {"aa"}


def test_is_empty():
    unreachable = A.Automaton(2, 2, 0, frozenset([1]), ((), ()), ((), ()))
    assert A.is_empty(unreachable)
    assert not A.is_empty(compile_(Lit("")))


def test_shortest_accepting_length():
    assert A.shortest_accepting_length(compile_(ABC_STAR)) == 0
    assert A.shortest_accepting_length(compile_(Concat(Lit("ab"), Star(Lit("c"))))) == 2
    assert A.shortest_accepting_length(A.empty_automaton(3)) is None


def test_fixed_length_paths():
    a = compile_(ABC_STAR)
    assert A.has_accepting_path_of_length(a, 6)
    assert not A.has_accepting_path_of_length(a, 4)
    assert A.has_accepting_path_of_length(compile_(A_OR_B_PLUS), 2)
    assert A.has_accepting_path_of_length(a, 0)
    assert not A.has_accepting_path_of_length(compile_(Lit("a")), 0)


def test_extract_word():
    assert A.extract_word_of_length(compile_(ABC_STAR), 3, ABC) == "abc"
    assert A.extract_word_of_length(compile_(ABC_STAR), 4, ABC) is None
    assert A.extract_word_of_length(compile_(Comp(Lit("a")), AB), 1, AB) == "b"


def test_joint_path():
    a_star, aa_star = compile_(Star(Lit("a"))), compile_(Star(Lit("aa")))
    assert A.joint_path_of_length([a_star, aa_star], 2, ABC) == "aa"
    assert A.joint_path_of_length([a_star, compile_(Star(Lit("b")))], 1, ABC) is None
    other = compile_(Union(Lit("cb"), Concat(Lit("b"), Star(Lit("a")))))
    for n in range(5):
        assert A.joint_path_of_length([other], n, ABC) == A.extract_word_of_length(other, n, ABC)


def test_joint_path_is_least_word():
    res = [Star(char_class("abc")), Comp(Concat(Star(char_class("abc")), Lit("a"))), Star(Union(Lit("b"), Lit("ca")))]
    autos = [compile_(r) for r in res]
    for n in range(6):
        want = sorted(w for w in words_upto("abc", n) if len(w) == n and all(matches(w, r) for r in res))
        assert A.joint_path_of_length(autos, n, ABC) == (want[0] if want else None)


def test_estimate_cost():
    assert A.estimate_cost(Lit("abc")) == 3
    assert A.estimate_cost(ABC_STAR) == 6
    assert A.estimate_cost(Comp(Concat(Lit("ab"), Lit("cde")))) == 6
    assert A.estimate_cost(Lit("")) == 1
    assert A.estimate_cost(Union(Lit("a"), Lit("bb"))) == 3


def test_estimate_cost_saturates():
    r = Lit("ab" * 40)
    for _ in range(6):
        r = Comp(Concat(r, r))
    assert A.estimate_cost(r) == A.COST_MAX


def test_state_budget():
    sigma = char_class("ab")
    blowup = Comp(concat(Star(sigma), Lit("a"), *([sigma] * 12)))
    with pytest.raises(StateBudgetExceeded):
        A.compile_regex(blowup, AB, max_states=500)


def test_dot_export():
    text = A.to_dot(compile_(Lit("ab")), ABC, name="X")
    assert text.startswith('digraph "X"')
    assert 'q0 -> q1 [label="a"]' in text and "doublecircle" in text


def test_construction_counter():
    before = A.construction_count()
    compile_(Lit("a"))
    assert A.construction_count() > before


# -- properties ------------------------------------------------------------------


def test_membership_matches_reference_1000():
    res = seeded_regexes(7, 1000, "abc", 8, complement_prob=0.2)
    words = list(words_upto("abc", 6))
    for re in res:
        a = compile_(re)
        for w in words:
            assert A.accepts(a, w, ABC) == matches(w, re), (re, w)


@given(regexes("ab", 4))
def test_reference_evaluators_agree(re):
    for w in words_upto("ab", 5):
        assert matches(w, re) == derivative_matches(w, re)


@given(regexes("ab", 4), regexes("ab", 4))
def test_intersection_agreement(r1, r2):
    a, b = compile_(r1, AB), compile_(r2, AB)
    both = A.intersect(a, b)
    for w in words_upto("ab", 5):
        assert A.accepts(both, w, AB) == (A.accepts(a, w, AB) and A.accepts(b, w, AB))


@given(regexes("ab", 4, complement=False))
def test_complement_involution(re):
    a, b = compile_(re, AB), compile_(Comp(Comp(re)), AB)
    for w in words_upto("ab", 5):
        assert A.accepts(a, w, AB) == A.accepts(b, w, AB)


@given(regexes("ab", 5))
def test_shortest_length_matches_fixed_length_scan(re):
    a = compile_(re, AB)
    lens = [n for n in range(2 * a.num_states + 1) if A.has_accepting_path_of_length(a, n)]
    assert A.shortest_accepting_length(a) == (lens[0] if lens else None)


@given(regexes("ab", 5))
def test_fixed_length_matches_brute_force(re):
    a = compile_(re, AB)
    lang = language(re, "ab", 6)
    for n in range(7):
        word = A.extract_word_of_length(a, n, AB)
        of_len = sorted(w for w in lang if len(w) == n)
        assert A.has_accepting_path_of_length(a, n) == bool(of_len)
        assert word == (of_len[0] if of_len else None)


@given(regexes("ab", 4), regexes("ab", 4))
def test_joint_path_sound_and_complete(r1, r2):
    autos = [compile_(r1, AB), compile_(r2, AB)]
    both = language(r1, "ab", 5) & language(r2, "ab", 5)
    for n in range(6):
        w = A.joint_path_of_length(autos, n, AB)
        if w is None:
            assert not any(len(x) == n for x in both)
        else:
            assert len(w) == n and matches(w, r1) and matches(w, r2)


def test_automaton_invariants_checked():
    with pytest.raises(ValueError):
        A.Automaton(2, 1, 0, frozenset(), (((0, 1, 3),),), ((),))
    with pytest.raises(ValueError):
        A.Automaton(2, 1, 0, frozenset(), (((0, 1, 0), (1, 1, 0)),), ((),), True)


def test_printable_alphabet_intervals_stay_compact():
    alpha = Alphabet.ascii_printable()
    a = A.compile_regex(Star(char_class(alpha.chars)), alpha)
    assert sum(len(e) for e in a.transitions) <= 2 * a.num_states
