from hypothesis import given
from hypothesis import strategies as st

from conftest import AB, ABC, language, regexes, seeded_regexes
from regexlen import automata as A
from regexlen.prefix_suffix import EdgeProfile, JointVerdict, Nullable, edge_profile, joint_check
from regexlen.reference import words_upto
from regexlen.regex import Comp, Concat, Lit, Star, Union, plus

ABC_STAR = Star(Lit("abc"))
A_OR_B_PLUS = Union(Concat(Lit("a"), Star(Lit("a"))), Concat(Lit("b"), Star(Lit("b"))))


def test_star_profile():
    p = edge_profile(ABC_STAR, ABC)
    assert p == EdgeProfile(frozenset("a"), frozenset("c"), Nullable.YES)


def test_plus_union_profile():
    p = edge_profile(A_OR_B_PLUS, ABC)
    assert p == EdgeProfile(frozenset("ab"), frozenset("ab"), Nullable.NO)
    assert edge_profile(Union(plus(Lit("a")), plus(Lit("b"))), ABC) == p


def test_complement_profile():
    p = edge_profile(Comp(Lit("c")), ABC)
    assert p == EdgeProfile(frozenset("abc"), frozenset("abc"), Nullable.UNKNOWN)


def test_joint_examples():
    star, plus_ = edge_profile(ABC_STAR, ABC), edge_profile(A_OR_B_PLUS, ABC)
    assert joint_check([star, plus_]) is JointVerdict.EMPTY_INTERSECTION
    ab_star = edge_profile(Star(Lit("ab")), ABC)
    assert joint_check([star, ab_star]) is JointVerdict.ONLY_EMPTY_STRING
    assert joint_check([star]) is JointVerdict.CONSISTENT
    # brute force: the joint language of (abc)* and (ab)* is just the empty word
    assert language(ABC_STAR, "abc", 12) & language(Star(Lit("ab")), "abc", 12) == {""}


def test_unknown_nullability_stays_consistent():
    ps = [edge_profile(Star(Lit("ab")), ABC), edge_profile(Concat(Lit("c"), Comp(Lit("a"))), ABC),
          edge_profile(Comp(Lit("b")), ABC)]
    assert joint_check(ps[::2]) is JointVerdict.CONSISTENT


def test_no_automata_constructed():
    before = A.construction_count()
    for re in seeded_regexes(3, 200, "abc", 8, complement_prob=0.3):
        joint_check([edge_profile(re, ABC), edge_profile(ABC_STAR, ABC)])
    assert A.construction_count() == before


WORDS = [w for w in words_upto("abc", 6) if w]


def test_over_approximation_1000():
    for re in seeded_regexes(5, 1000, "abc", 8, complement_prob=0.2):
        p = edge_profile(re, ABC)
        a = A.compile_regex(re, ABC)
        if p.nullable is Nullable.YES:
            assert A.accepts(a, "", ABC)
        if p.nullable is Nullable.NO:
            assert not A.accepts(a, "", ABC)
        for w in WORDS:
            if A.accepts(a, w, ABC):
                assert w[0] in p.first and w[-1] in p.last, (re, w)


@given(st.lists(regexes("ab", 4), min_size=2, max_size=3))
def test_joint_check_sound(res):
    verdict = joint_check([edge_profile(r, AB) for r in res])
    joint = set.intersection(*(language(r, "ab", 6) for r in res))
    if verdict is JointVerdict.EMPTY_INTERSECTION:
        assert not joint
        autos = [A.compile_regex(r, AB) for r in res]
        acc = autos[0]
        for b in autos[1:]:
            acc = A.intersect(acc, b)
        assert A.is_empty(acc)
    elif verdict is JointVerdict.ONLY_EMPTY_STRING:
        assert joint == {""}
