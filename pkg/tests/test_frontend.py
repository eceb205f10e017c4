import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import AB, regexes
from regexlen.budget import CubeBudgetExceeded
from regexlen.formula import (And, Const, InRe, IntEq, IntLt, IntVar, Len, Mul, Add, Not, Or,
                              conj, cubes, evaluate, nnf, to_smtlib)
from regexlen.harness.generate import GenSpec, generate
from regexlen.parser import (ParseError, UnsupportedTerm, format_model, parse_formula, parse_regex,
                             parse_script, script_to_smtlib)
from regexlen.reference import matches, words_upto
from regexlen.regex import Comp, Concat, Lit, Star, Union, plus

DECLS = {"X": "String", "n": "Int"}


def test_membership_star_literal():
    s = parse_script('(declare-const X String)\n(assert (str.in_re X (re.* (str.to_re "abc"))))')
    assert s.formula == InRe("X", Star(Lit("abc")))
    assert s.declarations == {"X": "String"}


def test_length_less_than():
    f = parse_formula("(< (str.len X) 5)", DECLS)
    assert f == IntLt(Len("X"), Const(5))


def test_negated_membership_kept_until_nnf():
    f = parse_formula('(not (str.in_re X (str.to_re "a")))', DECLS)
    assert f == Not(InRe("X", Lit("a")))
    assert nnf(f) == InRe("X", Comp(Lit("a")))


def test_commands_record_assert_counts():
    s = parse_script("(declare-const n Int)(check-sat)(assert (= n 1))(check-sat)(get-model)")
    assert s.commands == [("check-sat", 0), ("check-sat", 1), ("get-model", 1)]


def test_regex_sugar():
    a = AB
    assert parse_regex('(re.+ (str.to_re "a"))', a) == plus(Lit("a"))
    assert parse_regex('(re.range "a" "b")', a) == Union(Lit("a"), Lit("b"))
    loop = parse_regex('((_ re.loop 1 2) (str.to_re "a"))', a)
    assert {w for w in words_upto("ab", 4) if matches(w, loop)} == {"a", "aa"}
    power = parse_regex('((_ re.^ 3) (str.to_re "ab"))', a)
    assert {w for w in words_upto("ab", 6) if matches(w, power)} == {"ababab"}


def test_less_equal_desugars():
    f = parse_formula("(<= n 3)", DECLS)
    for v in range(-2, 6):
        assert evaluate(f, {}, {"n": v}, matches) == (v <= 3)


def test_constant_subject_folds():
    s = parse_script('(assert (str.in_re "abab" (re.* (str.to_re "ab"))))')
    assert evaluate(s.formula, {}, {}, matches)
    s = parse_script('(assert (str.in_re "aba" (re.* (str.to_re "ab"))))')
    assert not evaluate(s.formula, {}, {}, matches)


def test_syntax_error_position():
    with pytest.raises(ParseError) as e:
        parse_script("(declare-const X String)\n(assert (str.in_re X (re.* \"a\"))")
    assert e.value.line == 2


def test_undeclared_variable():
    with pytest.raises(ParseError):
        parse_script('(assert (str.in_re Y (str.to_re "a")))')


def test_nonlinear_rejected():
    with pytest.raises(ParseError):
        parse_script("(declare-const n Int)(declare-const m Int)(assert (= (* n m) 1))")


@pytest.mark.parametrize("term", ['(str.++ X "a")', '(str.substr X 0 1)', "(str.to_int X)"])
def test_out_of_scope_terms(term):
    text = f"(declare-const X String)(assert (= {term} X))(check-sat)"
    with pytest.raises(UnsupportedTerm):
        parse_script(text)
    s = parse_script(text, lenient=True)
    assert "unsupported term" in s.unsupported
    assert s.unsupported_from == 0


def test_character_outside_alphabet():
    with pytest.raises(ParseError):
        parse_script('(declare-const X String)(assert (str.in_re X (str.to_re "z")))', AB)


def test_model_format_escapes():
    text = format_model({"X": 'a"\x01', "n": -3}, {"X": "String", "n": "Int"})
    assert text == '(model\n  (define-fun X () String "a""\\u{1}")\n  (define-fun n () Int (- 3))\n)'


# -- round trip ----------------------------------------------------------------


def test_round_trip_generated_scripts():
    for text in generate(GenSpec(seed=11), 60):
        s = parse_script(text)
        again = parse_script(script_to_smtlib(s))
        assert again.formula == s.formula
        assert again.declarations == s.declarations
        assert again.commands == s.commands


# -- formulas over one string and one int variable ------------------------------

int_terms = st.recursive(
    st.one_of(st.integers(-3, 3).map(Const), st.just(IntVar("n")), st.just(Len("X"))),
    lambda ch: st.one_of(st.builds(Add, ch, ch), st.builds(Mul, st.integers(-2, 2), ch)),
    max_leaves=3,
)
atoms = st.one_of(
    st.builds(InRe, st.just("X"), regexes("ab", 3)),
    st.builds(IntEq, int_terms, int_terms),
    st.builds(IntLt, int_terms, int_terms),
)
formulas = st.recursive(
    atoms,
    lambda ch: st.one_of(
        st.lists(ch, min_size=2, max_size=3).map(lambda xs: And(tuple(xs))),
        st.lists(ch, min_size=2, max_size=3).map(lambda xs: Or(tuple(xs))),
        st.builds(Not, ch),
    ),
    max_leaves=5,
)

WORDS = list(words_upto("ab", 4))


def _assignments():
    for w in WORDS:
        for v in range(-8, 9):
            yield {"X": w}, {"n": v}


@given(formulas)
def test_print_parse_round_trip(f):
    g = parse_formula(to_smtlib(f), DECLS, AB)
    assert parse_formula(to_smtlib(g), DECLS, AB) == g


@given(formulas)
def test_nnf_preserves_models(f):
    g = nnf(f)
    for strings, ints in _assignments():
        assert evaluate(f, strings, ints, matches) == evaluate(g, strings, ints, matches)


def _no_not(f):
    if isinstance(f, Not):
        return False
    if isinstance(f, (And, Or)):
        return all(_no_not(a) for a in f.args)
    return True


@given(formulas)
def test_nnf_is_negation_free(f):
    assert _no_not(nnf(f))


@given(formulas)
def test_cubes_equivalent(f):
    g = nnf(f)
    cs = [c.formula() for c in cubes(g)]
    for strings, ints in _assignments():
        want = evaluate(g, strings, ints, matches)
        got = any(evaluate(c, strings, ints, matches) for c in cs)
        assert want == got


def test_nnf_examples():
    a, b = InRe("X", Lit("a")), IntLt(IntVar("n"), Const(2))
    assert nnf(Not(And((a, b)))) == Or((InRe("X", Comp(Lit("a"))), Or((IntLt(Const(2), IntVar("n")), IntEq(Const(2), IntVar("n"))))))
    assert nnf(Not(b)) == Or((IntLt(Const(2), IntVar("n")), IntEq(Const(2), IntVar("n"))))


def test_cubes_distribute():
    a, b, c = (InRe("X", Lit(w)) for w in ("a", "b", "ab"))
    got = [cube.regex_constraints for cube in cubes(And((a, Or((b, c)))))]
    assert got == [(("X", Lit("a")), ("X", Lit("b"))), (("X", Lit("a")), ("X", Lit("ab")))]
    assert len(list(cubes(a))) == 1


def _thirteen_disjunctions():
    return conj(*(Or((IntEq(IntVar("n"), Const(2 * i)), IntEq(IntVar("n"), Const(2 * i + 1)))) for i in range(13)))


def test_cube_cap():
    f = _thirteen_disjunctions()
    # exhaustive expansion confirms 2^13 cubes
    assert sum(1 for _ in cubes(f, cap=10_000)) == 8192
    seen = 0
    with pytest.raises(CubeBudgetExceeded):
        for _ in cubes(f, cap=4096):
            seen += 1
    assert seen == 4096


def test_cubes_are_lazy():
    it = cubes(_thirteen_disjunctions(), cap=1)
    next(it)
    with pytest.raises(CubeBudgetExceeded):
        next(it)


def test_double_complement_kept():
    r = parse_regex('(re.comp (re.comp (str.to_re "a")))', AB)
    assert r == Comp(Comp(Lit("a")))
    assert parse_regex('(re.++ (str.to_re "a") (str.to_re "b"))', AB) == Concat(Lit("a"), Lit("b"))
