"""Formula layer: grammar, normal forms, and the lasso-word evaluator."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partmon.ltl import (
    Alphabet,
    Always,
    And,
    Atom,
    Eventually,
    FALSE,
    FormulaSyntaxError,
    Implies,
    LassoWord,
    Next,
    Not,
    Or,
    Release,
    TRUE,
    UnknownAtomError,
    Until,
    atoms_in_order,
    format_formula,
    is_nnf,
    lasso_eval,
    negate_nnf,
    nnf,
    parse_formula,
)

from helpers import ALPHA3, NAMES3, all_lassos, random_formula, unfold_eval


# --- alphabets and words ----------------------------------------------------

def test_alphabet_preserves_declaration_order():
    alpha = Alphabet(["b", "a", "c"])
    assert list(alpha) == ["b", "a", "c"]
    assert alpha.index("a") == 1


def test_alphabet_rejects_bad_input():
    with pytest.raises(ValueError):
        Alphabet([])
    with pytest.raises(ValueError):
        Alphabet(["ev1", "ev1"])
    with pytest.raises(ValueError):
        Alphabet(["1bad"])
    with pytest.raises(ValueError):
        Alphabet(["true"])  # reserved word


def test_lasso_requires_nonempty_loop():
    with pytest.raises(ValueError):
        LassoWord(("ev1",), ())
    word = LassoWord([], ["ev1"])
    assert word.stem == () and word.loop == ("ev1",)


# --- parsing ----------------------------------------------------------------

def test_parse_eventually():
    assert parse_formula("<> ev1", ALPHA3) == Eventually(Atom("ev1"))
    assert parse_formula("F ev1", ALPHA3) == Eventually(Atom("ev1"))


def test_parse_nested_disjunction():
    alpha = Alphabet(["ev1", "ev2", "ev3", "ev4"])
    phi = parse_formula("(ev1 & <>ev2) | (ev3 & []<>ev4)", alpha)
    assert phi == Or(
        And(Atom("ev1"), Eventually(Atom("ev2"))),
        And(Atom("ev3"), Always(Eventually(Atom("ev4")))),
    )


def test_parse_incomplete_until_is_a_syntax_error():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("ev1 U", ALPHA3)


def test_parse_precedence():
    a, b, c = Atom("ev1"), Atom("ev2"), Atom("ev3")
    # U binds tighter than &, which binds tighter than |, then ->
    assert parse_formula("ev1 U ev2 & ev3", ALPHA3) == And(Until(a, b), c)
    assert parse_formula("ev1 | ev2 & ev3", ALPHA3) == Or(a, And(b, c))
    assert parse_formula("ev1 -> ev2 -> ev3", ALPHA3) == Implies(a, Implies(b, c))
    # unary operators bind tighter than U
    assert parse_formula("!ev1 U ev2", ALPHA3) == Until(Not(a), b)
    assert parse_formula("F ev1 U ev2", ALPHA3) == Until(Eventually(a), b)
    # U and R are right-associative
    assert parse_formula("ev1 U ev2 U ev3", ALPHA3) == Until(a, Until(b, c))
    assert parse_formula("ev1 R ev2 R ev3", ALPHA3) == Release(a, Release(b, c))
    assert parse_formula("X X ev1", ALPHA3) == Next(Next(a))


def test_parse_comments_and_whitespace():
    text = "ev1  # leading event\n  U ev2   # until the second one"
    assert parse_formula(text, ALPHA3) == Until(Atom("ev1"), Atom("ev2"))


def test_parse_unknown_atom():
    with pytest.raises(UnknownAtomError):
        parse_formula("<> radX", ALPHA3)
    # without an alphabet any identifier is allowed
    assert parse_formula("<> radX") == Eventually(Atom("radX"))


def test_parse_bad_tokens():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("ev1 + ev2", ALPHA3)
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(ev1", ALPHA3)
    with pytest.raises(FormulaSyntaxError):
        parse_formula("", ALPHA3)


def test_atoms_in_order_is_first_occurrence():
    phi = parse_formula("ev2 U (ev1 & ev2)", ALPHA3)
    assert atoms_in_order(phi) == ["ev2", "ev1"]


# --- printing round trip ----------------------------------------------------

_atoms = st.sampled_from([Atom(n) for n in NAMES3])
_leaves = st.one_of(_atoms, st.just(TRUE), st.just(FALSE))
_formulas = st.recursive(
    _leaves,
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(Next, sub),
        st.builds(Eventually, sub),
        st.builds(Always, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Until, sub, sub),
        st.builds(Release, sub, sub),
    ),
    max_leaves=16,
)


@settings(max_examples=300, deadline=None)
@given(_formulas)
def test_format_parse_round_trip(phi):
    assert parse_formula(format_formula(phi), ALPHA3) == phi


# --- negation normal form ---------------------------------------------------

def test_negate_nnf_dualities():
    ev1, ev2, ev4 = Atom("ev1"), Atom("ev2"), Atom("ev4")
    assert negate_nnf(Eventually(ev1)) == Always(Not(ev1))
    assert negate_nnf(Always(ev4)) == Eventually(Not(ev4))
    assert negate_nnf(Until(ev1, ev2)) == Release(Not(ev1), Not(ev2))
    assert negate_nnf(Release(ev1, ev2)) == Until(Not(ev1), Not(ev2))
    assert negate_nnf(Next(ev1)) == Next(Not(ev1))
    assert negate_nnf(Implies(ev1, ev2)) == And(ev1, Not(ev2))
    assert nnf(Implies(ev1, ev2)) == Or(Not(ev1), ev2)


@settings(max_examples=200, deadline=None)
@given(_formulas)
def test_nnf_shape(phi):
    assert is_nnf(nnf(phi))
    assert is_nnf(negate_nnf(phi))


_SMALL_LASSOS = all_lassos(NAMES3, 2, 2)


@settings(max_examples=120, deadline=None)
@given(_formulas, st.sampled_from(_SMALL_LASSOS))
def test_nnf_preserves_semantics(phi, word):
    value = lasso_eval(phi, word)
    assert lasso_eval(nnf(phi), word) == value
    assert lasso_eval(negate_nnf(phi), word) == (not value)


# --- lasso evaluation -------------------------------------------------------

def test_lasso_eval_eventually():
    phi = Eventually(Atom("ev1"))
    assert lasso_eval(phi, LassoWord((), ("ev2",))) is False
    assert lasso_eval(phi, LassoWord(("ev2", "ev1"), ("ev3",))) is True


def test_lasso_eval_conjunction_with_recurrence():
    # ev3 now, and ev4 recurring forever: the loop supplies ev4 infinitely often.
    phi = And(Atom("ev3"), Always(Eventually(Atom("ev4"))))
    word = LassoWord(("ev3",), ("ev2", "ev4"))
    assert lasso_eval(phi, word) is True
    assert unfold_eval(phi, word) is True


def test_lasso_eval_finitely_often_fails_recurrence():
    phi = Always(Eventually(Atom("ev1")))
    assert lasso_eval(phi, LassoWord(("ev1",), ("ev2",))) is False


def test_lasso_eval_next_shifts_the_stem():
    rng = random.Random(7)
    for _ in range(200):
        phi = random_formula(rng, 3)
        stem = tuple(rng.choice(NAMES3) for _ in range(rng.randint(1, 3)))
        loop = tuple(rng.choice(NAMES3) for _ in range(rng.randint(1, 2)))
        assert lasso_eval(Next(phi), LassoWord(stem, loop)) == lasso_eval(
            phi, LassoWord(stem[1:], loop)
        )


def test_lasso_eval_derived_operator_identities():
    rng = random.Random(11)
    lassos = all_lassos(NAMES3, 1, 2)
    for _ in range(60):
        phi = random_formula(rng, 3)
        psi = random_formula(rng, 2)
        for word in lassos:
            assert lasso_eval(Eventually(phi), word) == lasso_eval(Until(TRUE, phi), word)
            assert lasso_eval(Always(phi), word) == lasso_eval(Release(FALSE, phi), word)
            assert lasso_eval(Implies(psi, phi), word) == lasso_eval(
                Or(Not(psi), phi), word
            )


def test_lasso_eval_agrees_with_unfolding():
    """Two independent evaluators must agree everywhere."""
    rng = random.Random(23)
    lassos = all_lassos(NAMES3, 2, 2)
    for _ in range(60):
        phi = random_formula(rng, 4)
        for word in lassos:
            assert lasso_eval(phi, word) == unfold_eval(phi, word), (phi, word)
