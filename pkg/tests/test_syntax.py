import pytest
from hypothesis import given, strategies as hs

from hoare_extract.parser import parse_main_formula, parse_state_formula, parse_term
from hoare_extract.syntax import (
    FunApp, SAnd, SAtom, SBot, SImp, SOr, STop, Signature, SignatureError, Var, ZERO,
    alpha_eq, as_numeral, free_vars, fresh, numeral, show, show_state, subst, succ,
)


def test_numerals_round_trip():
    for k in range(6):
        assert as_numeral(numeral(k)) == k
    assert numeral(2) == succ(succ(ZERO))
    assert as_numeral(Var("x")) is None


def test_fresh_avoids_names():
    assert fresh("x", {"x", "x1"}) not in {"x", "x1"}
    assert fresh("y", {"x"}) == "y"


def test_substitution_avoids_capture(theory):
    th = theory("readwrite")
    f = parse_main_formula("ex y. P(x,y)", th)
    g = subst(f, "x", Var("y"))
    assert free_vars(g) == {"y"}
    assert alpha_eq(g, parse_main_formula("ex z. P(y,z)", th))
    assert not alpha_eq(g, parse_main_formula("ex y. P(y,y)", th))


def test_substitution_into_triples(theory):
    th = theory("readwrite")
    f = parse_main_formula("all x. {stored(y)} P(x,y) {solved(x)}", th)
    g = subst(f, "y", Var("x"))
    assert free_vars(g) == {"x"}
    assert alpha_eq(g, parse_main_formula("all z. {stored(x)} P(z,x) {solved(z)}", th))


def test_alpha_equivalence_of_bound_names(theory):
    th = theory("readwrite")
    a = parse_main_formula("all x. {α} ex y. P(x,y) {true}", th)
    b = parse_main_formula("all u. {α} ex v. P(u,v) {true}", th)
    assert alpha_eq(a, b)


def test_signature_rejects_duplicates_and_arity():
    sig = Signature()
    sig.add_statepred("stored", 1)
    with pytest.raises(SignatureError):
        sig.add_statepred("stored", 2)
    with pytest.raises(SignatureError):
        sig.check_state(SAtom("stored", ()))
    with pytest.raises(SignatureError):
        sig.check_state(SAtom("missing", ()))


def test_unicode_and_ascii_printing(theory):
    th = theory("sort3")
    f = parse_state_formula("le(1,2) /\\ ~le(2,3)", th)
    assert show_state(f) == "le(1,2) ∧ ¬le(2,3)"
    assert parse_state_formula(show_state(f, unicode=False), th) == f
    assert parse_state_formula(show_state(f), th) == f


def test_terms_parse(theory):
    th = theory("arith")
    assert parse_term("x+2", th) == succ(succ(Var("x")))
    assert parse_term("add(0, y)", th) == FunApp("add", (ZERO, Var("y")))


_atoms = hs.sampled_from([SAtom("p", ()), SAtom("q", ()), SAtom("r", ())])
_sf = hs.recursive(
    hs.one_of(_atoms, hs.just(STop()), hs.just(SBot())),
    lambda sub: hs.one_of(
        hs.builds(SAnd, sub, sub), hs.builds(SOr, sub, sub), hs.builds(SImp, sub, sub)),
    max_leaves=12)


@given(_sf, hs.booleans())
def test_state_formula_print_parse_round_trip(f, uni):
    assert parse_state_formula(show(f, uni), None) == f
