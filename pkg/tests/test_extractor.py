import pytest

from hoare_extract import stlang as st
from hoare_extract.checks import GOLDEN, corpus_entries, display_term, insertion_sort_shape
from hoare_extract.extractor import (
    ExtractError, check_extraction_typing, cleanup_admin, extract, extract_typed,
    free_var_ground, lambda_star, real_type,
)
from hoare_extract.parser import parse_derivation, parse_main_formula, parse_st
from hoare_extract.semantics import evaluate
from hoare_extract.models import Swap3
from hoare_extract.stlang import C, D, Arrow, Prod, Sum
from hoare_extract.syntax import EMPTY


@pytest.mark.parametrize("text,want", [
    ("true", C),
    ("P(c) /\\ Q(c)", Prod(C, C)),
    ("P(c) \\/ Q(c)", Sum(C, C)),
    ("ex x. P(x)", Prod(D, C)),
    ("all x. {ok} P(x) {ok}", Arrow(D, C)),
    ("P(c) => {ok} ex x. Q(x) {ok}", Arrow(C, Prod(D, C))),
])
def test_realizability_types(text, want, theory):
    assert real_type(parse_main_formula(text, theory("pl_basics"))) == want


def test_readwrite_raw_and_clean(proofs):
    pf = proofs("readwrite")
    e = pf.proofs["readwrite"]
    raw = extract(e.derivation, pf.theory)
    assert st.show_st(raw) == "fun x -> ((write x * calc) * read)"
    assert st.show_st(display_term(pf, e)) == GOLDEN["readwrite"]


def test_sort3_golden(proofs):
    pf = proofs("sort3")
    got = display_term(pf, pf.proofs["sort3"], cleanup=False, simplify=False)
    t1 = "(if {le(2,3)} then skip else swap[2,3])"
    t2 = f"(swap[1,2] * {t1})"
    t3 = f"(if {{le(2,1)}} then {t2} else skip)"
    want = parse_st(f"({t1} * {t3})", pf.theory)
    assert st.alpha_eq_st(got, want)


def test_insertion_sort_program_shape(proofs):
    pf = proofs("insertion_sort")
    term = display_term(pf, pf.proofs["insertion_sort"], cleanup=True, simplify=False)
    assert insertion_sort_shape(term)
    raw = display_term(pf, pf.proofs["insertion_sort"], cleanup=False, simplify=False)
    assert insertion_sort_shape(raw)
    # a different loop body is not mistaken for it
    fake = parse_st("rec(skip, fun N -> fun y -> while {comp(z)}[z](fun n -> fun y -> skip, "
                    "fun n -> fun y -> skip, fun y -> skip, N) y)", pf.theory)
    assert not insertion_sort_shape(fake)


def test_exists_elimination_uses_lambda_star(theory):
    th = theory("pl_basics")
    d = parse_derivation('(exists_E (hyp u "ok") y v (exists_I y x "P(x)" (and_EL (hyp v "ok"))))', th)
    ctx = EMPTY.extend("u", parse_main_formula("ex x. P(x) /\\ Q(x)", th))
    term = extract(d, th, ctx)
    assert isinstance(term, st.App) and isinstance(term.fn, st.Lam) and term.fn.admin
    assert st.show_st(cleanup_admin(term)) == "(p0(x_u) & p0(p1(x_u)))"


def test_lambda_star_shape():
    body = st.Comp(st.Var("x"), st.Var("y"))
    lam = lambda_star("x", "y", body)
    v = lam.var
    assert v not in {"x", "y"}
    assert st.show_st(lam) == f"fun {v} -> (fun x -> fun y -> (x & y)) p0({v}) p1({v})"


def test_cleanup_is_idempotent_and_keeps_meaning(proofs):
    for name, pf, entry in corpus_entries():
        term, _, _ = extract_typed(entry.derivation, pf.theory, entry.ctx)
        once = cleanup_admin(term)
        assert cleanup_admin(once) == once
    pf = proofs("sort3")
    term = extract(pf.proofs["sort3"].derivation, pf.theory)
    for s in Swap3().exhaustive_states():
        assert evaluate(term, s, Swap3(), pf.theory)[:2] == \
            evaluate(cleanup_admin(term), s, Swap3(), pf.theory)[:2]


@pytest.mark.parametrize("name,pf,entry", list(corpus_entries(include_negative=True)),
                         ids=lambda x: x if isinstance(x, str) else "")
def test_extracted_terms_have_the_realizability_type(name, pf, entry):
    term, t = check_extraction_typing(entry.derivation, pf.theory, entry.ctx)
    if entry.expect is not None:
        assert t == real_type(entry.expect.body)


def test_free_variables_are_grounded(theory):
    th = theory("readwrite")
    t = parse_st("write y", th)
    g = free_var_ground(t, th)
    assert st.free_vars_st(g) == set()
    assert st.show_st(g) == "write c"
    with pytest.raises(ExtractError):
        free_var_ground(parse_st("y skip", th), th)
