import pytest

from hoare_extract import kernel as K
from hoare_extract.checks import check_entry, corpus_entries
from hoare_extract.extractor import extract
from hoare_extract.parser import parse_derivation, parse_main_formula, parse_state_formula
from hoare_extract.syntax import EMPTY, Context, alpha_eq


def D(th, text, pl=False):
    return parse_derivation(text, th, pl=pl)


def ctx(th, **hyps):
    c = EMPTY
    for k, v in hyps.items():
        c = c.extend(k, parse_main_formula(v, th))
    return c


@pytest.mark.parametrize("name,pf,entry", list(corpus_entries(include_negative=True)),
                         ids=lambda x: x if isinstance(x, str) else "")
def test_corpus_proof_checks(name, pf, entry):
    check_entry(pf, entry)


def test_readwrite_conclusion(proofs):
    pf = proofs("readwrite")
    seq = K.check(pf.proofs["readwrite"].derivation, pf.theory)
    assert seq.show() == "⊢_S ⟨β⟩∀x⟨α⟩∃y P(x,y)⟨⊤⟩⟨β⟩"
    assert seq.show(unicode=False) == "|- {β} all x. {α} ex y. P(x,y) {true} {β}"


def test_sort3_conclusion(proofs):
    pf = proofs("sort3")
    seq = K.check(pf.proofs["sort3"].derivation, pf.theory)
    assert seq.show() == "⊢_S ⟨⊤⟩⊤⟨sorted⟩"


def test_insertion_sort_conclusions(proofs):
    pf = proofs("insertion_sort")
    ins = pf.proofs["insert"]
    assert K.check(ins.derivation, pf.theory, ins.ctx).show() == \
        "u:⊤ ⊢_S ⟨psort(n,N+1)⟩⊤⟨sort(N+1)⟩"
    top = pf.proofs["insertion_sort"]
    assert K.check(top.derivation, pf.theory).show() == "⊢_S ⟨⊤⟩∀N⟨⊤⟩⊤⟨sort(N)⟩⟨⊤⟩"


def test_mid_state_mismatch_names_the_conjunction(theory):
    th = theory("readwrite")
    d = D(th, '(and_I (sax store x a="α") (sax read x))')
    with pytest.raises(K.StateMismatch) as e:
        K.check(d, th)
    assert isinstance(e.value.node, K.AndI)
    assert "stored(x)" in str(e.value) and "solved(x)" in str(e.value)


def test_eigenvariable_condition(theory):
    th = theory("pl_basics")
    d = D(th, '(forall_I x (hyp u "ok") "ok")')
    with pytest.raises(K.EigenvariableViolation):
        K.check(d, th, ctx(th, u="P(x)"))
    # fine once x is not free in the context
    assert K.check(d, th, ctx(th, u="P(c)")).triple.pre == parse_state_formula("ok", th)


def test_unknown_label(theory):
    th = theory("pl_basics")
    with pytest.raises(K.UnknownLabel):
        K.check(D(th, '(hyp v "ok")'), th)


def test_consequence_needs_a_valid_state_sequent(theory):
    th = theory("pl_basics")
    with pytest.raises(K.UnprovableStateSequent):
        K.check(D(th, '(cons (top "ok") :pre "true")'), th)
    seq = K.check(D(th, '(cons (top "ok") :pre "ok /\\ mark(c)")'), th)
    assert seq.triple.pre == parse_state_formula("ok /\\ mark(c)", th)


def test_projection_of_a_non_conjunction(theory):
    th = theory("pl_basics")
    with pytest.raises(K.RuleMismatch):
        K.check(D(th, "(and_EL (top))"), th)


def test_arithmetic_rules_need_arithmetic_mode(theory):
    th = theory("pl_basics")
    with pytest.raises(K.KernelError):
        K.check(K.EqRefl(parse_main_formula("P(c)", th), parse_state_formula("ok", th)), th)


def test_unknown_action_axiom(theory):
    with pytest.raises(K.UnknownSchema):
        K.check(K.SAxiom("nope", ()), theory("sort3"))


def test_case_split_must_be_exhaustive(theory):
    th = theory("sort3")
    def split(a, b, hints="auto"):
        return D(th, f'(cond "{a}" "{b}" {hints} '
                     f'(cons (top "{a} /\\ true") :post "true") '
                     f'(cons (top "{b} /\\ true") :post "true"))')
    with pytest.raises(K.UnprovableStateSequent):
        K.check(split("le(2,3)", "le(1,2)"), th)
    good = split("le(2,3)", "le(3,2)", "(hints (tot l=2 l'=3))")
    assert K.check(good, th).show(unicode=False) == "|- {true} true {true}"


def test_or_elimination_and_implication(theory):
    th = theory("pl_basics")
    d = D(th, '(or_E (hyp u "ok") a (or_IR (hyp a "ok") "Q(c)") b (or_IL (hyp b "ok") "P(c)"))')
    seq = K.check(d, th, ctx(th, u="P(c) \\/ Q(c)"))
    assert alpha_eq(seq.triple.body, parse_main_formula("Q(c) \\/ P(c)", th))
    imp = D(th, '(imp_I u "P(c)" (hyp u "ok") "ok")')
    seq = K.check(imp, th)
    assert seq.show(unicode=False) == "|- {ok} P(c) => {ok} P(c) {ok} {ok}"


def test_exists_rules(theory):
    th = theory("pl_basics")
    d = D(th, '(exists_E (hyp u "ok") y v (exists_I y x "P(x)" (and_EL (hyp v "ok"))))')
    seq = K.check(d, th, ctx(th, u="ex x. P(x) /\\ Q(x)"))
    assert alpha_eq(seq.triple.body, parse_main_formula("ex z. P(z)", th))
    # the witness variable may not escape
    bad = D(th, '(exists_E (hyp u "mark(y)") y v (and_EL (hyp v "mark(y)")))')
    with pytest.raises(K.KernelError):
        K.check(bad, th, ctx(th, u="ex x. P(x) /\\ Q(x)"))


def test_induction_rejects_variable_free_in_context(theory):
    th = theory("arith")
    d = D(th, '(ind (eq_refl "0") x u "x = x" (eq_refl "x+1"))')
    assert K.check(d, th).show(unicode=False) == "|- {true} all x. {true} x = x {true} {true}"
    with pytest.raises(K.KernelError):
        K.check(d, th, ctx(th, v="x = 0"))


def test_composition_macro(proofs):
    pf = proofs("readwrite")
    th = pf.theory
    a = D(th, '(sax store x a="α")')
    b = D(th, "(sax solve x)")
    seq = K.check_comp(a, b, th)
    assert seq.triple.pre == parse_state_formula("α", th)
    assert seq.triple.post == parse_state_formula("solved(x)", th)
    assert K.check(K.derive_comp(a, b), th) == seq


def test_extraction_rechecks(theory):
    th = theory("readwrite")
    with pytest.raises(K.KernelError):
        extract(D(th, '(and_I (sax store x a="α") (sax read x))'), th)
