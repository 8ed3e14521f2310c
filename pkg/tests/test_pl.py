import pytest

from hoare_extract import kernel as K
from hoare_extract.parser import parse_derivation, parse_main_formula, parse_state_formula
from hoare_extract.pl import EmbedError, PLError, embed_formula, embed_pl, pl_check
from hoare_extract.syntax import EMPTY, Triple, alpha_eq


def P(th, text):
    return parse_derivation(text, th, pl=True)


def m(th, text, pl=False):
    return parse_main_formula(text, th, pl=pl)


def test_natural_deduction_checks(theory):
    th = theory("pl_basics")
    d = P(th, '(imp_I u "P(c) /\\ Q(c)" (and_I (and_ER (hyp u)) (and_EL (hyp u))))')
    assert alpha_eq(pl_check(d, th), m(th, "P(c) /\\ Q(c) => Q(c) /\\ P(c)", pl=True))


def test_natural_deduction_rejects_bad_proofs(theory):
    th = theory("pl_basics")
    with pytest.raises(PLError):
        pl_check(P(th, "(imp_E (hyp u) (hyp u))"), th, EMPTY.extend("u", m(th, "P(c)", pl=True)))
    with pytest.raises(PLError):
        pl_check(P(th, "(hyp u)"), th)


def test_embedding_of_formulas(theory):
    th = theory("pl_basics")
    ok = parse_state_formula("ok", th)
    f = embed_formula(m(th, "all x. P(x) => Q(x)", pl=True), ok)
    assert alpha_eq(f, m(th, "all x. {ok} P(x) => {ok} Q(x) {ok} {ok}"))


def test_embedded_proof_concludes_the_embedded_formula(theory):
    th = theory("pl_basics")
    d = P(th, '(forall_I x (imp_I u "P(x)" (hyp u)))')
    alpha = parse_state_formula("mark(c)", th)
    seq = K.check(embed_pl(d, alpha, th), th)
    want = Triple(alpha, embed_formula(pl_check(d, th), alpha), alpha)
    assert alpha_eq(seq.triple, want)


def test_embedding_rejects_clashing_state_formula(theory):
    th = theory("pl_basics")
    d = P(th, '(forall_I x (imp_I u "P(x)" (hyp u)))')
    with pytest.raises(EmbedError):
        embed_pl(d, parse_state_formula("mark(x)", th), th)


def test_arithmetic_embedding(proofs):
    pf = proofs("arith")
    seq = K.check(pf.proofs["one_plus_one"].derivation, pf.theory)
    assert seq.show(unicode=False) == "|- {true} add(1,1) = 2 {true}"


def test_every_shipped_logic_theorem_is_embedded(proofs):
    pf = proofs("pl_basics")
    assert len(pf.proofs) >= 10
    for e in pf.proofs.values():
        seq = K.check(e.derivation, pf.theory)
        assert seq.triple.pre == seq.triple.post
