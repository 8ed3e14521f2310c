import pytest

from hoare_extract import kernel as K
from hoare_extract import stlang as st
from hoare_extract.checks import corpus_entries, corpus_names
from hoare_extract.extractor import cleanup_admin, extract_typed
from hoare_extract.parser import (
    ParseError, parse_derivation, parse_proofs, parse_st, parse_state_formula, parse_theory,
    parse_triple, parse_type, read_sexps, show_derivation, show_proofs, show_theory,
)
from hoare_extract.syntax import SOr, SAtom


def test_readwrite_inventory(theory):
    th = theory("readwrite")
    sig = th.signature
    assert sorted(sig.statepreds) == ["solved", "stored"]
    assert {p: n for p, n in sig.preds.items() if n == 2} == {"P": 2}
    assert sorted(th.sschemas) == ["read", "solve", "store"]
    assert th.model == "query_solve"


def test_duplicate_state_predicate_rejected():
    with pytest.raises(ParseError) as e:
        parse_theory("mode sl\nstatepred stored 1\nstatepred stored 2\n")
    assert "duplicate" in str(e.value)
    assert e.value.diagnostic.span.line == 3


def test_totality_schema():
    th = parse_theory("mode sl\nstatepred le 2\nhaxiom tot(l,l'): |- le(l,l') \\/ le(l',l)\n")
    (h,) = th.hschemas
    assert h.metavars == ("l", "l'")
    assert h.hyps == ()
    assert isinstance(h.goal, SOr) and all(isinstance(x, SAtom) for x in (h.goal.left, h.goal.right))


def test_unknown_symbol_and_arity():
    with pytest.raises(ParseError):
        parse_theory("mode sl\nstatepred le 2\nhaxiom bad: |- le(1)\n")
    with pytest.raises(ParseError):
        parse_theory("mode sl\nstatepred le 2\nhaxiom bad: |- ge(x,y)\n")


def test_mode_must_come_first():
    with pytest.raises(ParseError):
        parse_theory("statepred p 0\nmode sa\n")


def test_readwrite_derivation_parses(theory):
    th = theory("readwrite")
    d = parse_derivation(
        '(forall_I x (and_ER (and_I (and_ER (and_I (sax store x a="α") (sax solve x))) '
        '(sax read x))) "β")', th)
    seq = K.check(d, th)
    assert seq.show() == "⊢_S ⟨β⟩∀x⟨α⟩∃y P(x,y)⟨⊤⟩⟨β⟩"


def test_missing_branch_is_an_arity_error(theory):
    th = theory("sort3")
    with pytest.raises(ParseError) as e:
        parse_derivation('(cond "le(2,3)" "le(3,2)" auto (hyp u))', th)
    msg = str(e.value)
    assert "cond expects" in msg
    assert e.value.diagnostic.span.line == 1


def test_unknown_rule(theory):
    with pytest.raises(ParseError) as e:
        parse_derivation("(and_X (top))", theory("sort3"))
    assert "unknown rule" in str(e.value)


def test_error_spans_stay_inside_the_file(theory):
    text = '(theory "sort3.slt")\n(proof p\n  (and_I (top) (nonsense)))\n'
    with pytest.raises(ParseError) as e:
        parse_proofs(text, filename="x.slp")
    sp = e.value.diagnostic.span
    lines = text.splitlines()
    assert 1 <= sp.line <= sp.end_line <= len(lines)
    assert sp.col >= 1 and sp.end_col <= len(lines[sp.end_line - 1]) + 1
    assert str(e.value).startswith("x.slp:3:")


def test_sexp_reader_reports_unbalanced():
    with pytest.raises(ParseError):
        read_sexps("(a (b)")
    with pytest.raises(ParseError):
        read_sexps("a)")


def test_triples_and_types(theory):
    th = theory("sort3")
    tr = parse_triple("{le(1,2)} true {sorted}", th)
    assert tr.pre == parse_state_formula("le(1,2)", th)
    assert parse_type("(D -> C) * (C + D)") == st.Prod(st.Arrow(st.D, st.C), st.Sum(st.C, st.D))


def test_insertion_sort_file_parses(proofs):
    pf = proofs("insertion_sort")
    assert list(pf.proofs) == ["insert", "insertion_sort"]
    assert list(pf.proofs["insert"].ctx.labels()) == ["u"]


@pytest.mark.parametrize("name", corpus_names(include_negative=True))
def test_theory_round_trip(name, proofs):
    th = proofs(name).theory
    text = show_theory(th)
    again = parse_theory(text)
    assert show_theory(again) == text
    assert again.signature == th.signature
    assert again.hschemas == th.hschemas
    assert again.defeqs == th.defeqs


@pytest.mark.parametrize("name", corpus_names(include_negative=True))
def test_proof_file_round_trip(name, proofs):
    pf = proofs(name)
    again = parse_proofs(show_proofs(pf), filename=name)
    assert list(again.proofs) == list(pf.proofs)
    for k, e in pf.proofs.items():
        assert again.proofs[k].derivation == e.derivation
        assert again.proofs[k].ctx == e.ctx
        assert again.proofs[k].expect == e.expect


def test_single_derivation_round_trip(proofs):
    pf = proofs("sort3")
    d = pf.proofs["sort3"].derivation
    assert parse_derivation(show_derivation(d), pf.theory) == d


@pytest.mark.parametrize("cleanup", [False, True])
def test_extracted_terms_round_trip(cleanup):
    n = 0
    for name, pf, entry in corpus_entries(include_negative=True):
        term, _, _ = extract_typed(entry.derivation, pf.theory, entry.ctx)
        if cleanup:
            term = cleanup_admin(term)
        back = parse_st(st.show_st(term), pf.theory)
        assert st.alpha_eq_st(back, term), (name, entry.name, st.show_st(term))
        n += 1
    assert n >= 15


def test_json_round_trip_of_terms():
    for name, pf, entry in corpus_entries():
        term, _, _ = extract_typed(entry.derivation, pf.theory, entry.ctx)
        j = st.to_json(term)
        back = st.from_json(j, lambda s: parse_state_formula(s, pf.theory))
        assert st.alpha_eq_st(back, term)
