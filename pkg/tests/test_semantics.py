import random

import pytest

from hoare_extract import stlang as st
from hoare_extract.models import InsertSort, QuerySolve, Swap3, model_for
from hoare_extract.parser import parse_main_formula, parse_st, parse_state_formula, parse_term, parse_triple
from hoare_extract.semantics import (
    Budget, ClosureV, Evaluator, NatV, PairV, UNIT, check_realizes, currying_check,
    embed_main_formula, eval_state_formula, evaluate, value_to_json, values_equal,
)
from hoare_extract.syntax import Triple


def run(text, th, model, state, env=None):
    return evaluate(parse_st(text, th), state, model, th, env=env)[:2]


def test_state_formula_lookup(theory):
    th = theory("sort3")
    m = Swap3()
    f = parse_state_formula("le(2,3)", th)
    assert not eval_state_formula(f, {}, (1, 3, 2), m)
    assert eval_state_formula(f, {}, (1, 2, 3), m)


def test_comp_zero_always_holds(theory):
    th = theory("insertion_sort")
    m = InsertSort(8)
    f = parse_state_formula("comp(0)", th)
    rng = random.Random(3)
    for s in m.sample_states(rng, 50):
        assert eval_state_formula(f, {}, s, m)


def test_first_order_terms_are_pure(theory):
    th = theory("arith")
    m = model_for(th)
    s = frozenset({("ok", ())})
    v, out = evaluate(st.term_to_st(parse_term("add(2,3)", th)), s, m, th)[:2]
    assert v == NatV(5) and out is s


def test_elim_evaluates_both_branch_functions_from_the_same_state(theory):
    th = theory("sort3")
    m = Swap3()
    left = run("elim(inl(skip), (swap[1,2] * (fun a -> a)), (swap[2,3] * (fun b -> b)))",
               th, m, (1, 2, 3))
    right = run("elim(inr(skip), (swap[1,2] * (fun a -> a)), (swap[2,3] * (fun b -> b)))",
                th, m, (1, 2, 3))
    # each branch continues from the state its own function evaluation produced
    assert left == (UNIT, (2, 1, 3))
    assert right == (UNIT, (1, 3, 2))


def test_conditional_runs_only_the_selected_branch(theory):
    th = theory("sort3")
    m = Swap3()
    assert run("if {le(1,2)} then skip else swap[1,2]", th, m, (1, 2, 3))[1] == (1, 2, 3)
    assert run("if {le(1,2)} then skip else swap[1,2]", th, m, (2, 1, 3))[1] == (1, 2, 3)


def test_recursor_unrolls(theory):
    th = theory("insertion_sort")
    m = InsertSort(8)
    start = (5, 4, 3, 2, 1, 0, 9, 9)
    prog = "rec(skip, fun n -> fun y -> swap n)"
    for k in range(5):
        got = evaluate(st.App(parse_st(prog, th), st.term_to_st(parse_term(str(k), th))),
                       start, m, th)[1]
        want = start
        for i in range(k):
            want = m.swap(i, want)
        assert got == want


def _loop_oracle(m, n, state):
    """The controlled loop written out directly for the insertion step."""
    while n > 0:
        if m.comp(n, state):
            state = m.swap(n - 1, state)
            n -= 1
        else:
            return state
    return state


def test_loop_unrolls(theory):
    th = theory("insertion_sort")
    m = InsertSort(8)
    loop = ("while {comp(z)}[z](fun n -> fun y -> swap n, fun n -> fun y -> skip, "
            "fun y -> skip, k) skip")
    rng = random.Random(5)
    for s in m.sample_states(rng, 60):
        for k in range(0, 7):
            got = run(loop, th, m, s, env={"k": NatV(k)})
            assert got == (UNIT, _loop_oracle(m, k, s))


def test_default_values(theory):
    th = theory("sort3")
    m = Swap3()
    v, s = run("default[D -> C] 2", th, m, (2, 1, 0))
    assert v == UNIT and s == (2, 1, 0)
    v, _ = run("p0(default[D * C])", th, m, (0, 0, 0))
    assert v == NatV(1)  # the canonical constant of the three-cell signature


def test_run_readwrite_with_trace(proofs):
    pf = proofs("readwrite")
    from hoare_extract.extractor import extract
    term = st.App(extract(pf.proofs["readwrite"].derivation, pf.theory),
                  st.term_to_st(parse_term("7", pf.theory)))
    v, s, trace = evaluate(term, QuerySolve().default_state(), QuerySolve(), pf.theory, trace=True)
    assert value_to_json(v, erase_units=True) == 8
    assert [t.constant for t in trace] == ["write", "calc", "read"]


def test_determinism(proofs):
    pf = proofs("insertion_sort")
    from hoare_extract.extractor import extract
    term = st.App(extract(pf.proofs["insertion_sort"].derivation, pf.theory),
                  st.term_to_st(parse_term("6", pf.theory)))
    m = InsertSort()
    s = m.sample_states(random.Random(1), 1)[0]
    a = evaluate(term, s, m, pf.theory)
    b = evaluate(term, s, m, pf.theory)
    assert m.serialize(a[1]) == m.serialize(b[1])


def test_readwrite_realizes_its_conclusion(proofs):
    pf = proofs("readwrite")
    from hoare_extract.extractor import extract
    from hoare_extract import kernel as K
    d = pf.proofs["readwrite"].derivation
    v = check_realizes(extract(d, pf.theory), K.check(d, pf.theory).triple,
                       model_for(pf.theory), Budget(states=60), pf.theory)
    assert v.status == "pass" and v.checked > 0


def test_skip_realizes_trivial_triple(theory):
    th = theory("sort3")
    v = check_realizes(st.SKIP, parse_triple("{true} true {true}", th), Swap3(), theory=th)
    assert v.status == "pass"


def test_skip_does_not_sort(theory):
    th = theory("sort3")
    v = check_realizes(st.SKIP, parse_triple("{true} true {sorted}", th), Swap3(), theory=th)
    assert v.status == "fail"
    bad = v.counterexample["state"]
    assert bad != sorted(bad)


def test_unsatisfiable_precondition_is_inconclusive(theory):
    th = theory("sort3")
    v = check_realizes(st.SKIP, parse_triple("{false} true {true}", th), Swap3(), theory=th)
    assert v.status == "inconclusive" and not v.ok


def test_wrong_witness_fails(theory):
    th = theory("readwrite")
    m = model_for(th)
    goal = parse_triple("{true} all x. {true} ex y. P(x,y) {true} {true}", th)
    good = parse_st("fun x -> (g x & skip)", th)
    bad = parse_st("fun x -> (x & skip)", th)
    assert check_realizes(good, goal, m, theory=th).status == "pass"
    assert check_realizes(bad, goal, m, theory=th).status == "fail"


def test_currying_examples(theory):
    th = theory("sort3")
    m = Swap3()
    states = m.exhaustive_states()
    assert currying_check(parse_st("(x & y)"), "x", "y", parse_st("(skip & skip)"),
                          m, states, th).ok
    t = parse_st("(swap[1,2] * (x & y))", th)
    s = parse_st("((swap[2,3] * skip) & skip)", th)
    assert currying_check(t, "x", "y", s, m, states, th).ok
    assert not currying_check(parse_st("(x & y)"), "x", "y", st.SKIP, m, states, th).ok


def test_closures_compared_by_application(theory):
    th = theory("sort3")
    ev = Evaluator(Swap3(), th)
    f1 = ClosureV({}, "x", parse_st("(x & skip)"))
    f2 = ClosureV({}, "y", parse_st("(y & skip)"))
    f3 = ClosureV({}, "y", parse_st("(succ y & skip)"))
    probes = [NatV(0), NatV(2)]
    assert values_equal(f1, f2, ev, probes, [(0, 1, 2)])
    assert not values_equal(f1, f3, ev, probes, [(0, 1, 2)])
    assert values_equal(PairV(NatV(1), UNIT), PairV(NatV(1), UNIT), ev)


def test_embedding_text(theory):
    th = theory("readwrite")
    tr = Triple(parse_state_formula("α", th), parse_main_formula("true", th),
                parse_state_formula("β", th))
    assert embed_main_formula(tr) == "∃π. [α](π) ⟹ ⊤ ∧ ∃π′. [β](π′)"
    assert embed_main_formula(parse_main_formula("P(x,x)", th)) == "P(x,x)"
    both = embed_main_formula(parse_main_formula("P(x,x) /\\ P(c,c)", th))
    assert both == "P(x,x) ∧ P(c,c)"
