import random
from itertools import permutations, product

import pytest

from hoare_extract.models import (
    MODELS, InsertSort, ModelError, Pure, QSState, QuerySolve, Swap3,
    builtin_theory, model_for, reference_sort, register_model,
)
from hoare_extract.parser import parse_st
from hoare_extract.semantics import EvalError, NatV, evaluate


def run(th, model, text, state):
    return evaluate(parse_st(text, th), state, model, th)[:2]


# query-solve

def test_calc_without_query_is_noop(theory):
    th = theory("readwrite")
    m = QuerySolve()
    _, s = run(th, m, "calc", QSState())
    assert s == QSState()


def test_calc_solves_stored_query(theory):
    th = theory("readwrite")
    m = QuerySolve("double")
    _, s = run(th, m, "(write 5 * calc)", QSState())
    assert s.query == 5 and s.answer == (5, 10)
    assert m.eval_state_atom("stored", (5,), s)
    assert m.eval_state_atom("solved", (5,), s)
    assert not m.eval_state_atom("solved", (4,), s)


def test_read_missing_answer_is_zero(theory):
    th = theory("readwrite")
    v, s = run(th, QuerySolve(), "p0(read)", QSState(query=3))
    assert v == NatV(0) and s == QSState(query=3)


def test_oracle_choice():
    assert QuerySolve("square").g(4) == 16
    with pytest.raises(ModelError):
        QuerySolve("cube")


def test_qs_state_json():
    m = QuerySolve()
    s = QSState(2, (4, 5), frozenset({("alpha", ())}))
    assert m.parse_state(m.serialize(s)) == s
    assert m.parse_state({}) == QSState()
    with pytest.raises(ModelError):
        m.parse_state([1])
    with pytest.raises(ModelError):
        m.parse_state({"answer": [4, 6]})        # 6 is not succ 4
    with pytest.raises(ModelError):
        m.parse_state({"answer": [4]})


def test_qs_main_atoms():
    m = QuerySolve()
    assert m.eval_main_atom("P", (3, 4))
    assert not m.eval_main_atom("P", (3, 5))
    with pytest.raises(EvalError):
        m.eval_main_atom("Q", (1,))


# 3-array

def test_swap3_le_and_sorted():
    m = Swap3()
    assert m.eval_state_atom("le", (1, 3), (1, 3, 2))
    assert not m.eval_state_atom("le", (2, 3), (1, 3, 2))
    assert not m.eval_state_atom("le", (0, 1), (1, 3, 2))
    for p in permutations((1, 2, 3)):
        assert m.eval_state_atom("sorted", (), p) == (p == (1, 2, 3))


def test_swap3_swaps(theory):
    th = theory("sort3")
    m = Swap3()
    for s in product(range(3), repeat=3):
        _, out = run(th, m, "swap[1,3]", s)
        assert out == (s[2], s[1], s[0])
    with pytest.raises(EvalError):
        m.const_sem("swap", (1, 4))


def test_swap3_states():
    m = Swap3()
    assert len(m.exhaustive_states()) == 27
    assert m.parse_state([2, 0, 1]) == (2, 0, 1)
    with pytest.raises(ModelError):
        m.parse_state([1, 2])


# insertion sort

def test_swap_at_boundary_is_noop():
    m = InsertSort(4)
    s = (4, 3, 2, 1)
    assert m.swap(0, s) == (3, 4, 2, 1)
    assert m.swap(3, s) == s
    assert m.swap(9, s) == s


def _psort_oracle(n, N, c):
    """Direct reading: the first N+1 cells without cell n are sorted and
    cell n is at most its right neighbour."""
    M = len(c)
    idx = [i for i in range(min(N, M - 1) + 1) if i != n]
    rest = [c[i] for i in idx]
    ok = all(a <= b for a, b in zip(rest, rest[1:]))
    if n < N and n + 1 < M:
        ok = ok and c[n] <= c[n + 1]
    return ok


def test_psort_agrees_with_oracle():
    m = InsertSort(5)
    rng = random.Random(0)
    for _ in range(500):
        c = tuple(rng.randrange(0, 4) for _ in range(5))
        N = rng.randrange(1, 5)
        n = rng.randrange(0, N)
        assert m.psort(n, N, c) == _psort_oracle(n, N, c), (n, N, c)


def test_psort_at_top_means_prefix_sorted():
    m = InsertSort(5)
    assert m.psort(3, 3, (1, 2, 3, 0, 0))
    assert not m.psort(3, 3, (2, 1, 3, 0, 0))


def test_sort_and_comp():
    m = InsertSort(4)
    c = (1, 2, 2, 0)
    assert m.sort(2, c) and not m.sort(3, c)
    assert m.sort(10, (0, 1, 2, 3))
    assert m.comp(0, c)
    assert m.comp(3, c) and not m.comp(1, c)
    assert not m.comp(4, c)


def test_insertion_state_padding():
    m = InsertSort(4)
    assert m.parse_state([5]) == (5, 0, 0, 0)
    assert m.parse_state([1, 2, 3, 4, 5]) == (1, 2, 3, 4)
    with pytest.raises(ModelError):
        m.parse_state({"a": 1})
    with pytest.raises(ModelError):
        InsertSort(0)


def test_reference_sort():
    assert reference_sort((3, 1, 2, 0), 2) == (1, 2, 3, 0)
    assert reference_sort((3, 1), 0) == (3, 1)


# pure model and registry

def test_pure_is_deterministic():
    a, b = Pure(1), Pure(1)
    assert [a.eval_main_atom("P", (i,)) for i in range(20)] == \
        [b.eval_main_atom("P", (i,)) for i in range(20)]
    assert a.interp_fun("f", (3,)) in range(6)
    s = frozenset({("ok", ()), ("mark", (2,))})
    assert a.parse_state(a.serialize(s)) == s


def test_registry(theory):
    assert {"query_solve", "swap3", "insertion_sort", "pure"} <= set(MODELS)
    assert isinstance(model_for(theory("sort3")), Swap3)
    assert model_for(theory("insertion_sort"), M=6).M == 6
    with pytest.raises(ModelError, match="unknown model"):
        model_for(theory("sort3"), "nope")
    with pytest.raises(ModelError, match="already registered"):
        register_model("swap3", lambda o, t: Swap3(), {})


def test_builtin_theories():
    assert builtin_theory("swap3").model == "swap3"
    with pytest.raises(ModelError):
        builtin_theory("pure")


def test_sampling_respects_seed():
    m = InsertSort(8)
    a = m.sample_states(random.Random(5), 10)
    b = m.sample_states(random.Random(5), 10)
    assert a == b and all(len(s) == 8 for s in a)
