import itertools

import pytest
from hypothesis import given, settings, strategies as hs

from hoare_extract.parser import parse_state_formula
from hoare_extract.statelogic import (
    DomainViolation, StateSequent, TooManyAtoms, UnboundMetavar, UnprovableStateSequent,
    auto_instances, check_h, check_h_or_fail, derive_h, instantiate_haxiom, tautology,
)
from hoare_extract.syntax import FunApp, SAnd, SAtom, SBot, SImp, SOr, STop, snot


def sf(text, th):
    return parse_state_formula(text, th)


def test_tautologies():
    p, q = SAtom("p", ()), SAtom("q", ())
    assert tautology([], SOr(p, snot(p)))
    assert tautology([p, SImp(p, q)], q)
    assert not tautology([SOr(p, q)], p)
    assert tautology([SBot()], p)
    assert tautology([], STop())


def test_atom_limit():
    atoms = [SAtom(f"a{i}", ()) for i in range(5)]
    goal = atoms[0]
    for a in atoms[1:]:
        goal = SOr(goal, a)
    with pytest.raises(TooManyAtoms):
        tautology([], goal, limit=4)


def test_sorted_needs_the_axiom(theory):
    th = theory("sort3")
    seq = StateSequent((sf("le(1,2) /\\ le(2,3)", th),), sf("sorted", th))
    assert not check_h(seq, auto=False)
    assert check_h(seq, th.hschemas)
    hint = ("sorted_of", {})
    assert check_h(seq, th.hschemas, hints=[hint])


def test_totality_with_explicit_instance(theory):
    th = theory("sort3")
    seq = StateSequent((sf("~le(2,3)", th),), sf("le(3,2)", th))
    assert not check_h(seq, auto=False)
    one, two, three = FunApp("1"), FunApp("2"), FunApp("3")
    assert check_h(seq, th.hschemas, hints=[("tot", {"l": two, "l'": three})])
    assert not check_h(seq, th.hschemas, hints=[("tot", {"l": one, "l'": two})])
    res = derive_h(seq, th.hschemas)
    assert res.ok and res.instances


def test_schema_domains(theory):
    th = theory("sort3")
    tot = th.hschema("tot")
    four, one = FunApp("4"), FunApp("1")
    with pytest.raises(DomainViolation):
        instantiate_haxiom(tot, {"l": four, "l'": one})
    with pytest.raises(UnboundMetavar):
        instantiate_haxiom(tot, {"l": one})


def test_auto_instances_stay_in_domain(theory):
    th = theory("sort3")
    seq = StateSequent((sf("~le(2,3)", th),), sf("le(3,2)", th))
    for b in auto_instances(seq, th.hschema("tot")):
        assert all(v in th.hschema("tot").domain(k) for k, v in b.items())


def test_failure_raises_with_sequent(theory):
    th = theory("insertion_sort")
    seq = StateSequent((), sf("sort(3)", th))
    with pytest.raises(UnprovableStateSequent) as e:
        check_h_or_fail(seq, th.hschemas)
    assert "sort(3)" in str(e.value)


def test_insertion_sort_obligations(theory):
    th = theory("insertion_sort")
    seq = StateSequent((sf("~comp(n+1) /\\ psort(n+1,N+1)", th),), sf("sort(N+1)", th))
    assert check_h(seq, th.hschemas)


# independent oracle: enumerate assignments, evaluate by recursion

_ATOMS = [SAtom(n, ()) for n in "pqrstu"]


def _val(f, v):
    if isinstance(f, STop):
        return True
    if isinstance(f, SBot):
        return False
    if isinstance(f, SAtom):
        return v[f.pred]
    if isinstance(f, SAnd):
        return _val(f.left, v) and _val(f.right, v)
    if isinstance(f, SOr):
        return _val(f.left, v) or _val(f.right, v)
    return (not _val(f.left, v)) or _val(f.right, v)


def _valid(hyps, goal):
    for bits in itertools.product((False, True), repeat=6):
        v = dict(zip("pqrstu", bits))
        if all(_val(h, v) for h in hyps) and not _val(goal, v):
            return False
    return True


_sf = hs.recursive(
    hs.one_of(hs.sampled_from(_ATOMS), hs.just(STop()), hs.just(SBot())),
    lambda sub: hs.one_of(hs.builds(SAnd, sub, sub), hs.builds(SOr, sub, sub),
                          hs.builds(SImp, sub, sub)),
    max_leaves=10)


@settings(max_examples=300)
@given(hs.lists(_sf, max_size=3), _sf)
def test_check_h_agrees_with_enumeration(hyps, goal):
    assert check_h(StateSequent(tuple(hyps), goal)) == _valid(hyps, goal)


@given(_sf)
def test_excluded_middle(a):
    assert check_h(StateSequent((), SOr(a, snot(a))))
