"""The suites must notice when the thing they check is broken."""

from hoare_extract import checks
from hoare_extract.models import InsertSort, Swap3
from hoare_extract.parser import load_proofs
from hoare_extract.syntax import SAtom, SImp, SOr


def test_brute_entails():
    p, q = SAtom("p0", ()), SAtom("p1", ())
    atoms = (p, q)
    assert checks.brute_entails((p, SImp(p, q)), q, atoms)
    assert not checks.brute_entails((SOr(p, q),), p, atoms)


def test_state_logic_suite_catches_unsound_prover(monkeypatch):
    assert checks.h_oracle_suite(100, 20).ok
    monkeypatch.setattr(checks, "check_h", lambda seq: True)
    assert not checks.h_oracle_suite(100, 20).ok


def test_sort3_catches_broken_swap(monkeypatch):
    orig = Swap3.const_sem

    def no_swap(self, name, index):
        return lambda s: (orig(self, name, index)(s)[0], s)
    monkeypatch.setattr(Swap3, "const_sem", no_swap)
    r = checks.sort3_exhaustive()
    assert not r.ok and r.checked == 33


def test_insertion_catches_broken_swap(monkeypatch):
    monkeypatch.setattr(InsertSort, "swap", lambda self, n, s: s)
    r = checks.insertion_sort_semantics(Ns=range(3), per_n=20)
    assert not r.ok and r.failures


def test_state_axioms_catch_wrong_order(monkeypatch):
    monkeypatch.setattr(Swap3, "eval_state_atom",
                        lambda self, p, a, s: s[a[0] - 1] < s[a[1] - 1] if p == "le"
                        else s[0] <= s[1] <= s[2])
    assert not checks.haxiom_validity(200).ok


def test_swap_axiom_catches_wrong_realizer(monkeypatch):
    monkeypatch.setattr(Swap3, "const_sem", lambda self, name, index: lambda s: ((), s))
    assert not checks.swap3_exhaustive_validity().ok


def test_golden_catches_mismatch(monkeypatch):
    monkeypatch.setitem(checks.GOLDEN, "readwrite", "fun x -> read")
    r = checks.golden_extraction()
    assert not r.ok and "readwrite" in r.detail


def test_negative_fixture_fails_verification():
    pf = load_proofs("sort3_broken")
    for entry in pf.proofs.values():
        v = checks.verify_entry(pf, entry, samples=27, seed=0)
        assert v.status == "fail" and v.counterexample


def test_negative_fixture_excluded_from_sweep():
    assert "sort3_broken" in checks.corpus_names(include_negative=True)
    assert "sort3_broken" not in checks.corpus_names()


def test_result_line_format():
    r = checks.CheckResult("demo", False, 3, "oops", 0.25)
    assert r.line() == "FAIL demo: 3 checked in 0.25s (oops)"


def test_suite_order_is_fixed():
    names = [n for n, _ in checks.all_suites()]
    assert names == [n for n, _ in checks.all_suites(quick=True)]
    assert len(names) == len(set(names)) == 13
