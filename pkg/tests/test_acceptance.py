"""Acceptance criteria, one test each, at their stated sizes and time limits.

Every test records a one-line verdict, printed at the end of the pytest run
and by ``python3 tests/test_acceptance.py``.
"""

import io
import time

import pytest

from hoare_extract import checks
from hoare_extract import stlang as st
from hoare_extract.cli import main
from hoare_extract.parser import load_proofs, parse_st

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def readwrite_golden():
    out = io.StringIO()
    code, secs = _timed(lambda: main(["extract", "examples/readwrite", "--cleanup-admin",
                                      "--simplify-units"], out=out))
    th = load_proofs("readwrite").theory
    text = out.getvalue().strip()
    want = parse_st("fun x -> ((write x * calc) * read)", th)
    ok = code == 0 and st.alpha_eq_st(parse_st(text, th), want) and secs < 1.0
    return ok, f"{text} in {secs:.3f}s (limit 1s)"


def sort3_golden():
    pf = load_proofs("sort3")
    th = pf.theory
    t1 = parse_st("if {le(2,3)} then skip else swap[2,3]", th)
    t2 = st.star(parse_st("swap[1,2]", th), t1)
    t3 = st.Ite(parse_st("if {le(2,1)} then skip else skip", th).cond, t2, st.SKIP)
    whole = st.star(t1, t3)
    term = checks.display_term(pf, pf.proofs["sort3"])
    return st.alpha_eq_st(term, whole), st.show_st(term)


def insertion_shape():
    pf = load_proofs("insertion_sort")
    term = checks.display_term(pf, pf.proofs["insertion_sort"], simplify=False)
    return checks.insertion_sort_shape(term), "rec(skip, ...) with the comp-controlled swap loop"


def sort3_exhaustive():
    r, secs = _timed(checks.sort3_exhaustive)
    ok = r.ok and r.checked == 33 and secs < 1.0
    return ok, f"{r.checked} starts, {len(r.failures)} failures in {secs:.3f}s (limit 1s)"


def insertion_semantics():
    r, secs = _timed(lambda: checks.insertion_sort_semantics(M=16, Ns=range(8), per_n=200, seed=0))
    ok = r.ok and r.checked == 1600 and secs < 5.0
    return ok, f"{r.checked} runs, {len(r.failures)} failures in {secs:.3f}s (limit 5s)"


def typing_sweep():
    entries = list(checks.corpus_entries(include_negative=True))
    embedded = sum(e.embedded for _, _, e in entries)
    r = checks.typing_sweep()
    ok = r.ok and r.checked >= 15 and embedded >= 10
    return ok, f"{r.checked} derivations ({embedded} embedded), {len(r.failures)} failures"


def realizability_sweep():
    r = checks.realizability_sweep(samples=100, seed=0)
    negative = 0
    for name in checks.NEGATIVE:
        pf = load_proofs(name)
        for e in pf.proofs.values():
            v = checks.verify_entry(pf, e, 100, 0)
            negative += v is not None and v.status == "fail" and bool(v.counterexample)
    ok = r.ok and negative > 0
    return ok, f"{r.checked} verified, negative fixture failed {negative} times with counterexamples"


def lemma_suites():
    rs = [checks.currying_suite(50), checks.purity_suite(200), checks.chi_suite(100)]
    sizes = [50 * len(checks.MODEL_NAMES), 200, 100]
    ok = all(r.ok and r.checked == n for r, n in zip(rs, sizes))
    return ok, ", ".join(f"{r.name} {r.checked}" for r in rs)


def model_axioms():
    rs = [checks.haxiom_validity(1000), checks.saxiom_validity(100),
          checks.swap3_exhaustive_validity()]
    return all(r.ok for r in rs), ", ".join(f"{r.name} {r.checked}" for r in rs)


def state_logic_oracle():
    r = checks.h_oracle_suite(500, 100)
    return r.ok and r.checked == 600, r.detail


CRITERIA = [
    (1, "read-write golden term", readwrite_golden),
    (2, "three-cell sort golden term", sort3_golden),
    (3, "insertion sort program shape", insertion_shape),
    (4, "three-cell sort, exhaustive semantics", sort3_exhaustive),
    (5, "insertion sort semantics", insertion_semantics),
    (6, "typing sweep", typing_sweep),
    (7, "realizability sweep", realizability_sweep),
    (8, "lemma suites", lemma_suites),
    (9, "model axiom validity", model_axioms),
    (10, "state-logic oracle", state_logic_oracle),
]


def _record(num, title, fn):
    ok, detail = fn()
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn):
    ok, line = _record(num, title, fn)
    assert ok, line


if __name__ == "__main__":
    import sys
    results = [_record(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
