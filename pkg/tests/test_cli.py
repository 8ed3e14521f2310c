import io
import json
import subprocess
import sys

import pytest

from hoare_extract import stlang as st
from hoare_extract.checks import GOLDEN
from hoare_extract.cli import main
from hoare_extract.models import reference_sort
from hoare_extract.parser import load_theory, parse_st, parse_state_formula, parse_term


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


# check

def test_check_readwrite():
    code, out = cli("check", "examples/readwrite")
    assert code == 0
    assert out.strip() == "⊢_S ⟨β⟩∀x⟨α⟩∃y P(x,y)⟨⊤⟩⟨β⟩ ok"


def test_check_insertion_sort():
    code, out = cli("check", "insertion_sort")
    assert code == 0
    assert out.strip().endswith("ok")


def test_check_ascii_and_json():
    code, out = cli("check", "readwrite", "--ascii")
    assert code == 0 and "⟨" not in out
    code, out = cli("check", "sort3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and all(p["ok"] for p in data["proofs"])
    assert [p["proof"] for p in data["proofs"]][-1] == "sort3"


def test_check_multiple_proofs_are_named():
    code, out = cli("check", "sort3")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4
    assert lines[-1].startswith("sort3: ")


CORRUPT = """(theory "readwrite.slt")
(proof readwrite
  (forall_I x
    (and_ER (and_I (sax store x a="α") (sax read x)))
    "β"))
"""


def test_check_corrupted_mid_state(tmp_path, capsys):
    f = tmp_path / "rw.slp"
    f.write_text(CORRUPT, encoding="utf-8")
    code, _ = cli("check", str(f))
    err = capsys.readouterr().err
    assert code == 1
    assert "AndI" in err and "mid-state" in err
    assert "rw.slp:4:" in err


# extract

def test_extract_readwrite_golden():
    code, out = cli("extract", "examples/readwrite", "--cleanup-admin")
    assert code == 0
    assert out.strip() == GOLDEN["readwrite"]


def test_extract_sort3_golden():
    code, out = cli("extract", "sort3", "--proof", "sort3",
                    "--cleanup-admin", "--simplify-units")
    assert code == 0 and out.strip() == GOLDEN["sort3"]


def test_extract_json_round_trips():
    th = load_theory("readwrite.slt")
    code, out = cli("extract", "readwrite", "--format", "json")
    item = json.loads(out)["proofs"][0]
    term = st.from_json(item["term"], lambda s: parse_state_formula(s, th),
                        lambda s: parse_term(s, th))
    assert st.to_json(term) == item["term"]
    assert st.alpha_eq_st(parse_st(item["text"], th), term)


def test_extract_with_type():
    code, out = cli("extract", "readwrite", "--cleanup-admin", "--simplify-units", "--type")
    assert code == 0
    assert out.strip() == "fun x -> ((write x * calc) * read) : D -> D"


# run

def test_run_sort3():
    code, out = cli("run", "sort3", "--state", "[3,1,2]")
    assert code == 0 and json.loads(out)["state"] == [1, 2, 3]


def test_run_insertion_sort():
    cells = [5, 3, 4, 1, 2, 0, 9, 8]
    code, out = cli("run", "insertion_sort", "--args", "4", "--state", json.dumps(cells))
    state = json.loads(out)["state"]
    padded = tuple(cells + [0] * (16 - len(cells)))
    assert code == 0 and tuple(state) == reference_sort(padded, 4)


def test_run_readwrite_with_trace():
    code, out = cli("run", "readwrite", "--args", "7", "--state", "{}", "--trace")
    data = json.loads(out)
    assert code == 0 and data["value"] == 8
    assert [t["constant"] for t in data["trace"]] == ["write", "calc", "read"]


@pytest.mark.parametrize("argv", [
    ("run", "readwrite", "--args", "1", "2"),
    ("run", "readwrite"),
    ("run", "readwrite", "--args", "x"),
    ("run", "readwrite", "--args", "1", "--state", "{bad"),
    ("run", "readwrite", "--args", "1", "--state", "[1]"),
    ("run", "readwrite", "--proof", "nope"),
    ("run", "no_such_file"),
    ("frobnicate",),
])
def test_usage_errors(argv):
    assert cli(*argv)[0] == 2


def test_parse_error_exits_2(tmp_path, capsys):
    f = tmp_path / "x.slp"
    f.write_text('(theory "readwrite.slt")\n(proof p (frob))\n', encoding="utf-8")
    assert cli("check", str(f))[0] == 2
    assert "x.slp:2:" in capsys.readouterr().err


# verify

def test_verify_sort3_exhaustive():
    code, out = cli("verify", "sort3", "--samples", "27")
    data = json.loads(out)
    assert code == 0 and data["exhaustive"]
    assert all(p["status"] == "pass" for p in data["proofs"])


def test_verify_insertion_sort():
    code, out = cli("verify", "insertion_sort", "--samples", "200", "--seed", "1")
    assert code == 0


def test_verify_negative_fixture(capsys):
    code, out = cli("verify", "sort3_broken")
    data = json.loads(out)
    assert code == 1
    bad = [p for p in data["proofs"] if p["status"] == "fail"]
    assert bad and all("counterexample" in p for p in bad)
    assert "counterexample" in capsys.readouterr().err


def test_verify_is_deterministic():
    a = cli("verify", "arith", "--samples", "30", "--seed", "4")
    b = cli("verify", "arith", "--samples", "30", "--seed", "4")
    assert a == b


def test_verify_jobs_same_output():
    assert cli("verify", "pl_basics", "--samples", "20") == \
        cli("verify", "pl_basics", "--samples", "20", "--jobs", "4")


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("HOARE_EXTRACT_SEED", "9")
    code, out = cli("verify", "readwrite", "--samples", "10")
    assert code == 0 and json.loads(out)["seed"] == 9
    monkeypatch.setenv("HOARE_EXTRACT_SEED", "nine")
    assert cli("verify", "readwrite")[0] == 2


# selftest and the installed script

def test_selftest_quick():
    code, out = cli("selftest", "--quick")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("suites passed")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hoare_extract.cli", "check", "readwrite"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.endswith("ok\n")
