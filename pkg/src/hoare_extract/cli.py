"""Command-line front end: hoare-extract {check|extract|run|verify|selftest}.

Exit codes: 0 success, 1 a check or verification failed, 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import kernel as K
from . import stlang as st
from .checks import CheckFailure, check_entry, run_all, verify_entry
from .extractor import (
    ExtractError, cleanup_admin, extract_typed, free_var_ground, real_type,
)
from .models import ModelError, model_for
from .parser import Diagnostic, ParseError, load_proofs
from .semantics import EvalError, evaluate, value_to_json
from .stlang import Arrow, D, C

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("HOARE_EXTRACT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"HOARE_EXTRACT_SEED must be an integer, got {raw!r}") from None


def _load(path):
    try:
        return load_proofs(path)
    except FileNotFoundError:
        raise UsageError(f"no such proof file: {path}") from None


def _select(pf, name):
    if name is None:
        return list(pf.proofs.values())
    if name not in pf.proofs:
        raise UsageError(f"no proof named {name!r}; have {', '.join(pf.proofs)}")
    return [pf.proofs[name]]


def main_proof(pf):
    """The proof named after its file, else the last one."""
    stem = Path(pf.filename or "").stem
    if stem in pf.proofs:
        return pf.proofs[stem]
    if not pf.proofs:
        raise UsageError("file contains no proofs")
    return list(pf.proofs.values())[-1]


def _diag(pf, e: Exception, entry=None) -> Diagnostic:
    node = getattr(e, "node", None)
    span = pf.span_of(node) or (entry.span if entry is not None else None)
    msg = str(e)
    if node is not None:
        msg = f"{type(node).__name__}: {msg}"
    if entry is not None:
        msg = f"in proof {entry.name}: {msg}"
    seq = getattr(e, "sequent", None)
    return Diagnostic("error", msg, span, str(seq) if seq is not None else None, pf.filename)


def _map(jobs, fn, items):
    if jobs and jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ------------------------------------------------------------------- check


def cmd_check(args, out) -> int:
    status = OK
    for path in args.files:
        pf = _load(path)
        entries = _select(pf, args.proof)
        multi = len(entries) > 1

        def one(entry):
            try:
                return entry, check_entry(pf, entry), None
            except (K.KernelError, CheckFailure, ExtractError) as e:
                return entry, None, _diag(pf, e, entry)

        results = _map(args.jobs, one, entries)
        report = []
        for entry, seq, diag in results:
            if diag is not None:
                status = FAILED
                print(diag, file=sys.stderr)
                report.append({"proof": entry.name, "ok": False, "error": diag.message})
                continue
            text = seq.show(unicode=not args.ascii)
            report.append({"proof": entry.name, "ok": True, "sequent": seq.show(unicode=False)})
            if args.format == "text":
                print(f"{entry.name}: {text} ok" if multi else f"{text} ok", file=out)
        if args.format == "json":
            print(json.dumps({"file": path, "proofs": report}, ensure_ascii=False, indent=2),
                  file=out)
    return status


# ----------------------------------------------------------------- extract


def _display(pf, entry, cleanup: bool, simplify: bool):
    term, tr, tctx = extract_typed(entry.derivation, pf.theory, entry.ctx)
    ty = real_type(tr.body)
    if cleanup:
        term = cleanup_admin(term)
    if simplify:
        term = st.simplify_units(term, tctx, pf.theory)
        ty = st.simplify_type(ty)
    return term, ty


def cmd_extract(args, out) -> int:
    status = OK
    for path in args.files:
        pf = _load(path)
        entries = _select(pf, args.proof)
        multi = len(entries) > 1
        items = []
        for entry in entries:
            try:
                term, ty = _display(pf, entry, args.cleanup_admin, args.simplify_units)
            except (K.KernelError, ExtractError, st.StTypeError) as e:
                print(_diag(pf, e, entry), file=sys.stderr)
                status = FAILED
                continue
            text = st.show_st(term, unicode=args.unicode)
            if args.format == "json":
                items.append({"proof": entry.name, "term": st.to_json(term),
                              "text": st.show_st(term), "type": st.type_to_json(ty)})
            elif args.type:
                lead = f"{entry.name}: " if multi else ""
                print(f"{lead}{text} : {st.show_type(ty, args.unicode)}", file=out)
            else:
                print(f"{entry.name}: {text}" if multi else text, file=out)
        if args.format == "json":
            print(json.dumps({"file": path, "proofs": items}, ensure_ascii=False, indent=2),
                  file=out)
    return status


# --------------------------------------------------------------------- run


def _apply_args(term, ty, nats):
    """Apply the run arguments along the leading arrows of the term's type;
    C-typed hypotheses get the unit realizer."""
    todo = list(nats)
    while isinstance(ty, Arrow):
        if ty.dom == D:
            if not todo:
                break
            term = st.App(term, st.term_to_st(_numeral(todo.pop(0))))
        elif ty.dom == C:
            term = st.App(term, st.SKIP)
        else:
            raise UsageError(f"cannot supply an argument of type {st.show_type(ty.dom)}")
        ty = ty.cod
    if todo:
        raise UsageError(f"too many arguments: {len(nats) - len(todo)} accepted, "
                         f"{len(nats)} given")
    if isinstance(ty, Arrow) and ty.dom == D:
        raise UsageError(f"missing arguments: result still has type {st.show_type(ty)}")
    return term, ty


def _numeral(k):
    from .syntax import numeral
    return numeral(k)


def cmd_run(args, out) -> int:
    pf = _load(args.file)
    entry = _select(pf, args.proof)[0] if args.proof else main_proof(pf)
    if entry.ctx.labels():
        raise UsageError(f"proof {entry.name} has open hypotheses and cannot be run")
    try:
        term, tr, tctx = extract_typed(entry.derivation, pf.theory, entry.ctx)
    except (K.KernelError, ExtractError) as e:
        print(_diag(pf, e, entry), file=sys.stderr)
        return FAILED
    term = free_var_ground(term, pf.theory)
    term, _ = _apply_args(term, real_type(tr.body), args.args)
    try:
        model = model_for(pf.theory, args.model)
        state = model.default_state() if args.state is None else \
            model.parse_state(json.loads(args.state))
    except json.JSONDecodeError as e:
        raise UsageError(f"--state is not valid JSON: {e}") from None
    except (ModelError, ValueError, TypeError) as e:
        raise UsageError(f"bad state: {e}") from None
    try:
        v, s, trace = evaluate(term, state, model, pf.theory, trace=args.trace)
    except EvalError as e:
        raise UsageError(f"evaluation failed: {e}") from None
    report = {"value": value_to_json(v, erase_units=True), "state": model.serialize(s)}
    if args.trace:
        report["trace"] = [{"constant": t.constant, "args": t.args,
                            "before": t.before, "after": t.after} for t in trace]
    print(json.dumps(report, ensure_ascii=False), file=out)
    return OK


# ------------------------------------------------------------------ verify


def cmd_verify(args, out) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    pf = _load(args.file)
    entries = _select(pf, args.proof)
    try:
        model = model_for(pf.theory, args.model)
    except ModelError as e:
        raise UsageError(str(e)) from None
    exhaustive = model.exhaustive_states() is not None

    def one(entry):
        try:
            return entry, verify_entry(pf, entry, args.samples, seed, args.model), None
        except (K.KernelError, ExtractError) as e:
            return entry, None, _diag(pf, e, entry)

    results = _map(args.jobs, one, entries)
    report = {"file": args.file, "model": type(model).__name__, "seed": seed,
              "samples": args.samples, "exhaustive": exhaustive, "proofs": []}
    status = OK
    for entry, verdict, diag in results:
        if diag is not None:
            status = FAILED
            report["proofs"].append({"proof": entry.name, "status": "error",
                                     "error": diag.message})
            print(diag, file=sys.stderr)
            continue
        if verdict is None:
            report["proofs"].append({"proof": entry.name, "status": "skipped",
                                     "note": "open hypotheses"})
            print(f"{entry.name}: skipped (open hypotheses)", file=sys.stderr)
            continue
        report["proofs"].append({"proof": entry.name, **verdict.to_json()})
        if verdict.status != "pass":
            status = FAILED
        print(_summary(entry.name, verdict), file=sys.stderr)
    print(json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True), file=out)
    return status


def _summary(name, v) -> str:
    match v.status:
        case "pass":
            return f"{name}: pass ({v.checked} of {v.sampled} states met the precondition)"
        case "inconclusive":
            return f"{name}: INCONCLUSIVE, {v.note}"
    ce = json.dumps(v.counterexample, ensure_ascii=False, sort_keys=True)
    return f"{name}: FAIL, counterexample {ce}"


# ---------------------------------------------------------------- selftest


def cmd_selftest(args, out) -> int:
    results = run_all(quick=args.quick)
    for r in results:
        print(r.line(), file=out)
    bad = [r for r in results if not r.ok]
    print(f"{len(results) - len(bad)} of {len(results)} suites passed", file=out)
    return FAILED if bad else OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hoare-extract",
        description="Check Hoare-logic proofs, extract their programs, run and test them.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="kernel-check every proof in the given files")
    c.add_argument("files", nargs="+")
    c.add_argument("--proof")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--ascii", action="store_true", help="ASCII notation")
    c.add_argument("--jobs", type=int, default=1)

    e = sub.add_parser("extract", help="print the program extracted from each proof")
    e.add_argument("files", nargs="+")
    e.add_argument("--proof")
    e.add_argument("--simplify-units", action="store_true")
    e.add_argument("--cleanup-admin", action="store_true")
    e.add_argument("--format", choices=("text", "json"), default="text")
    e.add_argument("--type", action="store_true", help="also print the type")
    e.add_argument("--unicode", action="store_true")

    r = sub.add_parser("run", help="run the extracted program in its model")
    r.add_argument("file")
    r.add_argument("--proof")
    r.add_argument("--model")
    r.add_argument("--state", help="initial state as JSON")
    r.add_argument("--args", type=_nat, nargs="*", default=[])
    r.add_argument("--trace", action="store_true")

    v = sub.add_parser("verify", help="test the realizability of each proof's program")
    v.add_argument("file")
    v.add_argument("--proof")
    v.add_argument("--model")
    v.add_argument("--samples", type=_nat, default=100)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("selftest", help="run the built-in property and oracle suites")
    s.add_argument("--quick", action="store_true")
    return p


def _nat(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {n}")
    return n


COMMANDS = {"check": cmd_check, "extract": cmd_extract, "run": cmd_run,
            "verify": cmd_verify, "selftest": cmd_selftest}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return COMMANDS[args.command](args, out)
    except ParseError as e:
        print(e.diagnostic, file=sys.stderr)
        return USAGE
    except UsageError as e:
        print(f"hoare-extract: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
