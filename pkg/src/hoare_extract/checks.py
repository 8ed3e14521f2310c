"""Property and oracle suites shared by ``hoare-extract selftest`` and the tests.

Every suite returns a CheckResult; none of them raises on a failed property.
Oracles here are deliberately naive (direct recursion, itertools truth
tables) so they do not share code paths with what they check.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from importlib import resources

from . import kernel as K
from . import stlang as st
from .extractor import check_extraction_typing, cleanup_admin, extract_typed
from .models import InsertSort, Swap3, builtin_theory, model_for, reference_sort
from .parser import load_proofs, parse_st, parse_term
from .semantics import (
    Budget, Evaluator, Interp, NatV, UNIT, check_realizes, currying_check, eval_state_formula,
)
from .statelogic import StateSequent, check_h, instantiate_haxiom
from .syntax import (
    FunApp, SAnd, SAtom, SBot, SImp, SOr, STop, Var, alpha_eq, free_vars, numeral, show, snot,
)

NEGATIVE = frozenset({"sort3_broken"})

GOLDEN = {
    "readwrite": "fun x -> ((write x * calc) * read)",
    "sort3": "((if {le(2,3)} then skip else swap[2,3]) * "
             "(if {le(2,1)} then (swap[1,2] * (if {le(2,3)} then skip else swap[2,3])) else skip))",
}


class CheckFailure(Exception):
    pass


@dataclass
class CheckResult:
    name: str
    ok: bool
    checked: int = 0
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{mark} {self.name}: {self.checked} checked in {self.seconds:.2f}s{extra}"


def _timed(name, fn, *args, **kw) -> CheckResult:
    t0 = time.perf_counter()
    res = fn(*args, **kw)
    res.name = res.name or name
    res.seconds = time.perf_counter() - t0
    return res


# ------------------------------------------------------------------ corpus


def corpus_names(include_negative: bool = False) -> list[str]:
    root = resources.files("hoare_extract").joinpath("corpus")
    names = sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".slp"))
    return [n for n in names if include_negative or n not in NEGATIVE]


def corpus_entries(include_negative: bool = False):
    """(file name, ProofFile, ProofEntry) for every proof in the shipped corpus."""
    for name in corpus_names(include_negative):
        pf = load_proofs(name)
        for entry in pf.proofs.values():
            yield name, pf, entry


def check_entry(pf, entry) -> K.SSequent:
    """Kernel-check one proof and compare with its declared conclusion."""
    seq = K.check(entry.derivation, pf.theory, entry.ctx)
    if entry.expect is not None and not alpha_eq(entry.expect, seq.triple):
        raise CheckFailure(
            f"{entry.name}: concluded {show(seq.triple)}, declared {show(entry.expect)}")
    return seq


def display_term(pf, entry, cleanup=True, simplify=True):
    """Extracted term after the optional display transformations."""
    term, tr, tctx = extract_typed(entry.derivation, pf.theory, entry.ctx)
    if cleanup:
        term = cleanup_admin(term)
    if simplify:
        term = st.simplify_units(term, tctx, pf.theory)
    return term


def golden_extraction() -> CheckResult:
    """The shipped read-write and three-cell proofs extract to their known terms."""
    n, bad = 0, []
    for name, text in GOLDEN.items():
        pf = load_proofs(name)
        entry = pf.proofs[name]
        want = parse_st(text, pf.theory)
        got = display_term(pf, entry)
        n += 1
        if not st.alpha_eq_st(got, want):
            bad.append(f"{name}: {st.show_st(got)}")
    return CheckResult("golden extraction", not bad, n, "; ".join(bad), failures=bad)


def insertion_sort_shape(term) -> bool:
    """rec(skip, ...) containing the controlled loop over comp(z) whose step
    swaps at the counter and whose exits are skip, up to administrative
    redexes."""
    if not isinstance(term, st.Rec) or not isinstance(term.base, st.Skip):
        return False
    loops = [w for w in _subterms(term.step) if isinstance(w, st.While)]
    if len(loops) != 1:
        return False
    w = loops[0]
    if not (isinstance(w.cond, SAtom) and w.cond.pred == "comp"
            and w.cond.args == (Var(w.hole),)):
        return False

    def body(f, depth):
        for _ in range(depth):
            if not isinstance(f, st.Lam):
                return None
            f = f.body
        return f

    step, stop, exit_ = body(w.r, 2), body(w.s, 2), body(w.t, 1)
    is_swap = (isinstance(step, st.App) and isinstance(step.fn, st.Const)
               and step.fn.name == "swap" and step.arg == st.Var(w.r.var))
    return is_swap and isinstance(stop, st.Skip) and isinstance(exit_, st.Skip)


def _subterms(t):
    yield t
    for v in getattr(t, "__dict__", {}).values():
        if hasattr(v, "__dataclass_fields__") and type(v).__module__ == st.__name__:
            yield from _subterms(v)


def typing_sweep() -> CheckResult:
    n, bad = 0, []
    for name, pf, entry in corpus_entries(include_negative=True):
        n += 1
        try:
            check_extraction_typing(entry.derivation, pf.theory, entry.ctx)
        except Exception as e:  # any failure is a finding, not a crash
            bad.append(f"{name}/{entry.name}: {e}")
    return CheckResult("typing sweep", not bad, n, "; ".join(bad), failures=bad)


def verify_entry(pf, entry, samples: int = 100, seed: int = 0, model_name=None):
    """Bounded realizability check of a closed proof.

    Free variables of the conclusion are grounded by sampled values; proofs
    with open hypotheses are skipped (returns None).
    """
    if entry.ctx.labels():
        return None
    seq = K.check(entry.derivation, pf.theory, entry.ctx)
    term, _, _ = extract_typed(entry.derivation, pf.theory, entry.ctx)
    model = model_for(pf.theory, model_name)
    rng = random.Random(seed)
    env = {v: NatV(model.sample_d(rng)) for v in sorted(free_vars(seq.triple))}
    budget = Budget(states=samples, seed=seed)
    return check_realizes(term, seq.triple, model, budget, pf.theory, env)


def realizability_sweep(samples: int = 100, seed: int = 0) -> CheckResult:
    n, bad = 0, []
    for name, pf, entry in corpus_entries():
        v = verify_entry(pf, entry, samples, seed)
        if v is None:
            continue
        n += 1
        if v.status != "pass":
            bad.append(f"{name}/{entry.name}: {v.status} {v.counterexample or v.note}")
    for name in sorted(NEGATIVE):
        pf = load_proofs(name)
        for entry in pf.proofs.values():
            v = verify_entry(pf, entry, samples, seed)
            if v is None:
                continue
            n += 1
            if v.status != "fail" or not v.counterexample:
                bad.append(f"{name}/{entry.name}: negative fixture gave {v.status}")
    return CheckResult("realizability sweep", not bad, n, "; ".join(bad), failures=bad)


# ---------------------------------------------------------- semantic suites


def _extracted(name):
    pf = load_proofs(name)
    entry = pf.proofs[name]
    term, _, _ = extract_typed(entry.derivation, pf.theory, entry.ctx)
    return pf.theory, term


def sort3_exhaustive() -> CheckResult:
    theory, term = _extracted("sort3")
    model = Swap3()
    ev = Evaluator(model, theory)
    starts = [tuple(s) for s in itertools.product(range(3), repeat=3)]
    starts += list(itertools.permutations((1, 2, 3)))
    bad = []
    for s in starts:
        _, out = ev.eval({}, term, s)
        if list(out) != sorted(s):
            bad.append(f"{list(s)} -> {list(out)}")
    return CheckResult("three-cell sort, exhaustive", not bad, len(starts),
                       "; ".join(bad[:5]), failures=bad)


def insertion_sort_semantics(M: int = 16, Ns=range(8), per_n: int = 200, seed: int = 0) -> CheckResult:
    theory, term = _extracted("insertion_sort")
    model = InsertSort(M)
    ev = Evaluator(model, theory)
    prog, _ = ev.eval({}, term, model.default_state())
    rng = random.Random(seed)
    n, bad = 0, []
    for N in Ns:
        for _ in range(per_n):
            cells = tuple(rng.randrange(0, 10) for _ in range(M))
            _, out = ev.apply(prog, NatV(N), cells)
            n += 1
            k = N + 1
            ok = (all(out[i] <= out[i + 1] for i in range(k - 1))
                  and out[k:] == cells[k:]
                  and tuple(out) == reference_sort(cells, N))
            if not ok:
                bad.append(f"N={N} {list(cells)} -> {list(out)}")
    return CheckResult("insertion sort semantics", not bad, n, "; ".join(bad[:3]), failures=bad)


# ------------------------------------------------------------ random terms


MODEL_THEORIES = {
    "query_solve": "readwrite",
    "swap3": "sort3",
    "insertion_sort": "insertion_sort",
    "pure": "arith",
}


def model_and_theory(model_name: str):
    pf = load_proofs(MODEL_THEORIES[model_name])
    return model_for(pf.theory, model_name), pf.theory


def _effects(model_name, theory, d_term):
    """Program-constant applications with state effects, typed C."""
    match model_name:
        case "query_solve":
            return [lambda r: st.App(st.Const("write", ()), d_term(r)),
                    lambda r: st.Const("calc", ()),
                    lambda r: st.P1(st.Const("read", ()))]
        case "swap3":
            locs = [parse_term(str(i), theory) for i in (1, 2, 3)]
            return [lambda r: st.Const("swap", (r.choice(locs), r.choice(locs)))]
        case "insertion_sort":
            return [lambda r: st.App(st.Const("swap", ()), d_term(r))]
    return []


def _state_atom(theory, model, rng, env_d=()):
    preds = sorted(theory.signature.state_symbols().items())
    p, n = rng.choice(preds)
    args = []
    for _ in range(n):
        if env_d and rng.random() < 0.3:
            args.append(Var(rng.choice(env_d)))
        else:
            args.append(_model_numeral(theory, model.sample_d(rng)))
    return SAtom(p, tuple(args))


def _model_numeral(theory, k):
    if theory.mode == "sa":
        return numeral(k)
    return parse_term(str(k), theory) if str(k) in theory.signature.funcs else numeral(k)


def random_state_formula(theory, model, rng, depth=2, env_d=()):
    if depth == 0 or rng.random() < 0.35:
        r = rng.random()
        if r < 0.08:
            return STop()
        if r < 0.12:
            return SBot()
        return _state_atom(theory, model, rng, env_d)
    op = rng.choice((SAnd, SOr, SImp, "not"))
    if op == "not":
        return snot(random_state_formula(theory, model, rng, depth - 1, env_d))
    return op(random_state_formula(theory, model, rng, depth - 1, env_d),
              random_state_formula(theory, model, rng, depth - 1, env_d))


class TermGen:
    """Random well-typed ST terms over D and C with program constants."""

    def __init__(self, model_name, model, theory, rng):
        self.model_name, self.model, self.theory, self.rng = model_name, model, theory, rng
        self.effects = _effects(model_name, theory, lambda r: self.d(1, ()))

    def d(self, depth, dvars):
        r = self.rng.random()
        if dvars and r < 0.4:
            return st.Var(self.rng.choice(dvars))
        if depth <= 0 or r < 0.7:
            return st.term_to_st(_model_numeral(self.theory, self.model.sample_d(self.rng)))
        if r < 0.85:
            return st.App(st.Fun("succ"), self.d(depth - 1, dvars))
        return st.P0(st.Comp(self.d(depth - 1, dvars), self.c(depth - 1, dvars, ())))

    def c(self, depth, dvars, cvars):
        r = self.rng.random()
        if cvars and r < 0.2:
            return st.Var(self.rng.choice(cvars))
        if depth <= 0 or r < 0.45:
            if self.effects and self.rng.random() < 0.7:
                return self.rng.choice(self.effects)(self.rng)
            return st.SKIP
        if r < 0.75:
            return st.star(self.c(depth - 1, dvars, cvars), self.c(depth - 1, dvars, cvars))
        cond = random_state_formula(self.theory, self.model, self.rng, 1, dvars)
        return st.Ite(cond, self.c(depth - 1, dvars, cvars), self.c(depth - 1, dvars, cvars))

    def of(self, ty, depth, dvars, cvars):
        return self.d(depth, dvars) if ty == st.D else self.c(depth, dvars, cvars)


def _states(model, rng, count):
    ex = model.exhaustive_states()
    if ex is not None:
        return [rng.choice(ex) for _ in range(count)]
    return model.sample_states(rng, count)


MODEL_NAMES = ("query_solve", "swap3", "insertion_sort", "pure")


def currying_suite(per_model: int = 50, seed: int = 0) -> CheckResult:
    n, bad = 0, []
    for mi, name in enumerate(MODEL_NAMES):
        model, theory = model_and_theory(name)
        rng = random.Random(seed * 1000 + mi)
        gen = TermGen(name, model, theory, rng)
        for _ in range(per_model):
            tx, ty = rng.choice((st.D, st.C)), rng.choice((st.D, st.C))
            dvars = tuple(v for v, t in (("x", tx), ("y", ty)) if t == st.D)
            cvars = tuple(v for v, t in (("x", tx), ("y", ty)) if t == st.C)
            body = st.Comp(gen.of(rng.choice((st.D, st.C)), 2, dvars, cvars),
                           gen.c(2, dvars, cvars))
            s = st.Comp(gen.of(tx, 2, (), ()), gen.of(ty, 2, (), ()))
            n += 1
            v = currying_check(body, "x", "y", s, model, _states(model, rng, 4), theory)
            if not v.ok:
                bad.append(f"{name}: {st.show_st(body)} on {st.show_st(s)}: {v.counterexample}")
    return CheckResult("currying", not bad, n, "; ".join(bad[:2]), failures=bad)


def _oracle_term(t, model, theory):
    """Independent evaluation of a first-order term: plain recursion over the model."""
    match t:
        case FunApp("0", ()):
            return 0
        case FunApp("succ", (a,)):
            return _oracle_term(a, model, theory) + 1
        case FunApp(f, args):
            vals = tuple(_oracle_term(a, model, theory) for a in args)
            return model.interp_fun(f, vals)
    raise TypeError(t)


def _random_fo_term(theory, model, rng, depth):
    funcs = [(f, n) for f, n in sorted(theory.signature.funcs.items())
             if not any(de.lhs.symbol == f for de in theory.defeqs.values())]
    if depth == 0 or rng.random() < 0.3:
        nullary = [f for f, n in funcs if n == 0]
        if nullary and rng.random() < 0.5:
            return FunApp(rng.choice(nullary), ())
        return numeral(rng.randrange(0, 4))
    r = rng.random()
    unary = [(f, n) for f, n in funcs if n > 0]
    if unary and r < 0.6:
        f, n = rng.choice(unary)
        return FunApp(f, tuple(_random_fo_term(theory, model, rng, depth - 1) for _ in range(n)))
    return FunApp("succ", (_random_fo_term(theory, model, rng, depth - 1),))


def purity_suite(count: int = 200, seed: int = 0) -> CheckResult:
    """First-order terms evaluate to their interpretation and leave the state alone."""
    n, bad = 0, []
    rng = random.Random(seed)
    loaded = {m: model_and_theory(m) for m in MODEL_NAMES}
    extra = load_proofs("pl_basics").theory
    loaded["pure/pl"] = (model_for(extra, "pure"), extra)
    keys = sorted(loaded)
    for i in range(count):
        key = keys[i % len(keys)]
        model, theory = loaded[key]
        t = _random_fo_term(theory, model, rng, 3)
        state = _states(model, rng, 1)[0]
        before = model.serialize(state)
        ev = Evaluator(model, theory)
        v, out = ev.eval({}, st.term_to_st(t), state)
        n += 1
        want = _oracle_term(t, model, theory)
        if v != NatV(want) or model.serialize(out) != before or out != state:
            bad.append(f"{key}: {t} gave {v} with state {model.serialize(out)}")
    return CheckResult("first-order purity", not bad, n, "; ".join(bad[:2]), failures=bad)


def chi_suite(count: int = 100, seed: int = 0) -> CheckResult:
    """ite α s t behaves as s where α holds and as t elsewhere."""
    n, bad = 0, []
    rng = random.Random(seed)
    for i in range(count):
        name = MODEL_NAMES[i % len(MODEL_NAMES)]
        model, theory = model_and_theory(name)
        gen = TermGen(name, model, theory, rng)
        cond = random_state_formula(theory, model, rng, 2)
        s, t = gen.c(2, (), ()), gen.c(2, (), ())
        state = _states(model, rng, 1)[0]
        ev = Evaluator(model, theory)
        got = ev.eval({}, st.Ite(cond, s, t), state)
        holds = eval_state_formula(cond, {}, state, model, Interp(model, theory))
        want = ev.eval({}, s if holds else t, state)
        n += 1
        if got != want:
            bad.append(f"{name}: {st.show_st(st.Ite(cond, s, t))} at {model.serialize(state)}")
    return CheckResult("characteristic functions", not bad, n, "; ".join(bad[:2]), failures=bad)


# ---------------------------------------------------------- model axioms


def _sample_binding(mvs, domain, model, rng, theory):
    out = {}
    for m in mvs:
        dom = domain(m)
        out[m] = rng.choice(list(dom)) if dom is not None else _model_numeral(theory, model.sample_d(rng))
    return out


def haxiom_validity(states: int = 1000, seed: int = 0) -> CheckResult:
    """Every state-axiom instance holds at sampled states of its model."""
    n, bad, live = 0, [], 0
    for mi, name in enumerate(("query_solve", "swap3", "insertion_sort")):
        model, theory = model_and_theory(name)
        interp = Interp(model, theory)
        rng = random.Random(seed * 7919 + mi)
        for ax in theory.hschemas:
            for i in range(states):
                b = _sample_binding(ax.metavars, ax.domain, model, rng, theory)
                inst = instantiate_haxiom(ax, b)
                prem = STop()
                for h in inst.hyps:
                    prem = SAnd(prem, h)
                # half the states are shaped to satisfy the premises
                hint = (prem, {}) if i % 2 == 0 else None
                state = model.sample_states(rng, 1, hint)[0]
                n += 1
                if all(eval_state_formula(h, {}, state, model, interp) for h in inst.hyps):
                    live += 1
                if not eval_state_formula(inst.as_formula(), {}, state, model, interp):
                    bad.append(f"{name}/{ax.name} {inst} at {model.serialize(state)}")
    return CheckResult("state axioms hold", not bad, n,
                       f"{live} with premises true" + ("; " + "; ".join(bad[:2]) if bad else ""),
                       failures=bad)


def _random_fmeta(fm, theory, model, rng):
    if fm.kind == "conj":
        atoms = [SAtom(fm.pred, args) for args in itertools.product(fm.domain, repeat=2)]
        picked = rng.sample(atoms, rng.randrange(1, 4))
        out = picked[0]
        for a in picked[1:]:
            out = SAnd(out, a)
        return out
    # arbitrary formula: literals true at some state of the model, so the
    # instance is never vacuous
    s0 = model.sample_states(rng, 1)[0]
    interp = Interp(model, theory)
    lits = []
    for _ in range(8):
        a = _state_atom(theory, model, rng)
        lits.append(a if eval_state_formula(a, {}, s0, model, interp) else snot(a))
    picked = rng.sample(lits, rng.randrange(0, 3))
    if not picked:
        return STop()
    out = picked[0]
    for a in picked[1:]:
        out = SAnd(out, a)
    return out


def saxiom_validity(per_schema: int = 100, seed: int = 0, states: int = 20) -> CheckResult:
    """Every action axiom's realizer realizes sampled instances of the axiom."""
    n, bad, skipped = 0, [], 0
    for mi, name in enumerate(("query_solve", "swap3", "insertion_sort")):
        model, theory = model_and_theory(name)
        rng = random.Random(seed * 104729 + mi)
        for sch in theory.sschemas.values():
            for i in range(per_schema):
                b = _sample_binding(sch.metavars, sch.domain, model, rng, theory)
                for fm in sch.fmetas:
                    b[fm.name] = _random_fmeta(fm, theory, model, rng)
                tr = sch.instantiate(b)
                real = sch.instantiate_realizer(b)
                v = check_realizes(real, tr, model, Budget(states=states, seed=seed + i), theory)
                n += 1
                if v.status != "pass":
                    bad.append(f"{name}/{sch.name} {show(tr)}: {v.status} "
                               f"{v.counterexample or v.note}")
    return CheckResult("action axioms realized", not bad, n, "; ".join(bad[:2]), failures=bad)


def swap3_exhaustive_validity() -> CheckResult:
    """The swap axiom over every state in {0,1,2}^3, every conjunction of at
    most three le atoms, and every pair of locations."""
    theory = builtin_theory("swap3")
    model = Swap3()
    interp = Interp(model, theory)
    ev = Evaluator(model, theory)
    sch = theory.sschemas["swap"]
    fm = sch.fmetas[0]
    locs = list(fm.domain)
    atoms = [SAtom(fm.pred, a) for a in itertools.product(locs, repeat=2)]
    states = model.exhaustive_states()
    n, bad = 0, []
    for k in range(1, 4):
        for combo in itertools.combinations(atoms, k):
            alpha = combo[0]
            for a in combo[1:]:
                alpha = SAnd(alpha, a)
            for l1, l2 in itertools.product(locs, repeat=2):
                b = {"l": l1, "l'": l2, fm.name: alpha}
                tr = sch.instantiate(b)
                real = sch.instantiate_realizer(b)
                for s in states:
                    if not eval_state_formula(tr.pre, {}, s, model, interp):
                        continue
                    v, out = ev.eval({}, real, s)
                    n += 1
                    if v != UNIT or not eval_state_formula(tr.post, {}, out, model, interp):
                        bad.append(f"{show(tr)} at {list(s)} -> {list(out)}")
    return CheckResult("swap axiom, exhaustive", not bad, n, "; ".join(bad[:2]), failures=bad)


# ------------------------------------------------------ state-logic oracle


_PROP_ATOMS = tuple(SAtom(f"p{i}", ()) for i in range(6))


def _random_prop(rng, atoms, depth):
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.05:
            return STop()
        if r < 0.1:
            return SBot()
        return rng.choice(atoms)
    op = rng.choice((SAnd, SOr, SImp))
    return op(_random_prop(rng, atoms, depth - 1), _random_prop(rng, atoms, depth - 1))


def _brute(f, val):
    match f:
        case STop():
            return True
        case SBot():
            return False
        case SAtom():
            return val[f]
        case SAnd(l, r):
            return _brute(l, val) and _brute(r, val)
        case SOr(l, r):
            return _brute(l, val) or _brute(r, val)
        case SImp(l, r):
            return (not _brute(l, val)) or _brute(r, val)
    raise TypeError(f)


def brute_entails(hyps, goal, atoms) -> bool:
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = dict(zip(atoms, bits))
        if all(_brute(h, val) for h in hyps) and not _brute(goal, val):
            return False
    return True


def h_oracle_suite(count: int = 500, excluded_middle: int = 100, seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    n, bad, valid = 0, [], 0
    for _ in range(count):
        k = rng.randrange(1, 7)
        atoms = _PROP_ATOMS[:k]
        hyps = tuple(_random_prop(rng, atoms, 3) for _ in range(rng.randrange(0, 3)))
        goal = _random_prop(rng, atoms, 3)
        seq = StateSequent(hyps, goal)
        want = brute_entails(hyps, goal, atoms)
        valid += want
        n += 1
        if check_h(seq) != want:
            bad.append(str(seq))
    for _ in range(excluded_middle):
        a = _random_prop(rng, _PROP_ATOMS, 3)
        n += 1
        if not check_h(StateSequent((), SOr(a, snot(a)))):
            bad.append(f"excluded middle for {a}")
    return CheckResult("state-logic oracle", not bad, n,
                       f"{valid} of {count} random sequents valid"
                       + ("; " + "; ".join(bad[:2]) if bad else ""), failures=bad)


# --------------------------------------------------------------- running


def all_suites(quick: bool = False):
    """(name, thunk) pairs in a fixed order."""
    s = 0.2 if quick else 1.0
    return [
        ("corpus check", corpus_check),
        ("golden extraction", golden_extraction),
        ("typing sweep", typing_sweep),
        ("realizability sweep", lambda: realizability_sweep(max(20, int(100 * s)))),
        ("three-cell sort", sort3_exhaustive),
        ("insertion sort", lambda: insertion_sort_semantics(per_n=max(20, int(200 * s)))),
        ("currying", lambda: currying_suite(max(10, int(50 * s)))),
        ("purity", lambda: purity_suite(max(40, int(200 * s)))),
        ("characteristic functions", lambda: chi_suite(max(20, int(100 * s)))),
        ("state axioms", lambda: haxiom_validity(max(100, int(1000 * s)))),
        ("action axioms", lambda: saxiom_validity(max(10, int(100 * s)))),
        ("swap axiom", swap3_exhaustive_validity),
        ("state logic", lambda: h_oracle_suite(max(100, int(500 * s)), max(20, int(100 * s)))),
    ]


def corpus_check() -> CheckResult:
    n, bad = 0, []
    for name, pf, entry in corpus_entries(include_negative=True):
        n += 1
        try:
            check_entry(pf, entry)
        except Exception as e:
            bad.append(f"{name}/{entry.name}: {e}")
    return CheckResult("corpus check", not bad, n, "; ".join(bad), failures=bad)


def run_all(quick: bool = False) -> list[CheckResult]:
    return [_timed(name, fn) for name, fn in all_suites(quick)]


__all__ = [
    "CheckResult", "GOLDEN", "NEGATIVE", "all_suites", "check_entry", "corpus_entries",
    "corpus_names", "display_term", "run_all", "verify_entry",
]
