"""State-monad semantics of extracted programs and bounded realizability tests.

A term denotes a function from states to (value, state) pairs.  Closures
capture environments instead of substituting, which is extensionally the
same and a lot cheaper.  States are immutable values supplied by a
``StateModel``; nothing here mutates them.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable

from . import stlang as st
from .syntax import (
    And, Atom, Bot, EQ, Exists, ForallTriple, FunApp, ImpTriple, NEQ, Or, SAnd,
    SAtom, SBot, SImp, SOr, STop, Top, Triple, Var, show_main, show_state,
)


class EvalError(Exception):
    pass


# -------------------------------------------------------------------- values


@dataclass(frozen=True)
class NatV:
    n: int


@dataclass(frozen=True)
class UnitV:
    pass


@dataclass(frozen=True)
class PairV:
    a: Any
    b: Any


@dataclass(frozen=True)
class SumV:
    """Tagged sum carrying both components; ``right`` selects the second."""
    right: bool
    left_v: Any
    right_v: Any


@dataclass(frozen=True)
class ClosureV:
    env: Any = field(compare=False)
    param: str
    body: Any


@dataclass(frozen=True)
class NativeV:
    name: str
    fn: Callable = field(compare=False)


@dataclass(frozen=True)
class ZeroV:
    """Canonical inhabitant of a type not known at evaluation time.

    Only produced for the unused component of an injection; at arrow type
    it behaves like the constant function returning itself.
    """


UNIT = UnitV()
ZERO_V = ZeroV()


def zero_value(ty, canonical: int = 0):
    """0_X: canonical inhabitant of the denotation of an extracted type."""
    match ty:
        case st.DType():
            return NatV(canonical)
        case st.CType():
            return UNIT
        case st.Prod(a, b):
            return PairV(zero_value(a, canonical), zero_value(b, canonical))
        case st.Sum(a, b):
            return SumV(False, zero_value(a, canonical), zero_value(b, canonical))
        case st.Arrow(_, b):
            out = zero_value(b, canonical)
            return NativeV(f"0[{st.show_type(ty)}]", lambda _a, pi, _ev: (out, pi))
    return ZERO_V


# --------------------------------------------------------------------- model


class StateModel(ABC):
    """What a concrete state implementation supplies."""

    name = "model"

    @abstractmethod
    def eval_state_atom(self, pred: str, args: tuple, state) -> bool: ...

    @abstractmethod
    def interp_fun(self, sym: str, args: tuple) -> int: ...

    def const_sem(self, name: str, index: tuple) -> Callable:
        """Return π ↦ (value, π') for a program constant."""
        raise EvalError(f"model {self.name} has no constant {name}")

    def eval_main_atom(self, pred: str, args: tuple) -> bool:
        raise EvalError(f"model {self.name} cannot decide {pred}")

    @abstractmethod
    def sample_states(self, rng: random.Random, count: int, hint=None) -> list: ...

    def sample_d(self, rng: random.Random) -> int:
        return rng.randrange(0, 8)

    def exhaustive_states(self):
        return None

    def default_state(self):
        """State used by ``run`` when none is given."""
        raise EvalError(f"model {self.name} needs an explicit state")

    def serialize(self, state):
        return state

    def parse_state(self, data):
        return data

    def clone(self, state):
        return state


# ------------------------------------------------------------ interpretation


class Interp:
    """First-order interpretation: numerals, defining equations, then the model."""

    def __init__(self, model: StateModel, theory=None):
        self.model = model
        self.theory = theory
        self.defeqs: dict[str, list] = {}
        if theory is not None:
            for de in theory.defeqs.values():
                if isinstance(de.lhs, FunApp):
                    self.defeqs.setdefault(de.lhs.symbol, []).append(de)
        self.canonical = 0
        if theory is not None and theory.signature.canonical is not None:
            c = theory.signature.canonical
            self.canonical = self.fun(c, ())

    def fun(self, sym: str, args: tuple) -> int:
        if sym == "0" and not args:
            return 0
        if sym == "succ" and len(args) == 1:
            return args[0] + 1
        if sym in self.defeqs:
            return self._by_equations(sym, args)
        return self.model.interp_fun(sym, args)

    def _by_equations(self, sym, args, depth=0):
        # pattern-match numeral arguments against the defining equations
        for de in self.defeqs[sym]:
            binding: dict = {}
            if all(_match_num(p, a, binding) for p, a in zip(de.lhs.args, args)):
                return self.term(de.rhs, binding)
        raise EvalError(f"no defining equation of {sym} matches {args}")

    def term(self, t, env) -> int:
        match t:
            case Var(n):
                if n not in env:
                    raise EvalError(f"unbound variable {n}")
                v = env[n]
                if isinstance(v, NatV):
                    return v.n
                return self.canonical if isinstance(v, ZeroV) else v
            case FunApp(f, args):
                return self.fun(f, tuple(self.term(a, env) for a in args))
        raise EvalError(f"not a term: {t!r}")


def _match_num(pat, n: int, binding: dict) -> bool:
    match pat:
        case Var(x):
            if x in binding:
                return binding[x] == n
            binding[x] = n
            return True
        case FunApp("0", ()):
            return n == 0
        case FunApp("succ", (p,)):
            return n > 0 and _match_num(p, n - 1, binding)
    return False


def eval_state_formula(a, env: dict, state, model: StateModel, interp: Interp | None = None) -> bool:
    interp = interp or Interp(model)
    match a:
        case STop():
            return True
        case SBot():
            return False
        case SAtom(p, args):
            return bool(model.eval_state_atom(p, tuple(interp.term(t, env) for t in args), state))
        case SAnd(l, r):
            return (eval_state_formula(l, env, state, model, interp)
                    and eval_state_formula(r, env, state, model, interp))
        case SOr(l, r):
            return (eval_state_formula(l, env, state, model, interp)
                    or eval_state_formula(r, env, state, model, interp))
        case SImp(l, r):
            return (not eval_state_formula(l, env, state, model, interp)
                    or eval_state_formula(r, env, state, model, interp))
    raise EvalError(f"not a state formula: {a!r}")


def eval_main_atom(pred: str, args: tuple, model: StateModel) -> bool:
    if pred == EQ:
        return args[0] == args[1]
    if pred == NEQ:
        return args[0] != args[1]
    return bool(model.eval_main_atom(pred, args))


# ----------------------------------------------------------------- evaluator


@dataclass
class TraceEntry:
    constant: str
    args: list
    before: Any
    after: Any


class Evaluator:
    def __init__(self, model: StateModel, theory=None, trace: bool = False):
        self.model = model
        self.theory = theory
        self.interp = Interp(model, theory)
        self.tracing = trace
        self.trace: list[TraceEntry] = []

    # --- helpers
    def _log(self, name, args, before, after):
        if self.tracing:
            self.trace.append(TraceEntry(name, args, self.model.serialize(before),
                                         self.model.serialize(after)))

    def zero(self, ty):
        return zero_value(ty, self.interp.canonical)

    def nat(self, v) -> int:
        if isinstance(v, NatV):
            return v.n
        if isinstance(v, ZeroV):
            return self.interp.canonical
        raise EvalError(f"expected a natural number, got {v!r}")

    def _cond_env(self, env, cond, extra=None):
        out = {}
        for k, v in env.items():
            if isinstance(v, (NatV, ZeroV)):
                out[k] = NatV(self.nat(v))
        if extra:
            out.update(extra)
        return out

    def holds(self, cond, env, state) -> bool:
        return eval_state_formula(cond, env, state, self.model, self.interp)

    # --- application
    def apply(self, f, a, state):
        match f:
            case ClosureV(env, x, body):
                return self.eval({**env, x: a}, body, state)
            case NativeV(_, fn):
                return fn(a, state, self)
            case ZeroV():
                return ZERO_V, state
        raise EvalError(f"cannot apply {f!r}")

    # --- terms
    def eval(self, env: dict, t, state):
        match t:
            case st.Var(n):
                if n not in env:
                    raise EvalError(f"unbound variable {n}")
                return env[n], state
            case st.Skip():
                return UNIT, state
            case st.Default(ty):
                return self.zero(ty), state
            case st.Fun(f):
                arity = self._arity(f)
                if arity == 0:
                    return NatV(self.interp.fun(f, ())), state
                return NativeV(f, self._fun_native(f, arity)), state
            case st.Const(name, index):
                idx = tuple(self.interp.term(i, env) for i in index)
                sem = self.model.const_sem(name, idx)
                v, s2 = sem(state)
                # function-valued constants are logged when applied
                if isinstance(v, NativeV):
                    v = self._traced(name, v)
                else:
                    self._log(name, list(idx), state, s2)
                return v, s2
            case st.Comp(l, r):
                a, s1 = self.eval(env, l, state)
                b, s2 = self.eval(env, r, s1)
                return PairV(a, b), s2
            case st.P0(b) | st.P1(b):
                v, s1 = self.eval(env, b, state)
                if isinstance(v, ZeroV):
                    return ZERO_V, s1
                if not isinstance(v, PairV):
                    raise EvalError(f"projection of a non-pair {v!r}")
                return (v.a if isinstance(t, st.P0) else v.b), s1
            case st.Inj0(b):
                v, s1 = self.eval(env, b, state)
                return SumV(False, v, ZERO_V), s1
            case st.Inj1(b):
                v, s1 = self.eval(env, b, state)
                return SumV(True, ZERO_V, v), s1
            case st.Elim(r, s, u):
                e, s1 = self.eval(env, r, state)
                # both branch functions are evaluated from the same state
                f, s2 = self.eval(env, s, s1)
                g, s3 = self.eval(env, u, s1)
                if isinstance(e, ZeroV):
                    e = SumV(False, ZERO_V, ZERO_V)
                if not isinstance(e, SumV):
                    raise EvalError(f"elim of a non-sum {e!r}")
                if e.right:
                    return self.apply(g, e.right_v, s3)
                return self.apply(f, e.left_v, s2)
            case st.Lam(x, body):
                return ClosureV(env, x, body), state
            case st.App(f, a):
                fv, s1 = self.eval(env, f, state)
                av, s2 = self.eval(env, a, s1)
                return self.apply(fv, av, s2)
            case st.Ite(c, a, b):
                if self.holds(c, self._cond_env(env, c), state):
                    return self.eval(env, a, state)
                return self.eval(env, b, state)
            case st.Rec(s, step):
                f, s1 = self.eval(env, step, state)
                return NativeV("rec", self._rec(env, s, f)), s1
            case st.While(c, z, r, s, tt, u):
                f, s1 = self.eval(env, r, state)
                g, s2 = self.eval(env, s, s1)
                h, s3 = self.eval(env, tt, s2)
                m, s4 = self.eval(env, u, s3)
                loop = self._loop(env, c, z, f, g, h)
                n = self.nat(m)
                return NativeV("while", lambda y, pi, _ev: loop(n, y, pi)), s4
        raise EvalError(f"cannot evaluate {t!r}")

    def _arity(self, f):
        if self.theory is not None and f in self.theory.signature.funcs:
            return self.theory.signature.funcs[f]
        return {"0": 0, "succ": 1}.get(f, 0)

    def _fun_native(self, f, arity):
        def fn(packed, state, ev):
            args = []
            cur = packed
            for _ in range(arity - 1):
                if not isinstance(cur, PairV):
                    raise EvalError(f"{f} expects {arity} arguments")
                args.append(ev.nat(cur.a))
                cur = cur.b
            args.append(ev.nat(cur))
            return NatV(ev.interp.fun(f, tuple(args))), state
        return fn

    def _traced(self, name, v: NativeV) -> NativeV:
        def fn(a, state, ev):
            out, s2 = v.fn(a, state, ev)
            ev._log(name, [value_to_json(a)], state, s2)
            if isinstance(out, NativeV) and out.name == v.name:
                out = ev._traced(name, out)
            return out, s2
        return NativeV(v.name, fn)

    def _rec(self, env, base, f):
        def run(n_val, state, ev):
            n = ev.nat(n_val)
            a, pi = ev.eval(env, base, state)
            for k in range(n):
                g, pi = ev.apply(f, NatV(k), pi)
                a, pi = ev.apply(g, a, pi)
            return a, pi
        return run

    def _loop(self, env, cond, hole, f, g, h):
        base = self._cond_env(env, cond)

        def run(n, y, pi):
            while n > 0:
                cenv = {**base, hole: NatV(n)}
                if self.holds(cond, cenv, pi):
                    a, pi = self.apply(f, NatV(n - 1), pi)
                    y, pi = self.apply(a, y, pi)
                    n -= 1
                else:
                    b, pi = self.apply(g, NatV(n - 1), pi)
                    return self.apply(b, y, pi)
            return self.apply(h, y, pi)
        return run


def evaluate(t, state, model: StateModel, theory=None, env: dict | None = None, trace=False):
    ev = Evaluator(model, theory, trace)
    v, s = ev.eval(dict(env or {}), t, state)
    return v, s, ev.trace


# -------------------------------------------------------- value comparisons


def value_to_json(v, erase_units: bool = False):
    match v:
        case NatV(n):
            return n
        case UnitV():
            return None if erase_units else "()"
        case PairV(a, b):
            if erase_units:
                if isinstance(a, UnitV):
                    return value_to_json(b, True)
                if isinstance(b, UnitV):
                    return value_to_json(a, True)
            return [value_to_json(a, erase_units), value_to_json(b, erase_units)]
        case SumV(right, l, r):
            return {"tag": "inr" if right else "inl",
                    "value": value_to_json(r if right else l, erase_units)}
        case ClosureV() | NativeV():
            return "<fun>"
        case ZeroV():
            return "<default>"
    raise EvalError(f"not a value: {v!r}")


def values_equal(a, b, ev: Evaluator, probes=(), states=(), depth: int = 2) -> bool:
    """Structural equality; functions are compared on sample arguments and states."""
    if isinstance(a, (ClosureV, NativeV, ZeroV)) or isinstance(b, (ClosureV, NativeV, ZeroV)):
        if isinstance(a, ZeroV) and isinstance(b, ZeroV):
            return True
        if depth == 0:
            return True
        for x in probes:
            for pi in states:
                try:
                    ra, sa = ev.apply(a, x, pi)
                    rb, sb = ev.apply(b, x, pi)
                except EvalError:
                    return False
                if sa != sb or not values_equal(ra, rb, ev, probes, states, depth - 1):
                    return False
        return True
    match a, b:
        case PairV(a1, a2), PairV(b1, b2):
            return (values_equal(a1, b1, ev, probes, states, depth)
                    and values_equal(a2, b2, ev, probes, states, depth))
        case SumV(f1, l1, r1), SumV(f2, l2, r2):
            if f1 != f2:
                return False
            return values_equal(r1 if f1 else l1, r2 if f2 else l2, ev, probes, states, depth)
    return a == b


# ------------------------------------------------------------- realizability


@dataclass
class Budget:
    states: int = 100        # top-level triple
    d_values: int = 6        # per universal quantifier
    seed: int = 0
    hyp_values: int = 4      # candidate realizers per hypothesis
    inner_states: int = 8    # per nested triple


@dataclass
class Verdict:
    status: str                      # pass | fail | inconclusive
    checked: int = 0                 # states meeting the top-level precondition
    sampled: int = 0
    counterexample: dict | None = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"status": self.status, "checked": self.checked, "sampled": self.sampled}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


class _Fail(Exception):
    def __init__(self, info: dict):
        self.info = info
        super().__init__(info.get("reason", "fail"))


class Realizability:
    """Bounded check of the realizability relation."""

    def __init__(self, model: StateModel, theory=None, budget: Budget | None = None):
        self.model = model
        self.theory = theory
        self.budget = budget or Budget()
        self.rng = random.Random(self.budget.seed)
        self.ev = Evaluator(model, theory)

    # states meeting a precondition
    def _states(self, pre, env, count):
        pool = self.model.exhaustive_states()
        if pool is None:
            pool = self.model.sample_states(self.rng, count, hint=(pre, env))
        pool = list(pool)
        good = [p for p in pool if self.ev.holds(pre, env, p)]
        return pool, good

    def _d_values(self, count):
        return [self.model.sample_d(self.rng) for _ in range(count)]

    def check_triple(self, comp, tr: Triple, env: dict, path: str, top: bool = False):
        count = self.budget.states if top else self.budget.inner_states
        pool, good = self._states(tr.pre, env, count)
        for pi in good:
            v, pi2 = comp(pi)
            where = {"path": path, "state": self.model.serialize(pi),
                     "env": {k: self.ev.nat(x) for k, x in env.items()}}
            if not self.ev.holds(tr.post, env, pi2):
                raise _Fail({**where, "reason": f"postcondition {show_state(tr.post)} fails",
                             "final_state": self.model.serialize(pi2),
                             "value": value_to_json(v)})
            self.realizes(v, tr.body, env, path + "/body", where)
        return len(pool), len(good)

    def realizes(self, v, f, env: dict, path: str, where: dict | None = None):
        where = where or {}
        nat = lambda t: self.ev.interp.term(t, env)  # noqa: E731
        match f:
            case Top():
                return
            case Bot():
                raise _Fail({**where, "path": path, "reason": "realizer reached falsum"})
            case Atom(p, args):
                vals = tuple(nat(a) for a in args)
                if not eval_main_atom(p, vals, self.model):
                    raise _Fail({**where, "path": path,
                                 "reason": f"{show_main(f)} is false at {list(vals)}"})
                return
            case And(l, r):
                v = self._pair(v, path)
                self.realizes(v.a, l, env, path + "/left", where)
                self.realizes(v.b, r, env, path + "/right", where)
                return
            case Or(l, r):
                if isinstance(v, ZeroV):
                    v = SumV(False, ZERO_V, ZERO_V)
                if not isinstance(v, SumV):
                    raise _Fail({**where, "path": path, "reason": "disjunction realizer is not a sum"})
                if v.right:
                    self.realizes(v.right_v, r, env, path + "/inr", where)
                else:
                    self.realizes(v.left_v, l, env, path + "/inl", where)
                return
            case Exists(x, b):
                v = self._pair(v, path)
                w = NatV(self.ev.nat(v.a))
                self.realizes(v.b, b, {**env, x: w}, path + f"/witness={w.n}", where)
                return
            case ImpTriple(a, tr):
                for h in self.hyp_realizers(a, env):
                    comp = lambda pi, h=h: self.ev.apply(v, h, pi)  # noqa: E731
                    self.check_triple(comp, tr, env, path + "/imp")
                return
            case ForallTriple(x, tr):
                for n in self._d_values(self.budget.d_values):
                    e2 = {**env, x: NatV(n)}
                    comp = lambda pi, n=n: self.ev.apply(v, NatV(n), pi)  # noqa: E731
                    self.check_triple(comp, tr, e2, path + f"/{x}={n}")
                return
        raise EvalError(f"not a main formula: {f!r}")

    def _pair(self, v, path):
        if isinstance(v, ZeroV):
            return PairV(ZERO_V, ZERO_V)
        if not isinstance(v, PairV):
            raise _Fail({"path": path, "reason": f"expected a pair, got {value_to_json(v)}"})
        return v

    def hyp_realizers(self, f, env) -> list:
        """Candidate realizers of a hypothesis: canonical and sampled
        inhabitants of its type that pass the realizability test."""
        from .extractor import real_type
        ty = real_type(f)
        cands = [self.ev.zero(ty)]
        for _ in range(self.budget.hyp_values):
            cands.append(self._sample_value(ty))
        out = []
        for c in cands:
            if c in out:
                continue
            try:
                self.realizes(c, f, env, "hyp")
            except _Fail:
                continue
            out.append(c)
        return out

    def _sample_value(self, ty):
        match ty:
            case st.DType():
                return NatV(self.model.sample_d(self.rng))
            case st.CType():
                return UNIT
            case st.Prod(a, b):
                return PairV(self._sample_value(a), self._sample_value(b))
            case st.Sum(a, b):
                if self.rng.random() < 0.5:
                    return SumV(False, self._sample_value(a), self.ev.zero(b))
                return SumV(True, self.ev.zero(a), self._sample_value(b))
        return self.ev.zero(ty)


def check_realizes(t, goal, model: StateModel, budget: Budget | None = None,
                   theory=None, env: dict | None = None) -> Verdict:
    """Test ``t`` against a triple, or against a main formula read as ⟨⊤⟩A⟨⊤⟩."""
    if not isinstance(goal, Triple):
        goal = Triple(STop(), goal, STop())
    r = Realizability(model, theory, budget)
    env = {k: (v if isinstance(v, NatV) else NatV(v)) for k, v in (env or {}).items()}
    comp = lambda pi: r.ev.eval(dict(env), t, pi)  # noqa: E731
    try:
        sampled, good = r.check_triple(comp, goal, env, "", top=True)
    except _Fail as e:
        return Verdict("fail", counterexample=e.info)
    except EvalError as e:
        return Verdict("fail", counterexample={"reason": f"evaluation error: {e}"})
    if good == 0:
        return Verdict("inconclusive", 0, sampled,
                       note=f"no sampled state satisfies {show_state(goal.pre)}")
    return Verdict("pass", good, sampled)


# ------------------------------------------------------------- lemma checks


def currying_check(t, x: str, y: str, s, model: StateModel, states, theory=None,
                   env: dict | None = None, probes=()) -> Verdict:
    """(λ*v.t) s evaluated at π agrees with t[a/x, b/y] at π1, where ⟨⟨a,b⟩,π1⟩ = [s]π."""
    from .extractor import lambda_star
    ev = Evaluator(model, theory)
    env = dict(env or {})
    lhs_term = st.App(lambda_star(x, y, t, avoid=env), s)
    n = 0
    for pi in states:
        n += 1
        sv, s1 = ev.eval(env, s, pi)
        if not isinstance(sv, PairV):
            return Verdict("fail", n, n, {"reason": "argument is not a pair",
                                          "state": model.serialize(pi)})
        try:
            lv, ls = ev.eval(env, lhs_term, pi)
            rv, rs = ev.eval({**env, x: sv.a, y: sv.b}, t, s1)
        except EvalError as e:
            return Verdict("fail", n, n, {"reason": f"evaluation error: {e}",
                                          "state": model.serialize(pi)})
        if ls != rs or not values_equal(lv, rv, ev, probes, list(states)[:3]):
            return Verdict("fail", n, n, {"state": model.serialize(pi),
                                          "left": value_to_json(lv), "right": value_to_json(rv)})
    return Verdict("pass", n, n)


# ---------------------------------------------------- embedding pretty-print


def embed_main_formula(f, unicode: bool = True) -> str:
    """Text of the state-explicit reading of a main formula (diagnostic only)."""
    imp = " ⟹ " if unicode else " ==> "
    ex = "∃" if unicode else "ex "
    al = "∀" if unicode else "all "
    conj = " ∧ " if unicode else " /\\ "
    disj = " ∨ " if unicode else " \\/ "
    top = "⊤" if unicode else "true"
    bot = "⊥" if unicode else "false"
    pi, pi2 = ("π", "π′") if unicode else ("pi", "pi'")

    def sf(a, p):
        return f"[{show_state(a, unicode)}]({p})"

    def triple(tr: Triple):
        return f"{ex}{pi}. {sf(tr.pre, pi)}{imp}{go(tr.body, 2)}{conj}{ex}{pi2}. {sf(tr.post, pi2)}"

    def go(x, ctx):
        match x:
            case Top():
                return top
            case Bot():
                return bot
            case Atom():
                return show_main(x, unicode)
            case And(l, r):
                out, p = go(l, 3) + conj + go(r, 3), 3
            case Or(l, r):
                out, p = go(l, 2) + disj + go(r, 2), 2
            case Exists(v, b):
                out, p = f"{ex}{v}. {go(b, 0)}", 0
            case ImpTriple(a, tr):
                out, p = f"{go(a, 2)}{imp}({triple(tr)})", 1
            case ForallTriple(v, tr):
                out, p = f"{al}{v}. ({triple(tr)})", 0
            case Triple():
                out, p = triple(x), 0
            case _:
                raise EvalError(f"not a main formula: {x!r}")
        return f"({out})" if p < ctx else out

    return go(f, 0)
