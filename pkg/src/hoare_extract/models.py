"""Concrete state models: query-solve, the 3-array, insertion sort, and a
stateless model for pure logic.

Each model knows how to evaluate its atoms, interpret its program constants
and sample states.  The axioms themselves live in the shipped theory files;
``builtin_theory`` loads the one belonging to a model.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass, field
from importlib import resources
from itertools import product

from . import stlang as st
from .semantics import EvalError, NatV, NativeV, StateModel, UNIT, PairV
from .syntax import SAnd, SAtom, SOr, SImp


class ModelError(Exception):
    pass


# ------------------------------------------------------------------- helpers


def _atoms(a, out=None):
    out = [] if out is None else out
    match a:
        case SAtom():
            out.append(a)
        case SAnd(l, r) | SOr(l, r) | SImp(l, r):
            _atoms(l, out)
            _atoms(r, out)
    return out


def _hint_args(hint, pred, interp_term):
    """Argument tuples of ``pred`` atoms in a hinted precondition that can be
    evaluated under the hint's environment."""
    if not hint:
        return []
    pre, env = hint
    out = []
    for a in _atoms(pre):
        if a.pred != pred:
            continue
        try:
            out.append(tuple(interp_term(t, env) for t in a.args))
        except EvalError:
            continue
    return out


def _term_value(t, env):
    from .semantics import Interp
    return Interp(_NullModel()).term(t, env)


class _NullModel(StateModel):
    def eval_state_atom(self, pred, args, state):
        raise EvalError(pred)

    def interp_fun(self, sym, args):
        if sym.isdigit() and not args:
            return int(sym)
        raise EvalError(sym)

    def sample_states(self, rng, count, hint=None):
        return []


# ---------------------------------------------------------------- query-solve


ORACLES = {
    "succ": lambda x: x + 1,
    "double": lambda x: 2 * x,
    "square": lambda x: x * x,
}


@dataclass(frozen=True)
class QSState:
    query: int | None = None
    answer: tuple | None = None
    flags: frozenset = frozenset()


class QuerySolve(StateModel):
    name = "query_solve"
    CONSTANTS = {"write": (0, st.Arrow(st.D, st.C)), "calc": (0, st.C),
                 "read": (0, st.Prod(st.D, st.C))}
    KNOWN = {"stored", "solved"}

    def __init__(self, g="succ", opaque=()):
        if isinstance(g, str):
            if g not in ORACLES:
                raise ModelError(f"unknown oracle {g!r}; choose from {sorted(ORACLES)}")
            g = ORACLES[g]
        self.g = g
        # nullary state predicates the model does not interpret: kept as flags
        self.opaque = tuple(opaque)

    def eval_state_atom(self, pred, args, s: QSState):
        match pred, args:
            case "stored", (x,):
                return s.query == x
            case "solved", (x,):
                return s.answer is not None and s.answer[0] == x
        return (pred, args) in s.flags

    def interp_fun(self, sym, args):
        if sym.isdigit() and not args:
            return int(sym)
        if not args:
            return 0
        if sym == "g" and len(args) == 1:
            return self.g(args[0])
        raise EvalError(f"query-solve model has no function {sym}")

    def eval_main_atom(self, pred, args):
        if pred == "P" and len(args) == 2:
            return args[1] == self.g(args[0])
        raise EvalError(f"query-solve model has no predicate {pred}")

    def const_sem(self, name, index):
        match name:
            case "write":
                def write(x, s, ev):
                    return UNIT, QSState(ev.nat(x), s.answer, s.flags)
                return lambda s: (NativeV("write", write), s)
            case "calc":
                def calc(s):
                    if s.query is None:
                        return UNIT, s
                    return UNIT, QSState(s.query, (s.query, self.g(s.query)), s.flags)
                return calc
            case "read":
                def read(s):
                    y = s.answer[1] if s.answer is not None else 0
                    return PairV(NatV(y), UNIT), s
                return read
        return super().const_sem(name, index)

    def sample_d(self, rng):
        return rng.randrange(0, 20)

    def sample_states(self, rng, count, hint=None):
        hinted = [a[0] for p in ("stored", "solved")
                  for a in _hint_args(hint, p, _term_value) if a]
        out = []
        for _ in range(count):
            def pick():
                r = rng.random()
                if r < 0.2:
                    return None
                if hinted and r < 0.7:
                    return rng.choice(hinted)
                return self.sample_d(rng)
            q = pick()
            a = pick()
            flags = frozenset((p, ()) for p in self.opaque if rng.random() < 0.5)
            out.append(QSState(q, None if a is None else (a, self.g(a)), flags))
        return out

    def default_state(self):
        return QSState()

    def serialize(self, s: QSState):
        out = {"query": s.query, "answer": list(s.answer) if s.answer else None}
        if s.flags:
            out["flags"] = sorted(p for p, _ in s.flags)
        return out

    def parse_state(self, data):
        if not isinstance(data, dict):
            raise ModelError("query-solve state must be a JSON object")
        q = data.get("query")
        a = data.get("answer")
        if a is not None:
            if len(a) != 2:
                raise ModelError("answer must be a pair [input, output]")
            a = (int(a[0]), int(a[1]))
            if a[1] != self.g(a[0]):
                raise ModelError("answer output must equal the oracle applied to its input")
        flags = frozenset((p, ()) for p in data.get("flags", ()))
        return QSState(None if q is None else int(q), a, flags)


# ------------------------------------------------------------------ 3-array


class Swap3(StateModel):
    name = "swap3"
    CONSTANTS = {"swap": (2, st.C)}
    LOCATIONS = (1, 2, 3)

    def _slot(self, l):
        if l not in self.LOCATIONS:
            raise EvalError(f"location {l} outside 1..3")
        return l - 1

    def eval_state_atom(self, pred, args, s):
        match pred, args:
            case "le", (a, b):
                if a not in self.LOCATIONS or b not in self.LOCATIONS:
                    return False
                return s[a - 1] <= s[b - 1]
            case "sorted", ():
                return s[0] <= s[1] <= s[2]
        raise EvalError(f"3-array model has no state predicate {pred}/{len(args)}")

    def interp_fun(self, sym, args):
        if sym.isdigit() and not args:
            return int(sym)
        raise EvalError(f"3-array model has no function {sym}")

    def const_sem(self, name, index):
        if name == "swap" and len(index) == 2:
            i, j = self._slot(index[0]), self._slot(index[1])

            def run(s):
                cells = list(s)
                cells[i], cells[j] = cells[j], cells[i]
                return UNIT, tuple(cells)
            return run
        return super().const_sem(name, index)

    def sample_d(self, rng):
        return rng.choice(self.LOCATIONS)

    def exhaustive_states(self):
        return [tuple(p) for p in product(range(3), repeat=3)]

    def sample_states(self, rng, count, hint=None):
        return [tuple(rng.randrange(0, 3) for _ in range(3)) for _ in range(count)]

    def default_state(self):
        return (0, 0, 0)

    def serialize(self, s):
        return list(s)

    def parse_state(self, data):
        if not isinstance(data, list) or len(data) != 3:
            raise ModelError("3-array state must be a JSON array of 3 naturals")
        return tuple(int(x) for x in data)


# ------------------------------------------------------------ insertion sort


def _nondecreasing(xs) -> bool:
    return all(a <= b for a, b in zip(xs, xs[1:]))


class InsertSort(StateModel):
    name = "insertion_sort"
    CONSTANTS = {"swap": (0, st.Arrow(st.D, st.C))}

    def __init__(self, M: int = 16):
        if M < 1:
            raise ModelError("array length must be at least 1")
        self.M = M

    # predicates, with indices clamped to the array
    def sort(self, N, c) -> bool:
        return _nondecreasing(c[: min(N, self.M - 1) + 1])

    def psort(self, n, N, c) -> bool:
        if n > N:
            return self.sort(N, c)
        if n == N:
            return _nondecreasing(c[: min(N, self.M)])
        top = min(N, self.M - 1)
        rest = [c[i] for i in range(top + 1) if i != n]
        ok = _nondecreasing(rest)
        if n + 1 < self.M:
            ok = ok and c[n] <= c[n + 1]
        return ok

    def comp(self, n, c) -> bool:
        if n == 0:
            return True
        if n >= self.M:
            return False
        return c[n] <= c[n - 1]

    def eval_state_atom(self, pred, args, s):
        match pred, args:
            case "sort", (N,):
                return self.sort(N, s)
            case "psort", (n, N):
                return self.psort(n, N, s)
            case "comp", (n,):
                return self.comp(n, s)
        raise EvalError(f"insertion-sort model has no state predicate {pred}/{len(args)}")

    def interp_fun(self, sym, args):
        if sym.isdigit() and not args:
            return int(sym)
        raise EvalError(f"insertion-sort model has no function {sym}")

    def swap(self, n, s):
        if n + 1 >= self.M:
            return s
        c = list(s)
        c[n], c[n + 1] = c[n + 1], c[n]
        return tuple(c)

    def const_sem(self, name, index):
        if name == "swap" and not index:
            def swap(n, s, ev):
                return UNIT, self.swap(ev.nat(n), s)
            return lambda s: (NativeV("swap", swap), s)
        return super().const_sem(name, index)

    def sample_d(self, rng):
        return rng.randrange(0, max(1, self.M - 1))

    # states shaped after the precondition, mixed with plain random ones
    def _sorted(self, rng, k, hi):
        return sorted(rng.randrange(0, hi) for _ in range(k))

    def _shaped(self, rng, pred, args, hi):
        M = self.M
        cells = [rng.randrange(0, hi) for _ in range(M)]
        if pred == "sort":
            k = min(args[0], M - 1) + 1
            cells[:k] = self._sorted(rng, k, hi)
        elif pred == "psort":
            n, N = args
            if n >= N or N >= M:
                k = min(N + (n > N), M)
                cells[:k] = self._sorted(rng, k, hi)
            else:
                rest = self._sorted(rng, N, hi)
                v = rng.randrange(0, rest[n] + 1)
                cells[: N + 1] = rest[:n] + [v] + rest[n:]
        return tuple(cells)

    def sample_states(self, rng, count, hint=None):
        shapes = []
        for p in ("psort", "sort"):
            shapes += [(p, a) for a in _hint_args(hint, p, _term_value)]
        out = []
        for _ in range(count):
            hi = rng.choice((3, 10, 100))
            r = rng.random()
            if shapes and r < 0.6:
                out.append(self._shaped(rng, *rng.choice(shapes), hi))
            elif r < 0.7:
                out.append((rng.randrange(0, hi),) * self.M)
            elif r < 0.85:
                N = rng.randrange(0, self.M)
                n = rng.randrange(0, N + 2)
                out.append(self._shaped(rng, "psort", (n, N), hi))
            else:
                out.append(tuple(rng.randrange(0, hi) for _ in range(self.M)))
        return out

    def default_state(self):
        return (0,) * self.M

    def serialize(self, s):
        return list(s)

    def parse_state(self, data):
        if not isinstance(data, list):
            raise ModelError("insertion-sort state must be a JSON array of naturals")
        cells = [int(x) for x in data][: self.M]
        cells += [0] * (self.M - len(cells))
        return tuple(cells)


# --------------------------------------------------------------- pure logic


def _h(*parts) -> int:
    return zlib.crc32("|".join(map(str, parts)).encode())


class Pure(StateModel):
    """Stateless-ish model for logic-only theories.

    Predicates get a fixed pseudo-random interpretation; state atoms are
    flags carried in the state, so state formulas are genuinely tested.
    """

    name = "pure"
    CONSTANTS: dict = {}

    def __init__(self, salt: int = 0, statepreds=()):
        self.salt = salt
        self.statepreds = tuple(statepreds)

    def eval_state_atom(self, pred, args, s):
        return (pred, tuple(args)) in s

    def interp_fun(self, sym, args):
        if sym.isdigit() and not args:
            return int(sym)
        return _h("f", self.salt, sym, *args) % 6

    def eval_main_atom(self, pred, args):
        return _h("p", self.salt, pred, *args) % 2 == 0

    def sample_d(self, rng):
        return rng.randrange(0, 6)

    def sample_states(self, rng, count, hint=None):
        atoms = []
        for p, n in self.statepreds:
            if n == 0:
                atoms.append((p, ()))
            else:
                atoms += [(p, a) for a in product(range(6), repeat=n)][:36]
        if hint:
            pre, env = hint
            for a in _atoms(pre):
                try:
                    atoms.append((a.pred, tuple(_term_value(t, env) for t in a.args)))
                except EvalError:
                    pass
        out = []
        for i in range(count):
            bias = 0.9 if i % 4 == 0 else 0.5
            out.append(frozenset(a for a in atoms if rng.random() < bias))
        return out

    def default_state(self):
        return frozenset()

    def serialize(self, s):
        return sorted([p, list(a)] for p, a in s)

    def parse_state(self, data):
        return frozenset((p, tuple(a)) for p, a in (data or []))


# ------------------------------------------------------------------ registry


@dataclass
class ModelEntry:
    name: str
    factory: object            # (options: dict, theory) -> StateModel
    constants: dict
    theory_file: str | None = None
    options: dict = field(default_factory=dict)


MODELS: dict[str, ModelEntry] = {}


def register_model(name: str, factory, constants: dict, theory_file: str | None = None):
    """Make a model available to theory files under ``name``.

    ``constants`` maps program constants to (index arity, type); the theory
    declaring ``model name`` gets them, and its action axioms may use them
    in realizers.
    """
    if name in MODELS:
        raise ModelError(f"model {name} already registered")
    MODELS[name] = ModelEntry(name, factory, dict(constants), theory_file)
    return MODELS[name]


def _opaque(theory, known):
    return tuple(p for p, n in theory.signature.state_symbols().items()
                 if n == 0 and p not in known)


register_model(
    "query_solve",
    lambda opts, th: QuerySolve(opts.get("g", "succ"),
                                _opaque(th, QuerySolve.KNOWN) if th else ()),
    QuerySolve.CONSTANTS, "readwrite.slt")
register_model("swap3", lambda opts, th: Swap3(), Swap3.CONSTANTS, "sort3.slt")
register_model(
    "insertion_sort",
    lambda opts, th: InsertSort(int(opts.get("M", 16))),
    InsertSort.CONSTANTS, "insertion_sort.slt")
register_model(
    "pure",
    lambda opts, th: Pure(int(opts.get("salt", 0)),
                          tuple(th.signature.state_symbols().items()) if th else ()),
    Pure.CONSTANTS)


def model_for(theory, name: str | None = None, **overrides) -> StateModel:
    name = name or theory.model
    if name is None:
        raise ModelError("theory selects no model")
    if name not in MODELS:
        raise ModelError(f"unknown model {name!r}; known: {', '.join(sorted(MODELS))}")
    opts = {**theory.model_options, **overrides} if theory is not None else dict(overrides)
    return MODELS[name].factory(opts, theory)


def corpus_path(name: str):
    return resources.files("hoare_extract").joinpath("corpus", name)


def builtin_theory(model: str):
    """The shipped theory file belonging to a built-in model, parsed."""
    from .parser import parse_theory
    entry = MODELS[model]
    if entry.theory_file is None:
        raise ModelError(f"model {model} has no shipped theory")
    text = corpus_path(entry.theory_file).read_text(encoding="utf-8")
    return parse_theory(text, filename=entry.theory_file)


def reference_sort(cells, N):
    """Independent oracle: sort the first N+1 cells, leave the rest alone."""
    k = N + 1
    return tuple(sorted(cells[:k])) + tuple(cells[k:])


def random_state(model: StateModel, seed: int):
    return model.sample_states(random.Random(seed), 1)[0]
