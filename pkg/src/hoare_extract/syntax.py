"""First-order terms, state formulas, main formulas and Hoare triples.

Two formula layers are kept apart: state formulas are quantifier-free
propositional combinations of state atoms, while main formulas only admit
implication and universal quantification with a triple as body.  The
``Imp``/``Forall`` classes exist for ordinary predicate-logic formulas that
are translated into the main layer (see :mod:`hoare_extract.pl`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union


# --------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class FunApp:
    symbol: str
    args: tuple = ()


Term = Union[Var, FunApp]

ZERO = FunApp("0")


def succ(t: Term) -> FunApp:
    return FunApp("succ", (t,))


def numeral(k: int) -> Term:
    t: Term = ZERO
    for _ in range(k):
        t = succ(t)
    return t


def as_numeral(t: Term) -> int | None:
    k = 0
    while isinstance(t, FunApp) and t.symbol == "succ" and len(t.args) == 1:
        t = t.args[0]
        k += 1
    if t == ZERO:
        return k
    return None


# ------------------------------------------------------------ state formulas


@dataclass(frozen=True)
class STop:
    pass


@dataclass(frozen=True)
class SBot:
    pass


@dataclass(frozen=True)
class SAtom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class SAnd:
    left: "StateFormula"
    right: "StateFormula"


@dataclass(frozen=True)
class SOr:
    left: "StateFormula"
    right: "StateFormula"


@dataclass(frozen=True)
class SImp:
    left: "StateFormula"
    right: "StateFormula"


StateFormula = Union[STop, SBot, SAtom, SAnd, SOr, SImp]

STRUE = STop()
SFALSE = SBot()


def snot(a: StateFormula) -> SImp:
    return SImp(a, SFALSE)


def sconj(parts: Iterable[StateFormula]) -> StateFormula:
    parts = list(parts)
    if not parts:
        return STRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = SAnd(p, out)
    return out


# ------------------------------------------------------------- main formulas


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Triple:
    pre: StateFormula
    body: "Formula"
    post: StateFormula


@dataclass(frozen=True)
class ImpTriple:
    ante: "Formula"
    cons: Triple


@dataclass(frozen=True)
class ForallTriple:
    var: str
    body: Triple


# predicate-logic connectives; never part of a well-formed main formula
@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Top, Bot, Atom, And, Or, Exists, ImpTriple, ForallTriple, Imp, Forall]
MainFormula = Formula

TOP = Top()
BOT = Bot()

EQ = "="
NEQ = "!="


def eq(s: Term, t: Term) -> Atom:
    return Atom(EQ, (s, t))


# ------------------------------------------------------------------ contexts


@dataclass(frozen=True)
class Context:
    """Ordered labelled assumptions with pairwise distinct labels."""

    items: tuple = ()

    def __post_init__(self):
        labels = [lab for lab, _ in self.items]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in context: {labels}")

    def __contains__(self, label: str) -> bool:
        return any(lab == label for lab, _ in self.items)

    def __getitem__(self, label: str):
        for lab, f in self.items:
            if lab == label:
                return f
        raise KeyError(label)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def labels(self) -> list[str]:
        return [lab for lab, _ in self.items]

    def extend(self, label: str, formula) -> "Context":
        if label in self:
            rest = tuple((lab, f) for lab, f in self.items if lab != label)
            return Context(rest + ((label, formula),))
        return Context(self.items + ((label, formula),))

    def without(self, label: str) -> "Context":
        return Context(tuple((lab, f) for lab, f in self.items if lab != label))

    def free_vars(self) -> set[str]:
        out: set[str] = set()
        for _, f in self.items:
            out |= free_vars(f)
        return out


EMPTY = Context()


# ----------------------------------------------------------------- signature


class SignatureError(ValueError):
    pass


@dataclass
class Signature:
    funcs: dict = field(default_factory=dict)
    preds: dict = field(default_factory=dict)
    statepreds: dict = field(default_factory=dict)
    # opaque nullary state conditions, such as the α and β of a generic triple
    stateprops: dict = field(default_factory=dict)
    canonical: str | None = None
    mode: str = "sl"

    def __post_init__(self):
        if self.mode == "sa":
            self.funcs.setdefault("0", 0)
            self.funcs.setdefault("succ", 1)
            self.preds.setdefault(EQ, 2)
            self.preds.setdefault(NEQ, 2)
            if self.canonical is None:
                self.canonical = "0"

    def add_func(self, name: str, arity: int) -> None:
        self._fresh_name(name)
        self.funcs[name] = arity
        if arity == 0 and self.canonical is None:
            self.canonical = name

    def add_pred(self, name: str, arity: int) -> None:
        self._fresh_name(name)
        self.preds[name] = arity

    def add_statepred(self, name: str, arity: int) -> None:
        self._fresh_name(name)
        self.statepreds[name] = arity

    def add_stateprop(self, name: str) -> None:
        self._fresh_name(name)
        self.stateprops[name] = 0

    def state_symbols(self) -> dict:
        """State predicates and state propositions with their arities."""
        return {**self.statepreds, **self.stateprops}

    def _fresh_name(self, name: str) -> None:
        if (name in self.funcs or name in self.preds or name in self.statepreds
                or name in self.stateprops):
            raise SignatureError(f"duplicate symbol {name!r}")

    def canonical_const(self) -> FunApp:
        if self.canonical is None:
            raise SignatureError("signature has no constant")
        return FunApp(self.canonical)

    def check_term(self, t: Term) -> None:
        match t:
            case Var():
                return
            case FunApp(sym, args):
                if sym not in self.funcs:
                    raise SignatureError(f"unknown function symbol {sym!r}")
                if self.funcs[sym] != len(args):
                    raise SignatureError(
                        f"{sym} expects {self.funcs[sym]} arguments, got {len(args)}")
                for a in args:
                    self.check_term(a)

    def check_state(self, a: StateFormula) -> None:
        match a:
            case STop() | SBot():
                return
            case SAtom(p, args):
                arity = self.statepreds.get(p, self.stateprops.get(p))
                if arity is None:
                    raise SignatureError(f"unknown state predicate {p!r}")
                if arity != len(args):
                    raise SignatureError(f"{p} expects {arity} arguments, got {len(args)}")
                for t in args:
                    self.check_term(t)
            case SAnd(l, r) | SOr(l, r) | SImp(l, r):
                self.check_state(l)
                self.check_state(r)
            case _:
                raise SignatureError(f"not a state formula: {a!r}")

    def check_main(self, f: Formula, pl: bool = False) -> None:
        match f:
            case Top() | Bot():
                return
            case Atom(p, args):
                if p not in self.preds:
                    raise SignatureError(f"unknown predicate {p!r}")
                if self.preds[p] != len(args):
                    raise SignatureError(
                        f"{p} expects {self.preds[p]} arguments, got {len(args)}")
                for t in args:
                    self.check_term(t)
            case And(l, r) | Or(l, r):
                self.check_main(l, pl)
                self.check_main(r, pl)
            case Exists(_, b):
                self.check_main(b, pl)
            case ImpTriple(a, tr) if not pl:
                self.check_main(a)
                self.check_triple(tr)
            case ForallTriple(_, tr) if not pl:
                self.check_triple(tr)
            case Imp(l, r) if pl:
                self.check_main(l, pl)
                self.check_main(r, pl)
            case Forall(_, b) if pl:
                self.check_main(b, pl)
            case _:
                layer = "predicate-logic" if pl else "main"
                raise SignatureError(f"not a {layer} formula: {f!r}")

    def check_triple(self, tr: Triple) -> None:
        self.check_state(tr.pre)
        self.check_main(tr.body)
        self.check_state(tr.post)


# ------------------------------------------------------------ free variables


def term_vars(t: Term) -> set[str]:
    match t:
        case Var(n):
            return {n}
        case FunApp(_, args):
            out: set[str] = set()
            for a in args:
                out |= term_vars(a)
            return out
    raise TypeError(t)


def free_vars(x) -> set[str]:
    match x:
        case Var() | FunApp():
            return term_vars(x)
        case STop() | SBot() | Top() | Bot():
            return set()
        case SAtom(_, args) | Atom(_, args):
            out: set[str] = set()
            for a in args:
                out |= term_vars(a)
            return out
        case SAnd(l, r) | SOr(l, r) | SImp(l, r) | And(l, r) | Or(l, r) | Imp(l, r):
            return free_vars(l) | free_vars(r)
        case Exists(v, b) | Forall(v, b) | ForallTriple(v, b):
            return free_vars(b) - {v}
        case Triple(pre, body, post):
            return free_vars(pre) | free_vars(body) | free_vars(post)
        case ImpTriple(a, tr):
            return free_vars(a) | free_vars(tr)
        case Context():
            return x.free_vars()
    raise TypeError(f"free_vars: unsupported {x!r}")


def all_vars(x) -> set[str]:
    """Free and bound variable names."""
    match x:
        case Exists(v, b) | Forall(v, b) | ForallTriple(v, b):
            return all_vars(b) | {v}
        case ImpTriple(a, tr):
            return all_vars(a) | all_vars(tr)
        case Triple(pre, body, post):
            return free_vars(pre) | all_vars(body) | free_vars(post)
        case And(l, r) | Or(l, r) | Imp(l, r):
            return all_vars(l) | all_vars(r)
        case _:
            return free_vars(x)


def fresh(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or base
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


# -------------------------------------------------------------- substitution


def subst_term(t: Term, m: Mapping[str, Term]) -> Term:
    match t:
        case Var(n):
            return m.get(n, t)
        case FunApp(sym, args):
            return FunApp(sym, tuple(subst_term(a, m) for a in args))
    raise TypeError(t)


def _subst_binder(v: str, body, m: Mapping[str, Term], rebuild):
    inner = {k: t for k, t in m.items() if k != v and k in free_vars(body)}
    if not inner:
        return rebuild(v, body)
    incoming: set[str] = set()
    for t in inner.values():
        incoming |= term_vars(t)
    if v in incoming:
        nv = fresh(v, incoming | free_vars(body) | set(inner) | all_vars(body))
        inner[v] = Var(nv)
        return rebuild(nv, subst_many(body, inner))
    return rebuild(v, subst_many(body, inner))


def subst_many(x, m: Mapping[str, Term]):
    """Simultaneous capture-avoiding substitution of terms for variables."""
    if not m:
        return x
    match x:
        case Var() | FunApp():
            return subst_term(x, m)
        case STop() | SBot() | Top() | Bot():
            return x
        case SAtom(p, args):
            return SAtom(p, tuple(subst_term(a, m) for a in args))
        case Atom(p, args):
            return Atom(p, tuple(subst_term(a, m) for a in args))
        case SAnd(l, r):
            return SAnd(subst_many(l, m), subst_many(r, m))
        case SOr(l, r):
            return SOr(subst_many(l, m), subst_many(r, m))
        case SImp(l, r):
            return SImp(subst_many(l, m), subst_many(r, m))
        case And(l, r):
            return And(subst_many(l, m), subst_many(r, m))
        case Or(l, r):
            return Or(subst_many(l, m), subst_many(r, m))
        case Imp(l, r):
            return Imp(subst_many(l, m), subst_many(r, m))
        case Triple(pre, body, post):
            return Triple(subst_many(pre, m), subst_many(body, m), subst_many(post, m))
        case ImpTriple(a, tr):
            return ImpTriple(subst_many(a, m), subst_many(tr, m))
        case Exists(v, b):
            return _subst_binder(v, b, m, Exists)
        case Forall(v, b):
            return _subst_binder(v, b, m, Forall)
        case ForallTriple(v, b):
            return _subst_binder(v, b, m, ForallTriple)
    raise TypeError(f"subst: unsupported {x!r}")


def subst(x, var: str, t: Term):
    return subst_many(x, {var: t})


# --------------------------------------------------------- alpha equivalence


def _alpha(a, b, ea: dict, eb: dict, depth: int) -> bool:
    match a, b:
        case Var(n), Var(m):
            return ea.get(n, n) == eb.get(m, m) if (n in ea) == (m in eb) else False
        case FunApp(f, xs), FunApp(g, ys):
            return f == g and len(xs) == len(ys) and all(
                _alpha(x, y, ea, eb, depth) for x, y in zip(xs, ys))
        case (STop(), STop()) | (SBot(), SBot()) | (Top(), Top()) | (Bot(), Bot()):
            return True
        case (SAtom(p, xs), SAtom(q, ys)) | (Atom(p, xs), Atom(q, ys)):
            return p == q and len(xs) == len(ys) and all(
                _alpha(x, y, ea, eb, depth) for x, y in zip(xs, ys))
        case (SAnd(l1, r1), SAnd(l2, r2)) | (SOr(l1, r1), SOr(l2, r2)) | \
             (SImp(l1, r1), SImp(l2, r2)) | (And(l1, r1), And(l2, r2)) | \
             (Or(l1, r1), Or(l2, r2)) | (Imp(l1, r1), Imp(l2, r2)):
            return _alpha(l1, l2, ea, eb, depth) and _alpha(r1, r2, ea, eb, depth)
        case Triple(p1, b1, q1), Triple(p2, b2, q2):
            return (_alpha(p1, p2, ea, eb, depth) and _alpha(b1, b2, ea, eb, depth)
                    and _alpha(q1, q2, ea, eb, depth))
        case ImpTriple(a1, t1), ImpTriple(a2, t2):
            return _alpha(a1, a2, ea, eb, depth) and _alpha(t1, t2, ea, eb, depth)
        case (Exists(v, b1), Exists(w, b2)) | (Forall(v, b1), Forall(w, b2)) | \
             (ForallTriple(v, b1), ForallTriple(w, b2)):
            key = f"#{depth}"
            return _alpha(b1, b2, {**ea, v: key}, {**eb, w: key}, depth + 1)
    return False


def alpha_eq(a, b) -> bool:
    return _alpha(a, b, {}, {}, 0)


# ------------------------------------------------------------------ printing


_U = {"top": "⊤", "bot": "⊥", "and": " ∧ ", "or": " ∨ ", "imp": " → ",
      "mimp": " ⇒ ", "all": "∀", "ex": "∃", "lt": "⟨", "rt": "⟩", "not": "¬",
      "turn": "⊢"}
_A = {"top": "true", "bot": "false", "and": " /\\ ", "or": " \\/ ", "imp": " -> ",
      "mimp": " => ", "all": "all ", "ex": "ex ", "lt": "{", "rt": "}", "not": "~",
      "turn": "|-"}


def show_term(t: Term) -> str:
    k = as_numeral(t)
    if k is not None:
        return str(k)
    match t:
        case Var(n):
            return n
        case FunApp("succ", (inner,)):
            depth = 1
            while isinstance(inner, FunApp) and inner.symbol == "succ" and as_numeral(inner) is None:
                inner = inner.args[0]
                depth += 1
            return f"{show_term(inner)}+{depth}"
        case FunApp(sym, ()):
            return sym
        case FunApp(sym, args):
            return f"{sym}({','.join(show_term(a) for a in args)})"
    raise TypeError(t)


def _sprec(a) -> int:
    match a:
        case SImp(_, SBot()):
            return 4
        case SImp():
            return 1
        case SOr():
            return 2
        case SAnd():
            return 3
    return 5


def show_state(a: StateFormula, unicode: bool = True) -> str:
    s = _U if unicode else _A

    def go(x, ctx: int) -> str:
        p = _sprec(x)
        match x:
            case STop():
                out = s["top"]
            case SBot():
                out = s["bot"]
            case SAtom(q, ()):
                out = q
            case SAtom(q, args):
                out = f"{q}({','.join(show_term(t) for t in args)})"
            case SImp(l, SBot()):
                out = s["not"] + go(l, 5)
            case SAnd(l, r):
                out = go(l, p + 1) + s["and"] + go(r, p)
            case SOr(l, r):
                out = go(l, p + 1) + s["or"] + go(r, p)
            case SImp(l, r):
                out = go(l, p + 1) + s["imp"] + go(r, p)
            case _:
                raise TypeError(x)
        return f"({out})" if p < ctx else out

    return go(a, 0)


def _mprec(f) -> int:
    match f:
        case ImpTriple() | Imp():
            return 1
        case Or():
            return 2
        case And():
            return 3
        case Exists() | Forall() | ForallTriple():
            return 0
    return 5


def show_triple(tr: Triple, unicode: bool = True) -> str:
    s = _U if unicode else _A
    if unicode:
        return f"⟨{show_state(tr.pre)}⟩{show_main(tr.body)}⟨{show_state(tr.post)}⟩"
    return (f"{{{show_state(tr.pre, False)}}} {show_main(tr.body, False)} "
            f"{{{show_state(tr.post, False)}}}")


def show_main(f: Formula, unicode: bool = True) -> str:
    s = _U if unicode else _A

    def go(x, ctx: int) -> str:
        p = _mprec(x)
        match x:
            case Top():
                out = s["top"]
            case Bot():
                out = s["bot"]
            case Atom(q, (l, r)) if q in (EQ, NEQ):
                op = q if not unicode or q == EQ else "≠"
                out = f"{show_term(l)} {op} {show_term(r)}"
            case Atom(q, ()):
                out = q
            case Atom(q, args):
                out = f"{q}({','.join(show_term(t) for t in args)})"
            case And(l, r):
                out = go(l, p + 1) + s["and"] + go(r, p)
            case Or(l, r):
                out = go(l, p + 1) + s["or"] + go(r, p)
            case ImpTriple(a, tr):
                out = go(a, 2) + s["mimp"] + show_triple(tr, unicode)
            case Imp(l, r):
                out = go(l, 2) + s["mimp"] + go(r, 1)
            case Exists(v, b):
                out = f"{s['ex']}{v}. {go(b, 0)}" if not unicode else f"∃{v} {go(b, 0)}"
            case Forall(v, b):
                out = f"{s['all']}{v}. {go(b, 0)}" if not unicode else f"∀{v} {go(b, 0)}"
            case ForallTriple(v, tr):
                if unicode:
                    out = f"∀{v}{show_triple(tr)}"
                else:
                    out = f"all {v}. {show_triple(tr, False)}"
            case _:
                raise TypeError(x)
        return f"({out})" if p < ctx else out

    return go(f, 0)


def show(x, unicode: bool = True) -> str:
    match x:
        case Var() | FunApp():
            return show_term(x)
        case STop() | SBot() | SAtom() | SAnd() | SOr() | SImp():
            return show_state(x, unicode)
        case Triple():
            return show_triple(x, unicode)
    return show_main(x, unicode)
