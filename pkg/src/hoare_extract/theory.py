"""Theories: a signature plus state axioms, action axioms with realizers,
defining equations and the constants of the program language."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import stlang as st
from .statelogic import HAxiomSchema
from .syntax import (
    Atom, FunApp, SAnd, SAtom, SBot, SImp, SOr, STop, Signature, StateFormula,
    Term, Triple, Var, eq, free_vars, show_state, subst_many,
)


class TheoryError(Exception):
    pass


# ------------------------------------------------ state patterns for schemas


@dataclass(frozen=True)
class FMeta:
    """A state-formula metavariable inside a schema pattern."""
    name: str


@dataclass(frozen=True)
class SwapPat:
    """``a[l<->l']``: the instance of ``a`` with the terms bound to l, l' exchanged."""
    inner: object
    left: str
    right: str


@dataclass(frozen=True)
class FormulaMeta:
    """Declaration of a formula metavariable.

    ``kind`` is ``any`` or ``conj``; a ``conj`` metavariable only accepts a
    nonempty conjunction of atoms ``pred(l, l')`` with arguments in ``domain``.
    """
    name: str
    kind: str = "any"
    pred: str | None = None
    domain: tuple | None = None


def swap_term(t: Term, a: Term, b: Term) -> Term:
    if t == a:
        return b
    if t == b:
        return a
    if isinstance(t, FunApp):
        return FunApp(t.symbol, tuple(swap_term(x, a, b) for x in t.args))
    return t


def swap_state(f: StateFormula, a: Term, b: Term) -> StateFormula:
    """Exchange every occurrence of a and b, keeping the formula's shape."""
    match f:
        case STop() | SBot():
            return f
        case SAtom(p, args):
            return SAtom(p, tuple(swap_term(x, a, b) for x in args))
        case SAnd(l, r):
            return SAnd(swap_state(l, a, b), swap_state(r, a, b))
        case SOr(l, r):
            return SOr(swap_state(l, a, b), swap_state(r, a, b))
        case SImp(l, r):
            return SImp(swap_state(l, a, b), swap_state(r, a, b))
    raise TypeError(f)


def conjuncts(f: StateFormula) -> list:
    if isinstance(f, SAnd):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def instantiate_state(pat, binding: Mapping) -> StateFormula:
    match pat:
        case FMeta(n):
            return binding[n]
        case SwapPat(inner, l, r):
            return swap_state(instantiate_state(inner, binding), binding[l], binding[r])
        case SAnd(l, r):
            return SAnd(instantiate_state(l, binding), instantiate_state(r, binding))
        case SOr(l, r):
            return SOr(instantiate_state(l, binding), instantiate_state(r, binding))
        case SImp(l, r):
            return SImp(instantiate_state(l, binding), instantiate_state(r, binding))
    terms = {k: v for k, v in binding.items() if not _is_state(v)}
    return subst_many(pat, terms)


def _is_state(v) -> bool:
    return isinstance(v, (STop, SBot, SAtom, SAnd, SOr, SImp))


def pattern_vars(pat) -> set[str]:
    match pat:
        case FMeta():
            return set()
        case SwapPat(inner, l, r):
            return pattern_vars(inner) | {l, r}
        case SAnd(l, r) | SOr(l, r) | SImp(l, r):
            return pattern_vars(l) | pattern_vars(r)
    return free_vars(pat)


def pattern_fmetas(pat) -> set[str]:
    match pat:
        case FMeta(n):
            return {n}
        case SwapPat(inner, _, _):
            return pattern_fmetas(inner)
        case SAnd(l, r) | SOr(l, r) | SImp(l, r):
            return pattern_fmetas(l) | pattern_fmetas(r)
    return set()


# ----------------------------------------------------------- action schemas


@dataclass
class SAxiomSchema:
    name: str
    metavars: tuple
    fmetas: tuple            # of FormulaMeta
    pre: object
    body: object             # main formula over metavars
    post: object
    realizer: object = None  # StTerm over metavars, or None if unbound
    domains: tuple = ()

    def __post_init__(self):
        declared = set(self.metavars)
        used = pattern_vars(self.pre) | pattern_vars(self.post) | free_vars(self.body)
        if used - declared:
            raise TheoryError(
                f"action axiom {self.name}: undeclared variables {sorted(used - declared)}")
        fdecl = {m.name for m in self.fmetas}
        fused = pattern_fmetas(self.pre) | pattern_fmetas(self.post)
        if fused - fdecl:
            raise TheoryError(
                f"action axiom {self.name}: undeclared formula variables {sorted(fused - fdecl)}")

    def domain(self, mv: str):
        for name, terms in self.domains:
            if name == mv:
                return terms
        return None

    def fmeta(self, name: str) -> FormulaMeta:
        for m in self.fmetas:
            if m.name == name:
                return m
        raise KeyError(name)

    def check_binding(self, binding: Mapping) -> None:
        for m in self.metavars:
            if m not in binding:
                raise TheoryError(f"action axiom {self.name}: unbound {m}")
            if _is_state(binding[m]):
                raise TheoryError(f"action axiom {self.name}: {m} expects a term")
            dom = self.domain(m)
            if dom is not None and binding[m] not in dom:
                raise TheoryError(f"action axiom {self.name}: {m} outside its range")
        for fm in self.fmetas:
            if fm.name not in binding:
                raise TheoryError(f"action axiom {self.name}: unbound formula {fm.name}")
            f = binding[fm.name]
            if not _is_state(f):
                raise TheoryError(f"action axiom {self.name}: {fm.name} expects a state formula")
            if fm.kind == "conj":
                for c in conjuncts(f):
                    ok = (isinstance(c, SAtom) and c.pred == fm.pred
                          and (fm.domain is None or all(a in fm.domain for a in c.args)))
                    if not ok:
                        raise TheoryError(
                            f"action axiom {self.name}: {fm.name} must be a conjunction of "
                            f"{fm.pred} atoms over locations, got {show_state(f)}")
        extra = set(binding) - set(self.metavars) - {m.name for m in self.fmetas}
        if extra:
            raise TheoryError(f"action axiom {self.name}: unexpected bindings {sorted(extra)}")

    def instantiate(self, binding: Mapping) -> Triple:
        self.check_binding(binding)
        terms = {m: binding[m] for m in self.metavars}
        return Triple(instantiate_state(self.pre, binding), subst_many(self.body, terms),
                      instantiate_state(self.post, binding))

    def instantiate_realizer(self, binding: Mapping):
        if self.realizer is None:
            raise TheoryError(f"action axiom {self.name} has no realizer")
        out = self.realizer
        for m in self.metavars:
            out = st.subst_st(out, m, st.term_to_st(binding[m]))
        return out


@dataclass(frozen=True)
class DefEq:
    name: str
    params: tuple
    lhs: Term
    rhs: Term

    def instantiate(self, binding: Mapping) -> Atom:
        missing = [p for p in self.params if p not in binding]
        if missing:
            raise TheoryError(f"equation {self.name}: unbound {', '.join(missing)}")
        m = {p: binding[p] for p in self.params}
        return eq(subst_many(self.lhs, m), subst_many(self.rhs, m))


@dataclass
class Theory:
    signature: Signature = field(default_factory=Signature)
    model: str | None = None
    model_options: dict = field(default_factory=dict)
    hschemas: list = field(default_factory=list)
    sschemas: dict = field(default_factory=dict)
    defeqs: dict = field(default_factory=dict)
    lconsts: dict = field(default_factory=dict)
    proofs: dict = field(default_factory=dict)
    h_limit: int = 24

    @property
    def mode(self) -> str:
        return self.signature.mode

    def hschema(self, name: str) -> HAxiomSchema:
        for h in self.hschemas:
            if h.name == name:
                return h
        raise KeyError(name)

    def add_hschema(self, h: HAxiomSchema) -> None:
        if any(x.name == h.name for x in self.hschemas):
            raise TheoryError(f"duplicate state axiom {h.name}")
        for f in h.hyps + (h.goal,):
            self.signature.check_state(f)
        self.hschemas.append(h)

    def add_sschema(self, s: SAxiomSchema) -> None:
        if s.name in self.sschemas:
            raise TheoryError(f"duplicate action axiom {s.name}")
        self.signature.check_main(s.body)
        self.sschemas[s.name] = s

    def add_defeq(self, d: DefEq) -> None:
        if d.name in self.defeqs:
            raise TheoryError(f"duplicate equation {d.name}")
        self.signature.check_term(d.lhs)
        self.signature.check_term(d.rhs)
        self.defeqs[d.name] = d

    def add_lconst(self, name: str, index_arity: int, ty) -> None:
        if name in self.lconsts:
            raise TheoryError(f"duplicate program constant {name}")
        self.lconsts[name] = (index_arity, ty)

    def check_realizers(self) -> None:
        """Every bound realizer must have the realizability type of its axiom body."""
        from .extractor import real_type
        for s in self.sschemas.values():
            if s.realizer is None:
                continue
            ctx = {m: st.D for m in s.metavars}
            want = real_type(s.body)
            try:
                got = st.typecheck(ctx, s.realizer, self, expected=want)
            except st.StTypeError as e:
                raise TheoryError(f"realizer of {s.name} is ill-typed: {e}") from None
            if got != want:
                raise TheoryError(
                    f"realizer of {s.name} has type {st.show_type(got)}, "
                    f"expected {st.show_type(want)}")
