"""Classical propositional state sequents with schematic state axioms.

A sequent ``hyps |-_H goal`` is decided by a truth table over the ground
state atoms occurring in it, after adding instances of the theory's
state-axiom schemas.  Instances come from explicit hints or from matching
schema atoms against the atoms of the sequent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .syntax import (
    FunApp, SAnd, SAtom, SBot, SImp, SOr, STop, StateFormula, Term, Var,
    show_state, subst_many, term_vars,
)


class StateLogicError(Exception):
    pass


class UnboundMetavar(StateLogicError):
    pass


class DomainViolation(StateLogicError):
    pass


class TooManyAtoms(StateLogicError):
    """Raised when the truth table would exceed the configured atom limit."""


class UnprovableStateSequent(StateLogicError):
    def __init__(self, seq: "StateSequent", note: str = ""):
        self.seq = seq
        msg = f"state sequent not derivable: {seq}"
        if note:
            msg += f" ({note})"
        super().__init__(msg)


@dataclass(frozen=True)
class StateSequent:
    hyps: tuple
    goal: StateFormula

    def __str__(self):
        hs = ", ".join(show_state(h) for h in self.hyps)
        return f"{hs} ⊢_H {show_state(self.goal)}".strip()

    def as_formula(self) -> StateFormula:
        out = self.goal
        for h in reversed(self.hyps):
            out = SImp(h, out)
        return out


@dataclass(frozen=True)
class HAxiomSchema:
    name: str
    metavars: tuple
    hyps: tuple
    goal: StateFormula
    # optional finite ranges for metavariables, e.g. locations {1,2,3}
    domains: tuple = ()

    def __post_init__(self):
        used: set[str] = set()
        for f in self.hyps + (self.goal,):
            used |= state_vars(f)
        undeclared = used - set(self.metavars)
        if undeclared:
            raise StateLogicError(
                f"schema {self.name}: undeclared variables {sorted(undeclared)}")

    def domain(self, mv: str):
        for name, terms in self.domains:
            if name == mv:
                return terms
        return None


def state_vars(f: StateFormula) -> set[str]:
    match f:
        case STop() | SBot():
            return set()
        case SAtom(_, args):
            out: set[str] = set()
            for a in args:
                out |= term_vars(a)
            return out
        case SAnd(l, r) | SOr(l, r) | SImp(l, r):
            return state_vars(l) | state_vars(r)
    raise TypeError(f)


def state_atoms(f: StateFormula, out: dict | None = None) -> dict:
    """Ordered set (dict) of atoms in first-occurrence order."""
    if out is None:
        out = {}
    match f:
        case SAtom():
            out.setdefault(f, None)
        case SAnd(l, r) | SOr(l, r) | SImp(l, r):
            state_atoms(l, out)
            state_atoms(r, out)
    return out


def instantiate_haxiom(schema: HAxiomSchema, binding: Mapping[str, Term]) -> StateSequent:
    missing = [m for m in schema.metavars if m not in binding]
    if missing:
        raise UnboundMetavar(f"schema {schema.name}: unbound {', '.join(missing)}")
    for m in schema.metavars:
        dom = schema.domain(m)
        if dom is not None and binding[m] not in dom:
            raise DomainViolation(
                f"schema {schema.name}: {m} must range over "
                f"{{{', '.join(_show_t(t) for t in dom)}}}")
    m = {k: binding[k] for k in schema.metavars}
    return StateSequent(tuple(subst_many(h, m) for h in schema.hyps),
                        subst_many(schema.goal, m))


def _show_t(t):
    from .syntax import show_term
    return show_term(t)


# ------------------------------------------------------------------ matching


def match_term(pat: Term, t: Term, mvs: frozenset, binding: dict) -> bool:
    match pat:
        case Var(n) if n in mvs:
            if n in binding:
                return binding[n] == t
            binding[n] = t
            return True
        case Var():
            return pat == t
        case FunApp(f, ps):
            if not isinstance(t, FunApp) or t.symbol != f or len(t.args) != len(ps):
                return False
            return all(match_term(p, a, mvs, binding) for p, a in zip(ps, t.args))
    return False


def match_atom(pat: SAtom, atom: SAtom, mvs: frozenset, binding: dict) -> dict | None:
    if pat.pred != atom.pred or len(pat.args) != len(atom.args):
        return None
    b = dict(binding)
    for p, a in zip(pat.args, atom.args):
        if not match_term(p, a, mvs, b):
            return None
    return b


def sequent_terms(seq: StateSequent) -> list:
    seen: dict = {}
    for f in seq.hyps + (seq.goal,):
        for a in state_atoms(f):
            for t in a.args:
                seen.setdefault(t, None)
    return list(seen)


def auto_instances(seq: StateSequent, schema: HAxiomSchema, limit: int = 512) -> list[dict]:
    """Bindings obtained by matching schema atoms against sequent atoms."""
    mvs = frozenset(schema.metavars)
    if not mvs:
        return [{}]
    targets = []
    for f in seq.hyps + (seq.goal,):
        targets.extend(state_atoms(f))
    pats = []
    for f in schema.hyps + (schema.goal,):
        pats.extend(state_atoms(f))
    partial: list[dict] = []
    for p in pats:
        for a in targets:
            b = match_atom(p, a, mvs, {})
            if b is not None and b not in partial:
                partial.append(b)
    terms = sequent_terms(seq)
    out: list[dict] = []
    for b in partial:
        free = [m for m in schema.metavars if m not in b]
        pools = []
        for m in free:
            dom = schema.domain(m)
            pools.append(list(dom) if dom is not None else terms)
        for combo in itertools.product(*pools):
            full = dict(b)
            full.update(zip(free, combo))
            if _in_domains(schema, full) and full not in out:
                out.append(full)
                if len(out) >= limit:
                    return out
    return out


def _in_domains(schema: HAxiomSchema, binding: dict) -> bool:
    for m in schema.metavars:
        dom = schema.domain(m)
        if dom is not None and binding[m] not in dom:
            return False
    return True


# ------------------------------------------------------------- truth tables


def _columns(n: int) -> tuple[list[int], int]:
    rows = 1 << n
    full = (1 << rows) - 1
    cols = []
    for i in range(n):
        half = 1 << i
        pat = ((1 << half) - 1) << half
        width = half << 1
        while width < rows:
            pat |= pat << width
            width <<= 1
        cols.append(pat & full)
    return cols, full


def _eval_bits(f: StateFormula, col: dict, full: int) -> int:
    match f:
        case STop():
            return full
        case SBot():
            return 0
        case SAtom():
            return col[f]
        case SAnd(l, r):
            return _eval_bits(l, col, full) & _eval_bits(r, col, full)
        case SOr(l, r):
            return _eval_bits(l, col, full) | _eval_bits(r, col, full)
        case SImp(l, r):
            return (full ^ _eval_bits(l, col, full)) | _eval_bits(r, col, full)
    raise TypeError(f)


def tautology(premises: Sequence[StateFormula], goal: StateFormula, limit: int = 24) -> bool:
    """True iff the conjunction of premises classically entails goal."""
    atoms: dict = {}
    for f in list(premises) + [goal]:
        state_atoms(f, atoms)
    if len(atoms) > limit:
        raise TooManyAtoms(f"{len(atoms)} distinct state atoms exceed the limit of {limit}")
    cols, full = _columns(len(atoms))
    col = dict(zip(atoms, cols))
    prem = full
    for p in premises:
        prem &= _eval_bits(p, col, full)
        if prem == 0:
            return True
    return prem & ~_eval_bits(goal, col, full) & full == 0


# ----------------------------------------------------------------- deciding


@dataclass
class HResult:
    ok: bool
    instances: list = field(default_factory=list)


def derive_h(seq: StateSequent, axioms: Iterable[HAxiomSchema],
             hints: Sequence = (), auto: bool = True, limit: int = 24) -> HResult:
    """Decide ``seq`` and report the axiom instances that were in scope.

    With explicit hints only the hinted instances are used; otherwise the
    sequent is tried bare and then with every automatically matched instance.
    """
    axioms = list(axioms)
    by_name = {a.name: a for a in axioms}
    if hints:
        insts = []
        for name, binding in hints:
            if name not in by_name:
                raise StateLogicError(f"unknown state axiom {name!r}")
            insts.append(instantiate_haxiom(by_name[name], binding))
        return HResult(_holds(seq, insts, limit), insts)
    if tautology(seq.hyps, seq.goal, limit):
        return HResult(True, [])
    if not auto:
        return HResult(False, [])
    insts = []
    for ax in axioms:
        for b in auto_instances(seq, ax):
            inst = instantiate_haxiom(ax, b)
            if inst not in insts:
                insts.append(inst)
    return HResult(_holds(seq, insts, limit), insts)


def _holds(seq: StateSequent, insts: list, limit: int) -> bool:
    premises = list(seq.hyps) + [i.as_formula() for i in insts]
    return tautology(premises, seq.goal, limit)


def check_h(seq: StateSequent, axioms: Iterable[HAxiomSchema] = (),
            hints: Sequence = (), auto: bool = True, limit: int = 24) -> bool:
    return derive_h(seq, axioms, hints, auto, limit).ok


def check_h_or_fail(seq: StateSequent, axioms: Iterable[HAxiomSchema] = (),
                    hints: Sequence = (), auto: bool = True, limit: int = 24) -> HResult:
    res = derive_h(seq, axioms, hints, auto, limit)
    if not res.ok:
        raise UnprovableStateSequent(seq)
    return res
