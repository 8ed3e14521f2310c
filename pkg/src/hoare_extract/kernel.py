"""Proof kernel for stateful first-order logic and arithmetic.

Derivations are explicit trees.  ``check`` walks a tree top-down with the
ambient context and recomputes its conclusion from the premises and the
instantiation data stored on each node; nothing about the conclusion is
taken on trust.  State formulas must match syntactically, main formulas up
to renaming of bound variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .statelogic import StateLogicError, StateSequent, derive_h
from .syntax import (
    And, Atom, Bot, Context, EMPTY, EQ, Exists, ForallTriple, FunApp, ImpTriple,
    NEQ, Or, SAnd, SOr, SignatureError, StateFormula, Top, Triple, Var,
    ZERO, alpha_eq, eq, free_vars, show, show_main, show_state, snot, subst, succ,
)
from .theory import TheoryError


# -------------------------------------------------------------------- errors


class KernelError(Exception):
    def __init__(self, msg: str, node=None, sequent=None):
        self.node = node
        self.sequent = sequent
        super().__init__(msg)


class RuleMismatch(KernelError):
    pass


class StateMismatch(KernelError):
    pass


class EigenvariableViolation(KernelError):
    pass


class UnprovableStateSequent(KernelError):
    pass


class UnknownLabel(KernelError):
    pass


class UnknownSchema(KernelError):
    pass


class IllFormed(KernelError):
    pass


# ------------------------------------------------------------------ sequents


@dataclass(frozen=True)
class SSequent:
    ctx: Context
    triple: Triple

    def show(self, unicode: bool = True) -> str:
        turn = "⊢_S" if unicode else "|-"
        hyps = ", ".join(f"{lab}:{show_main(f, unicode)}" for lab, f in self.ctx)
        body = show(self.triple, unicode)
        return f"{hyps} {turn} {body}" if hyps else f"{turn} {body}"

    def __str__(self):
        return self.show()


# --------------------------------------------------------------------- nodes
# Every node stores exactly the data needed to recompute its conclusion.


@dataclass(frozen=True, eq=True)
class Hyp:
    label: str
    state: StateFormula


@dataclass(frozen=True)
class TopAx:
    state: StateFormula


@dataclass(frozen=True)
class AndI:
    d1: Any
    d2: Any


@dataclass(frozen=True)
class AndEL:
    d: Any


@dataclass(frozen=True)
class AndER:
    d: Any


@dataclass(frozen=True)
class OrIL:
    d: Any
    right: Any


@dataclass(frozen=True)
class OrIR:
    d: Any
    left: Any


@dataclass(frozen=True)
class OrE:
    d1: Any
    u: str
    d2: Any
    v: str
    d3: Any


@dataclass(frozen=True)
class ImpI:
    u: str
    ante: Any
    d: Any
    outer: StateFormula


@dataclass(frozen=True)
class ImpE:
    d1: Any
    d2: Any


@dataclass(frozen=True)
class BotE:
    d: Any
    target: Any
    post: StateFormula


@dataclass(frozen=True)
class ForallI:
    y: str
    d: Any
    outer: StateFormula
    bound: str | None = None


@dataclass(frozen=True)
class ForallE:
    d: Any
    witness: Any


@dataclass(frozen=True)
class ExistsI:
    witness: Any
    var: str
    body: Any
    d: Any


@dataclass(frozen=True)
class ExistsE:
    d1: Any
    y: str
    u: str
    d2: Any


@dataclass(frozen=True)
class Cons:
    d: Any
    pre: StateFormula | None = None
    post: StateFormula | None = None
    pre_hints: tuple | None = None     # None: automatic instantiation
    post_hints: tuple | None = None


@dataclass(frozen=True)
class Cond:
    case_a: StateFormula
    case_b: StateFormula
    hints: tuple | None
    d1: Any
    d2: Any


@dataclass(frozen=True)
class SAxiom:
    name: str
    binding: tuple       # sorted (name, term-or-state-formula) pairs

    @staticmethod
    def of(name: str, **binding) -> "SAxiom":
        return SAxiom(name, tuple(sorted(binding.items())))


@dataclass(frozen=True)
class EqRefl:
    term: Any
    state: StateFormula


@dataclass(frozen=True)
class EqSym:
    d: Any


@dataclass(frozen=True)
class EqTrans:
    d1: Any
    d2: Any


@dataclass(frozen=True)
class Ext:
    d_eq: Any
    d_body: Any
    var: str
    body: Any
    post: StateFormula


@dataclass(frozen=True)
class SuccNonzero:
    term: Any
    state: StateFormula


@dataclass(frozen=True)
class SuccInj:
    d: Any


@dataclass(frozen=True)
class DefEqAx:
    name: str
    binding: tuple
    state: StateFormula


@dataclass(frozen=True)
class Ind:
    d_base: Any
    x: str
    u: str
    formula: Any
    d_step: Any
    outer: StateFormula


@dataclass(frozen=True)
class WhileRule:
    x: str
    u: str
    hole: str
    cond: StateFormula
    d1: Any
    d2: Any
    d3: Any


Derivation = Any

SA_ONLY = (EqRefl, EqSym, EqTrans, Ext, SuccNonzero, SuccInj, DefEqAx, Ind, WhileRule)


# ------------------------------------------------------------------ checking


def check(d: Derivation, theory, ctx: Context = EMPTY) -> SSequent:
    """Return the conclusion of d in context ctx, or raise a KernelError."""
    return SSequent(ctx, _Checker(theory).run(d, ctx))


def conclusion(d: Derivation, theory, ctx: Context = EMPTY) -> Triple:
    return _Checker(theory).run(d, ctx)


class _Checker:
    def __init__(self, theory):
        self.th = theory
        self.sig = theory.signature

    # well-formedness of stored data
    def _wf_state(self, f, node):
        try:
            self.sig.check_state(f)
        except SignatureError as e:
            raise IllFormed(str(e), node) from None

    def _wf_main(self, f, node):
        try:
            self.sig.check_main(f)
        except SignatureError as e:
            raise IllFormed(str(e), node) from None

    def _wf_term(self, t, node):
        try:
            self.sig.check_term(t)
        except SignatureError as e:
            raise IllFormed(str(e), node) from None

    def _h(self, hyps, goal, hints, node, what):
        seq = StateSequent(tuple(hyps), goal)
        # hint bindings are stored as sorted pairs so nodes stay hashable
        hints = tuple((name, dict(b)) for name, b in (hints or ()))
        try:
            res = derive_h(seq, self.th.hschemas, hints, True, self.th.h_limit)
        except StateLogicError as e:
            raise UnprovableStateSequent(f"{what}: {e}", node, seq) from None
        if not res.ok:
            raise UnprovableStateSequent(f"{what}: cannot derive {seq}", node, seq)

    def _same_state(self, a, b, node, what):
        if a != b:
            raise StateMismatch(
                f"{what}: {show_state(a)} does not match {show_state(b)}", node)

    def _same_main(self, a, b, node, what):
        if not alpha_eq(a, b):
            raise RuleMismatch(f"{what}: expected {show_main(a)}, found {show_main(b)}", node)

    def _shape(self, node, what, got):
        return RuleMismatch(f"{what} expected, found {show_main(got)}", node)

    def run(self, d, ctx: Context) -> Triple:
        if isinstance(d, SA_ONLY) and self.th.mode != "sa":
            raise RuleMismatch(f"{type(d).__name__} is only available in arithmetic mode", d)
        method = getattr(self, "_" + type(d).__name__, None)
        if method is None:
            raise RuleMismatch(f"not a derivation node: {type(d).__name__}", d)
        return method(d, ctx)

    # ---- propositional rules

    def _Hyp(self, d: Hyp, ctx):
        if d.label not in ctx:
            raise UnknownLabel(f"unknown hypothesis label {d.label}", d)
        self._wf_state(d.state, d)
        return Triple(d.state, ctx[d.label], d.state)

    def _TopAx(self, d: TopAx, ctx):
        self._wf_state(d.state, d)
        return Triple(d.state, Top(), d.state)

    def _AndI(self, d: AndI, ctx):
        t1 = self.run(d.d1, ctx)
        t2 = self.run(d.d2, ctx)
        self._same_state(t1.post, t2.pre, d, "mid-state of conjunction")
        return Triple(t1.pre, And(t1.body, t2.body), t2.post)

    def _AndEL(self, d: AndEL, ctx):
        t = self.run(d.d, ctx)
        if not isinstance(t.body, And):
            raise self._shape(d, "conjunction", t.body)
        return Triple(t.pre, t.body.left, t.post)

    def _AndER(self, d: AndER, ctx):
        t = self.run(d.d, ctx)
        if not isinstance(t.body, And):
            raise self._shape(d, "conjunction", t.body)
        return Triple(t.pre, t.body.right, t.post)

    def _OrIL(self, d: OrIL, ctx):
        t = self.run(d.d, ctx)
        self._wf_main(d.right, d)
        return Triple(t.pre, Or(t.body, d.right), t.post)

    def _OrIR(self, d: OrIR, ctx):
        t = self.run(d.d, ctx)
        self._wf_main(d.left, d)
        return Triple(t.pre, Or(d.left, t.body), t.post)

    def _OrE(self, d: OrE, ctx):
        t1 = self.run(d.d1, ctx)
        if not isinstance(t1.body, Or):
            raise self._shape(d, "disjunction", t1.body)
        t2 = self.run(d.d2, ctx.extend(d.u, t1.body.left))
        t3 = self.run(d.d3, ctx.extend(d.v, t1.body.right))
        self._same_state(t1.post, t2.pre, d, "left case pre-state")
        self._same_state(t1.post, t3.pre, d, "right case pre-state")
        self._same_main(t2.body, t3.body, d, "case conclusions")
        self._same_state(t2.post, t3.post, d, "case post-states")
        return Triple(t1.pre, t2.body, t2.post)

    def _ImpI(self, d: ImpI, ctx):
        self._wf_main(d.ante, d)
        self._wf_state(d.outer, d)
        t = self.run(d.d, ctx.extend(d.u, d.ante))
        return Triple(d.outer, ImpTriple(d.ante, t), d.outer)

    def _ImpE(self, d: ImpE, ctx):
        t1 = self.run(d.d1, ctx)
        if not isinstance(t1.body, ImpTriple):
            raise self._shape(d, "implication", t1.body)
        t2 = self.run(d.d2, ctx)
        inner = t1.body.cons
        self._same_state(t1.post, t2.pre, d, "argument pre-state")
        self._same_main(t1.body.ante, t2.body, d, "argument")
        self._same_state(t2.post, inner.pre, d, "argument post-state")
        return Triple(t1.pre, inner.body, inner.post)

    def _BotE(self, d: BotE, ctx):
        t = self.run(d.d, ctx)
        if not isinstance(t.body, Bot):
            raise self._shape(d, "falsum", t.body)
        self._wf_main(d.target, d)
        self._wf_state(d.post, d)
        return Triple(t.pre, d.target, d.post)

    # ---- quantifiers

    def _ForallI(self, d: ForallI, ctx):
        self._wf_state(d.outer, d)
        t = self.run(d.d, ctx)
        if d.y in ctx.free_vars():
            raise EigenvariableViolation(f"{d.y} is free in the context", d)
        x = d.bound or d.y
        if x != d.y:
            if x in free_vars(t):
                raise EigenvariableViolation(
                    f"bound variable {x} already occurs free in the premise", d)
            t = subst(t, d.y, Var(x))
        return Triple(d.outer, ForallTriple(x, t), d.outer)

    def _ForallE(self, d: ForallE, ctx):
        t = self.run(d.d, ctx)
        if not isinstance(t.body, ForallTriple):
            raise self._shape(d, "universal", t.body)
        self._wf_term(d.witness, d)
        x, inner = t.body.var, t.body.body
        self._same_state(subst(inner.pre, x, d.witness), t.post, d,
                         "post-state before instantiation")
        return Triple(t.pre, subst(inner.body, x, d.witness), subst(inner.post, x, d.witness))

    def _ExistsI(self, d: ExistsI, ctx):
        t = self.run(d.d, ctx)
        self._wf_term(d.witness, d)
        self._wf_main(d.body, d)
        self._same_main(subst(d.body, d.var, d.witness), t.body, d, "witness instance")
        return Triple(t.pre, Exists(d.var, d.body), t.post)

    def _ExistsE(self, d: ExistsE, ctx):
        t1 = self.run(d.d1, ctx)
        if not isinstance(t1.body, Exists):
            raise self._shape(d, "existential", t1.body)
        x, a = t1.body.var, t1.body.body
        if d.y != x and d.y in free_vars(a):
            raise EigenvariableViolation(f"{d.y} is free in {show_main(t1.body)}", d)
        t2 = self.run(d.d2, ctx.extend(d.u, subst(a, x, Var(d.y))))
        self._same_state(t1.post, t2.pre, d, "mid-state")
        if d.y in free_vars(t2.body) | free_vars(t1.pre) | free_vars(t1.post) | free_vars(t2.post):
            raise EigenvariableViolation(f"{d.y} escapes into the conclusion", d)
        if d.y in ctx.free_vars():
            raise EigenvariableViolation(f"{d.y} is free in the context", d)
        return Triple(t1.pre, t2.body, t2.post)

    # ---- Hoare rules

    def _Cons(self, d: Cons, ctx):
        t = self.run(d.d, ctx)
        pre = t.pre if d.pre is None else d.pre
        post = t.post if d.post is None else d.post
        self._wf_state(pre, d)
        self._wf_state(post, d)
        if pre != t.pre:
            self._h([pre], t.pre, d.pre_hints, d, "strengthening the precondition")
        if post != t.post:
            self._h([t.post], post, d.post_hints, d, "weakening the postcondition")
        return Triple(pre, t.body, post)

    def _Cond(self, d: Cond, ctx):
        self._wf_state(d.case_a, d)
        self._wf_state(d.case_b, d)
        t1 = self.run(d.d1, ctx)
        t2 = self.run(d.d2, ctx)
        if not (isinstance(t1.pre, SAnd) and t1.pre.left == d.case_a):
            raise StateMismatch(
                f"first case must start from {show_state(d.case_a)} ∧ γ, "
                f"found {show_state(t1.pre)}", d)
        if not (isinstance(t2.pre, SAnd) and t2.pre.left == d.case_b):
            raise StateMismatch(
                f"second case must start from {show_state(d.case_b)} ∧ γ, "
                f"found {show_state(t2.pre)}", d)
        gamma = t1.pre.right
        self._same_state(gamma, t2.pre.right, d, "shared precondition")
        self._same_main(t1.body, t2.body, d, "case conclusions")
        self._same_state(t1.post, t2.post, d, "case post-states")
        self._h([], SOr(d.case_a, d.case_b), d.hints, d, "case split")
        return Triple(gamma, t1.body, t1.post)

    def _SAxiom(self, d: SAxiom, ctx):
        sch = self.th.sschemas.get(d.name)
        if sch is None:
            raise UnknownSchema(f"unknown action axiom {d.name}", d)
        binding = dict(d.binding)
        for v in binding.values():
            if isinstance(v, (Var, FunApp)):
                self._wf_term(v, d)
            else:
                self._wf_state(v, d)
        try:
            return sch.instantiate(binding)
        except TheoryError as e:
            raise RuleMismatch(str(e), d) from None

    # ---- arithmetic

    def _eq_parts(self, t: Triple, d):
        b = t.body
        if not (isinstance(b, Atom) and b.pred == EQ and len(b.args) == 2):
            raise self._shape(d, "equation", b)
        return b.args

    def _EqRefl(self, d: EqRefl, ctx):
        self._wf_term(d.term, d)
        self._wf_state(d.state, d)
        return Triple(d.state, eq(d.term, d.term), d.state)

    def _EqSym(self, d: EqSym, ctx):
        t = self.run(d.d, ctx)
        s, r = self._eq_parts(t, d)
        return Triple(t.pre, eq(r, s), t.post)

    def _EqTrans(self, d: EqTrans, ctx):
        t1, t2 = self.run(d.d1, ctx), self.run(d.d2, ctx)
        r, s = self._eq_parts(t1, d)
        s2, u = self._eq_parts(t2, d)
        self._same_state(t1.post, t2.pre, d, "mid-state")
        if s != s2:
            raise RuleMismatch(f"middle terms differ: {show(s)} vs {show(s2)}", d)
        return Triple(t1.pre, eq(r, u), t2.post)

    def _Ext(self, d: Ext, ctx):
        self._wf_main(d.body, d)
        self._wf_state(d.post, d)
        t1, t2 = self.run(d.d_eq, ctx), self.run(d.d_body, ctx)
        s, t = self._eq_parts(t1, d)
        self._same_state(t1.post, t2.pre, d, "mid-state")
        self._same_main(subst(d.body, d.var, s), t2.body, d, "abstraction at the left term")
        self._same_state(subst(d.post, d.var, s), t2.post, d, "abstracted post-state")
        return Triple(t1.pre, subst(d.body, d.var, t), subst(d.post, d.var, t))

    def _SuccNonzero(self, d: SuccNonzero, ctx):
        self._wf_term(d.term, d)
        self._wf_state(d.state, d)
        return Triple(d.state, Atom(NEQ, (succ(d.term), ZERO)), d.state)

    def _SuccInj(self, d: SuccInj, ctx):
        t = self.run(d.d, ctx)
        a, b = self._eq_parts(t, d)
        ok = all(isinstance(x, FunApp) and x.symbol == "succ" for x in (a, b))
        if not ok:
            raise self._shape(d, "equation between successors", t.body)
        return Triple(t.pre, eq(a.args[0], b.args[0]), t.post)

    def _DefEqAx(self, d: DefEqAx, ctx):
        de = self.th.defeqs.get(d.name)
        if de is None:
            raise UnknownSchema(f"unknown defining equation {d.name}", d)
        self._wf_state(d.state, d)
        binding = dict(d.binding)
        for v in binding.values():
            self._wf_term(v, d)
        try:
            atom = de.instantiate(binding)
        except TheoryError as e:
            raise RuleMismatch(str(e), d) from None
        return Triple(d.state, atom, d.state)

    def _Ind(self, d: Ind, ctx):
        self._wf_main(d.formula, d)
        self._wf_state(d.outer, d)
        x = d.x
        if x in ctx.free_vars():
            raise EigenvariableViolation(f"{x} is free in the context", d)
        tb = self.run(d.d_base, ctx)
        ts = self.run(d.d_step, ctx.extend(d.u, d.formula))
        alpha = tb.pre
        if x in free_vars(alpha):
            raise EigenvariableViolation(f"{x} is free in the precondition", d)
        beta = ts.pre
        self._same_main(subst(d.formula, x, ZERO), tb.body, d, "base case")
        self._same_state(subst(beta, x, ZERO), tb.post, d, "base case post-state")
        self._same_main(subst(d.formula, x, succ(Var(x))), ts.body, d, "step case")
        self._same_state(subst(beta, x, succ(Var(x))), ts.post, d, "step case post-state")
        return Triple(d.outer, ForallTriple(x, Triple(alpha, d.formula, beta)), d.outer)

    def _WhileRule(self, d: WhileRule, ctx):
        self._wf_state(d.cond, d)
        if d.u not in ctx:
            raise UnknownLabel(f"unknown hypothesis label {d.u}", d)
        x = d.x
        ax = ctx[d.u]
        gamma = ctx.without(d.u)
        if x in gamma.free_vars():
            raise EigenvariableViolation(f"{x} is free in the context", d)
        if x in free_vars(d.cond) or d.hole == x:
            raise EigenvariableViolation(f"{x} occurs in the loop condition", d)
        nx = succ(Var(x))
        a_next = subst(ax, x, nx)
        t1 = self.run(d.d1, gamma.extend(d.u, a_next))
        t2 = self.run(d.d2, gamma.extend(d.u, a_next))
        t3 = self.run(d.d3, gamma.extend(d.u, subst(ax, x, ZERO)))
        alpha = t1.post
        g_next = subst(d.cond, d.hole, nx)
        a1 = subst(alpha, x, nx)
        self._same_state(SAnd(g_next, a1), t1.pre, d, "loop body precondition")
        self._same_main(ax, t1.body, d, "loop body invariant")
        self._same_state(SAnd(snot(g_next), a1), t2.pre, d, "loop exit precondition")
        self._same_state(subst(alpha, x, ZERO), t3.pre, d, "loop base precondition")
        self._same_main(t2.body, t3.body, d, "loop results")
        self._same_state(t2.post, t3.post, d, "loop post-states")
        if x in free_vars(t2.body) | free_vars(t2.post):
            raise EigenvariableViolation(f"{x} is free in the loop result", d)
        return Triple(alpha, t2.body, t2.post)


# ------------------------------------------------------------ derived rules


def derive_comp(d1, d2):
    """Hoare composition: conjunction introduction followed by projection."""
    return AndER(AndI(d1, d2))


def check_comp(d1, d2, theory, ctx: Context = EMPTY) -> SSequent:
    t1, t2 = conclusion(d1, theory, ctx), conclusion(d2, theory, ctx)
    if not (isinstance(t1.body, Top) and isinstance(t2.body, Top)):
        raise RuleMismatch("composition needs two premises about ⊤", None)
    return check(derive_comp(d1, d2), theory, ctx)


def derive_ext(pl_eq, var: str, pre, body, post, d_body, theory=None):
    """Replace s by t in a derivation of <pre(s)> body(s) <post(s)>.

    ``pl_eq`` is an arithmetic proof of s = t.  The result ends in
    <pre(t)> body(t) <post(t)>, built from two extensionality steps: the
    first moves the body from s to t, the second moves the precondition.
    """
    from .pl import PEqSym, embed_pl, pl_conclusion

    eq_f = pl_conclusion(pl_eq, theory)
    if not (isinstance(eq_f, Atom) and eq_f.pred == EQ):
        raise RuleMismatch("extensionality needs a proof of an equation", None)
    s, t = eq_f.args
    pre_s, pre_t = subst(pre, var, s), subst(pre, var, t)
    # <pre(s)> body(t) <post(t)>
    ext1 = Ext(embed_pl(pl_eq, pre_s), d_body, var, body, post)
    # <pre(t)> T <pre(s)>, via t = s and the trivial <pre(t)> T <pre(t)>
    ext2 = Ext(embed_pl(PEqSym(pl_eq), pre_t), TopAx(pre_t), var, Top(), pre)
    return AndER(AndI(ext2, ext1))
