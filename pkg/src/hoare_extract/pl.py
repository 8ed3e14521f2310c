"""Ordinary natural deduction (predicate logic and Heyting arithmetic) and
its embedding into the stateful calculus.

A formula A and a state formula α give the main formula A_α, which wraps
every implication and universal in the triple ⟨α⟩-⟨α⟩.  ``embed_pl`` turns a
proof of Γ ⊢ A into a derivation of Γ_α ⊢_S ⟨α⟩A_α⟨α⟩ rule by rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from . import kernel as K
from .syntax import (
    And, Atom, Bot, Context, EMPTY, EQ, Exists, Forall, ForallTriple, FunApp, Imp,
    ImpTriple, NEQ, Or, SignatureError, Top, Triple, Var, ZERO, alpha_eq,
    all_vars, eq, free_vars, fresh, show_main, subst, succ,
)


class PLError(Exception):
    def __init__(self, msg: str, node=None):
        self.node = node
        super().__init__(msg)


class EmbedError(PLError):
    pass


# --------------------------------------------------------------------- nodes


@dataclass(frozen=True)
class PHyp:
    label: str


@dataclass(frozen=True)
class PTopI:
    pass


@dataclass(frozen=True)
class PAndI:
    d1: Any
    d2: Any


@dataclass(frozen=True)
class PAndEL:
    d: Any


@dataclass(frozen=True)
class PAndER:
    d: Any


@dataclass(frozen=True)
class POrIL:
    d: Any
    right: Any


@dataclass(frozen=True)
class POrIR:
    d: Any
    left: Any


@dataclass(frozen=True)
class POrE:
    d1: Any
    u: str
    d2: Any
    v: str
    d3: Any


@dataclass(frozen=True)
class PImpI:
    u: str
    ante: Any
    d: Any


@dataclass(frozen=True)
class PImpE:
    d1: Any
    d2: Any


@dataclass(frozen=True)
class PBotE:
    d: Any
    target: Any


@dataclass(frozen=True)
class PForallI:
    y: str
    d: Any
    bound: str | None = None


@dataclass(frozen=True)
class PForallE:
    d: Any
    witness: Any


@dataclass(frozen=True)
class PExistsI:
    witness: Any
    var: str
    body: Any
    d: Any


@dataclass(frozen=True)
class PExistsE:
    d1: Any
    y: str
    u: str
    d2: Any


# arithmetic


@dataclass(frozen=True)
class PEqRefl:
    term: Any


@dataclass(frozen=True)
class PEqSym:
    d: Any


@dataclass(frozen=True)
class PEqTrans:
    d1: Any
    d2: Any


@dataclass(frozen=True)
class PExt:
    d_eq: Any
    d_body: Any
    var: str
    body: Any


@dataclass(frozen=True)
class PSuccNonzero:
    term: Any


@dataclass(frozen=True)
class PSuccInj:
    d: Any


@dataclass(frozen=True)
class PDefEq:
    name: str
    binding: tuple


@dataclass(frozen=True)
class PInd:
    d_base: Any
    x: str
    u: str
    formula: Any
    d_step: Any


HA_ONLY = (PEqRefl, PEqSym, PEqTrans, PExt, PSuccNonzero, PSuccInj, PDefEq, PInd)


# ------------------------------------------------------------------ checking


def neg(a):
    return Imp(a, Bot())


def pl_check(d, theory=None, ctx: Context = EMPTY):
    """Conclusion formula of a natural-deduction proof in context ctx."""
    return _PL(theory).run(d, ctx)


def pl_conclusion(d, theory=None, ctx: Context = EMPTY):
    return pl_check(d, theory, ctx)


def _eq_args(f, node):
    if not (isinstance(f, Atom) and f.pred == EQ and len(f.args) == 2):
        raise PLError(f"equation expected, found {show_main(f)}", node)
    return f.args


class _PL:
    def __init__(self, theory):
        self.th = theory

    def _wf(self, f, node, term=False):
        if self.th is None:
            return
        try:
            if term:
                self.th.signature.check_term(f)
            else:
                self.th.signature.check_main(f, pl=True)
        except SignatureError as e:
            raise PLError(str(e), node) from None

    def _same(self, a, b, node, what):
        if not alpha_eq(a, b):
            raise PLError(f"{what}: expected {show_main(a)}, found {show_main(b)}", node)

    def run(self, d, ctx):
        if isinstance(d, HA_ONLY) and self.th is not None and self.th.mode != "sa":
            raise PLError(f"{type(d).__name__} needs arithmetic mode", d)
        match d:
            case PHyp(u):
                if u not in ctx:
                    raise PLError(f"unknown hypothesis label {u}", d)
                return ctx[u]
            case PTopI():
                return Top()
            case PAndI(a, b):
                return And(self.run(a, ctx), self.run(b, ctx))
            case PAndEL(a) | PAndER(a):
                f = self.run(a, ctx)
                if not isinstance(f, And):
                    raise PLError(f"conjunction expected, found {show_main(f)}", d)
                return f.left if isinstance(d, PAndEL) else f.right
            case POrIL(a, right):
                self._wf(right, d)
                return Or(self.run(a, ctx), right)
            case POrIR(a, left):
                self._wf(left, d)
                return Or(left, self.run(a, ctx))
            case POrE(a, u, b, v, c):
                f = self.run(a, ctx)
                if not isinstance(f, Or):
                    raise PLError(f"disjunction expected, found {show_main(f)}", d)
                g1 = self.run(b, ctx.extend(u, f.left))
                g2 = self.run(c, ctx.extend(v, f.right))
                self._same(g1, g2, d, "case conclusions")
                return g1
            case PImpI(u, ante, a):
                self._wf(ante, d)
                return Imp(ante, self.run(a, ctx.extend(u, ante)))
            case PImpE(a, b):
                f = self.run(a, ctx)
                if not isinstance(f, Imp):
                    raise PLError(f"implication expected, found {show_main(f)}", d)
                self._same(f.left, self.run(b, ctx), d, "argument")
                return f.right
            case PBotE(a, target):
                f = self.run(a, ctx)
                if not isinstance(f, Bot):
                    raise PLError(f"falsum expected, found {show_main(f)}", d)
                self._wf(target, d)
                return target
            case PForallI(y, a, bound):
                f = self.run(a, ctx)
                if y in ctx.free_vars():
                    raise PLError(f"{y} is free in the context", d)
                x = bound or y
                if x != y:
                    if x in free_vars(f):
                        raise PLError(f"bound variable {x} already occurs free", d)
                    f = subst(f, y, Var(x))
                return Forall(x, f)
            case PForallE(a, t):
                f = self.run(a, ctx)
                if not isinstance(f, Forall):
                    raise PLError(f"universal expected, found {show_main(f)}", d)
                self._wf(t, d, term=True)
                return subst(f.body, f.var, t)
            case PExistsI(t, x, body, a):
                self._wf(t, d, term=True)
                self._wf(body, d)
                self._same(subst(body, x, t), self.run(a, ctx), d, "witness instance")
                return Exists(x, body)
            case PExistsE(a, y, u, b):
                f = self.run(a, ctx)
                if not isinstance(f, Exists):
                    raise PLError(f"existential expected, found {show_main(f)}", d)
                if y != f.var and y in free_vars(f.body):
                    raise PLError(f"{y} is free in {show_main(f)}", d)
                g = self.run(b, ctx.extend(u, subst(f.body, f.var, Var(y))))
                if y in free_vars(g) or y in ctx.free_vars():
                    raise PLError(f"eigenvariable {y} escapes", d)
                return g
            case PEqRefl(t):
                self._wf(t, d, term=True)
                return eq(t, t)
            case PEqSym(a):
                s, t = _eq_args(self.run(a, ctx), d)
                return eq(t, s)
            case PEqTrans(a, b):
                r, s = _eq_args(self.run(a, ctx), d)
                s2, t = _eq_args(self.run(b, ctx), d)
                if s != s2:
                    raise PLError("middle terms differ", d)
                return eq(r, t)
            case PExt(a, b, z, body):
                self._wf(body, d)
                s, t = _eq_args(self.run(a, ctx), d)
                self._same(subst(body, z, s), self.run(b, ctx), d, "abstraction at the left term")
                return subst(body, z, t)
            case PSuccNonzero(t):
                self._wf(t, d, term=True)
                return Atom(NEQ, (succ(t), ZERO))
            case PSuccInj(a):
                s, t = _eq_args(self.run(a, ctx), d)
                if not all(isinstance(x, FunApp) and x.symbol == "succ" for x in (s, t)):
                    raise PLError("equation between successors expected", d)
                return eq(s.args[0], t.args[0])
            case PDefEq(name, binding):
                if self.th is None or name not in self.th.defeqs:
                    raise PLError(f"unknown defining equation {name}", d)
                return self.th.defeqs[name].instantiate(dict(binding))
            case PInd(base, x, u, formula, step):
                self._wf(formula, d)
                if x in ctx.free_vars():
                    raise PLError(f"{x} is free in the context", d)
                self._same(subst(formula, x, ZERO), self.run(base, ctx), d, "base case")
                got = self.run(step, ctx.extend(u, formula))
                self._same(subst(formula, x, succ(Var(x))), got, d, "step case")
                return Forall(x, formula)
        raise PLError(f"not a natural-deduction node: {type(d).__name__}", d)


# ----------------------------------------------------------------- embedding


def embed_formula(f, alpha):
    """A ↦ A_α."""
    match f:
        case Top() | Bot() | Atom():
            return f
        case And(l, r):
            return And(embed_formula(l, alpha), embed_formula(r, alpha))
        case Or(l, r):
            return Or(embed_formula(l, alpha), embed_formula(r, alpha))
        case Exists(v, b):
            return Exists(v, embed_formula(b, alpha))
        case Imp(l, r):
            return ImpTriple(embed_formula(l, alpha), Triple(alpha, embed_formula(r, alpha), alpha))
        case Forall(v, b):
            return ForallTriple(v, Triple(alpha, embed_formula(b, alpha), alpha))
    raise PLError(f"not a predicate-logic formula: {f!r}")


def embed_context(ctx: Context, alpha) -> Context:
    return Context(tuple((u, embed_formula(f, alpha)) for u, f in ctx))


def _binders(d) -> set[str]:
    """Eigenvariables and bound variables mentioned anywhere in a proof."""
    out: set[str] = set()
    match d:
        case PForallI(y, a, bound):
            out |= {y} | ({bound} if bound else set())
        case PExistsE(_, y, _, _):
            out.add(y)
        case PInd(_, x, _, _, _):
            out.add(x)
    for v in getattr(d, "__dict__", {}).values():
        if isinstance(v, (Exists, Forall, Imp, And, Or)):
            out |= all_vars(v) - free_vars(v)
        elif hasattr(v, "__dataclass_fields__") and type(v).__module__ == __name__:
            out |= _binders(v)
    return out


def embed_pl(d, alpha, theory=None, ctx: Context = EMPTY):
    """SL derivation of ctx_α ⊢_S ⟨α⟩A_α⟨α⟩ from a proof of ctx ⊢ A.

    The state formula must not mention the proof's eigenvariables, or the
    quantifier steps could not be carried over unchanged.
    """
    clash = free_vars(alpha) & _binders(d)
    if clash:
        raise EmbedError(
            f"state formula mentions variables bound in the proof: {sorted(clash)}", d)
    if theory is not None:
        pl_check(d, theory, ctx)
    return _embed(d, alpha)


def _embed(d, a):
    e = lambda x: _embed(x, a)  # noqa: E731
    match d:
        case PHyp(u):
            return K.Hyp(u, a)
        case PTopI():
            return K.TopAx(a)
        case PAndI(x, y):
            return K.AndI(e(x), e(y))
        case PAndEL(x):
            return K.AndEL(e(x))
        case PAndER(x):
            return K.AndER(e(x))
        case POrIL(x, right):
            return K.OrIL(e(x), embed_formula(right, a))
        case POrIR(x, left):
            return K.OrIR(e(x), embed_formula(left, a))
        case POrE(x, u, y, v, z):
            return K.OrE(e(x), u, e(y), v, e(z))
        case PImpI(u, ante, x):
            return K.ImpI(u, embed_formula(ante, a), e(x), a)
        case PImpE(x, y):
            return K.ImpE(e(x), e(y))
        case PBotE(x, target):
            return K.BotE(e(x), embed_formula(target, a), a)
        case PForallI(y, x, bound):
            return K.ForallI(y, e(x), a, bound)
        case PForallE(x, t):
            return K.ForallE(e(x), t)
        case PExistsI(t, v, body, x):
            return K.ExistsI(t, v, embed_formula(body, a), e(x))
        case PExistsE(x, y, u, z):
            return K.ExistsE(e(x), y, u, e(z))
        case PEqRefl(t):
            return K.EqRefl(t, a)
        case PEqSym(x):
            return K.EqSym(e(x))
        case PEqTrans(x, y):
            return K.EqTrans(e(x), e(y))
        case PExt(x, y, z, body):
            if z in free_vars(a):
                nz = fresh(z, free_vars(a) | all_vars(body))
                body, z = subst(body, z, Var(nz)), nz
            return K.Ext(e(x), e(y), z, embed_formula(body, a), a)
        case PSuccNonzero(t):
            return K.SuccNonzero(t, a)
        case PSuccInj(x):
            return K.SuccInj(e(x))
        case PDefEq(name, binding):
            return K.DefEqAx(name, binding, a)
        case PInd(base, x, u, formula, step):
            return K.Ind(e(base), x, u, embed_formula(formula, a), e(step), a)
    raise EmbedError(f"not a natural-deduction node: {type(d).__name__}", d)
