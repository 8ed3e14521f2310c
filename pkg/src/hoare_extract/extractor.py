"""Program extraction: realizability types and one term per derivation rule."""

from __future__ import annotations

from . import kernel as K
from . import stlang as st
from .stlang import (
    App, C, Comp, D, Default, Elim, Inj0, Inj1, Ite, Lam, P0, P1, Prod, Rec, SKIP,
    Sum, Arrow, While, star, subst_st, term_to_st,
)
from .syntax import (
    And, Atom, Bot, Context, EMPTY, Exists, ForallTriple, ImpTriple, Or, Top, ZERO,
    free_vars, fresh, show_main, subst, succ,
)
from .syntax import Var as FVar


class ExtractError(Exception):
    pass


def real_type(f) -> st.StType:
    match f:
        case Top() | Bot() | Atom():
            return C
        case And(l, r):
            return Prod(real_type(l), real_type(r))
        case Or(l, r):
            return Sum(real_type(l), real_type(r))
        case Exists(_, b):
            return Prod(D, real_type(b))
        case ImpTriple(a, tr):
            return Arrow(real_type(a), real_type(tr.body))
        case ForallTriple(_, tr):
            return Arrow(D, real_type(tr.body))
    raise ExtractError(f"not a main formula: {f!r}")


def hyp_var(label: str) -> str:
    return f"x_{label}"


class _Memo(K._Checker):
    """Kernel checker that remembers conclusions, so extraction can ask for
    the conclusion of any subderivation without rechecking it."""

    def __init__(self, theory):
        super().__init__(theory)
        self.cache: dict = {}

    def run(self, d, ctx):
        key = (id(d), ctx)
        hit = self.cache.get(key)
        if hit is not None and hit[0] is d:
            return hit[1]
        out = super().run(d, ctx)
        self.cache[key] = (d, out)
        return out


def extract(d, theory, ctx: Context = EMPTY, rctx: dict | None = None) -> st.StTerm:
    """Realizing term of a derivation.

    ``rctx`` maps hypothesis labels to realizer variable names; labels not
    mentioned get ``x_<label>``.  The derivation is checked on the way, so an
    incorrect derivation raises a KernelError rather than producing a term.
    """
    ex = _Extractor(theory)
    ex.ck.run(d, ctx)
    names = {u: hyp_var(u) for u in ctx.labels()}
    names.update(rctx or {})
    return ex.go(d, ctx, names)


def extract_typed(d, theory, ctx: Context = EMPTY):
    """(term, conclusion, typing context) with the typing context used for checks."""
    ex = _Extractor(theory)
    tr = ex.ck.run(d, ctx)
    names = {u: hyp_var(u) for u in ctx.labels()}
    term = ex.go(d, ctx, names)
    return term, tr, realizer_context(ctx, tr, names)


def realizer_context(ctx: Context, triple, names: dict | None = None) -> dict:
    names = names or {u: hyp_var(u) for u in ctx.labels()}
    tctx = {v: D for v in sorted(ctx.free_vars() | free_vars(triple))}
    for u, f in ctx:
        tctx[names[u]] = real_type(f)
    return tctx


class _Extractor:
    def __init__(self, theory):
        self.th = theory
        self.ck = _Memo(theory)

    def go(self, d, ctx, names) -> st.StTerm:
        g = lambda x, c=ctx, n=names: self.go(x, c, n)  # noqa: E731
        match d:
            case K.Hyp(u, _):
                return st.Var(names[u])
            case K.TopAx():
                return SKIP
            case K.AndI(a, b):
                return Comp(g(a), g(b))
            case K.AndEL(a):
                return P0(g(a))
            case K.AndER(a):
                return P1(g(a))
            case K.OrIL(a, _):
                return Inj0(g(a))
            case K.OrIR(a, _):
                return Inj1(g(a))
            case K.OrE(a, u, b, v, c):
                disj = self.ck.run(a, ctx).body
                xu, xv = hyp_var(u), hyp_var(v)
                left = Lam(xu, self.go(b, ctx.extend(u, disj.left), {**names, u: xu}),
                           real_type(disj.left))
                right = Lam(xv, self.go(c, ctx.extend(v, disj.right), {**names, v: xv}),
                            real_type(disj.right))
                return Elim(g(a), left, right)
            case K.ImpI(u, ante, a, _):
                xu = hyp_var(u)
                return Lam(xu, self.go(a, ctx.extend(u, ante), {**names, u: xu}), real_type(ante))
            case K.ImpE(a, b):
                return App(g(a), g(b))
            case K.BotE(_, target, _):
                return Default(real_type(target))
            case K.ForallI(y, a, _, _):
                return Lam(y, g(a), D)
            case K.ForallE(a, t):
                return App(g(a), term_to_st(t))
            case K.ExistsI(t, _, _, a):
                return Comp(term_to_st(t), g(a))
            case K.ExistsE(a, y, u, b):
                ex = self.ck.run(a, ctx).body
                hyp = subst(ex.body, ex.var, FVar(y))
                xu = hyp_var(u)
                body = self.go(b, ctx.extend(u, hyp), {**names, u: xu})
                return App(lambda_star(y, xu, body, real_type(hyp), avoid=names.values()), g(a))
            case K.Cons(a):
                return g(a)
            case K.Cond(case_a, _, _, a, b):
                return Ite(case_a, g(a), g(b))
            case K.SAxiom(name, binding):
                sch = self.th.sschemas[name]
                try:
                    return sch.instantiate_realizer(dict(binding))
                except Exception as e:
                    raise ExtractError(str(e)) from None
            case K.EqRefl() | K.SuccNonzero() | K.DefEqAx():
                return SKIP
            case K.EqSym(a) | K.SuccInj(a):
                return g(a)
            case K.EqTrans(a, b):
                return star(g(a), g(b))
            case K.Ext(a, b):
                return star(g(a), g(b))
            case K.Ind(base, x, u, formula, step, _):
                xu = hyp_var(u)
                s = self.go(step, ctx.extend(u, formula), {**names, u: xu})
                return Rec(g(base), Lam(x, Lam(xu, s, real_type(formula)), D))
            case K.WhileRule(x, u, z, cond, d1, d2, d3):
                ax = ctx[u]
                gamma = ctx.without(u)
                xu = hyp_var(u)
                nm = {**names, u: xu}
                a_next = subst(ax, x, succ(FVar(x)))
                a_zero = subst(ax, x, ZERO)
                ty_next, ty_zero = real_type(a_next), real_type(a_zero)
                r = self.go(d1, gamma.extend(u, a_next), nm)
                s = self.go(d2, gamma.extend(u, a_next), nm)
                t = self.go(d3, gamma.extend(u, a_zero), nm)
                loop = While(cond, z,
                             Lam(x, Lam(xu, r, ty_next), D),
                             Lam(x, Lam(xu, s, ty_next), D),
                             Lam(xu, t, ty_zero),
                             st.Var(x))
                return App(loop, st.Var(names[u]))
        raise ExtractError(f"cannot extract from {type(d).__name__}")


def lambda_star(x: str, y: str, body, ty_y=None, avoid=()) -> Lam:
    """λ*v.t := λv.(λx.λy.t)(p0 v)(p1 v), with a fresh v."""
    v = fresh("v", set(avoid) | st.free_vars_st(body) | st.bound_vars_st(body) | {x, y})
    inner = Lam(x, Lam(y, body, ty_y, admin=True), D, admin=True)
    ty_v = Prod(D, ty_y) if ty_y is not None else None
    return Lam(v, App(App(inner, P0(st.Var(v))), P1(st.Var(v))), ty_v, admin=True)


# ----------------------------------------------------------- post-processing


def free_var_ground(t: st.StTerm, theory, declared=()) -> st.StTerm:
    """Replace stray free variables by the canonical constant of the signature."""
    declared = dict(declared) if not isinstance(declared, dict) else declared
    stray = sorted(st.free_vars_st(t) - set(declared))
    if not stray:
        return t
    ctx = {**declared, **{v: D for v in stray}}
    try:
        st.typecheck(ctx, t, theory)
    except st.AmbiguousType:
        pass
    except st.StTypeError as e:
        raise ExtractError(
            f"free variables {', '.join(stray)} cannot all be grounded at type D: {e}") from None
    c = st.Fun(theory.signature.canonical_const().symbol)
    for v in stray:
        t = subst_st(t, v, c)
    return t


def _value_like(t) -> bool:
    """Arguments whose evaluation is state-free and cheap to duplicate."""
    match t:
        case st.Var() | st.Skip() | st.Fun() | st.Default() | Lam():
            return True
        case P0(b) | P1(b):
            return isinstance(b, st.Var)
    # first-order terms are state-free
    return st.st_to_term(t) is not None


def cleanup_admin(t: st.StTerm) -> st.StTerm:
    """β-reduce the redexes whose lambda was introduced by the extractor,
    as long as the argument is a value; repeat to a fixed point."""
    while True:
        nt = _clean(t)
        if nt == t:
            return nt
        t = nt


def _clean(t):
    match t:
        case App(Lam(x, body, _, True), arg) if _value_like(arg):
            return subst_st(_clean(body), x, _clean(arg))
        case App(f, a):
            return App(_clean(f), _clean(a))
        case Lam(x, b, ty, adm):
            return Lam(x, _clean(b), ty, adm)
        case P0(b):
            return P0(_clean(b))
        case P1(b):
            return P1(_clean(b))
        case Inj0(b):
            return Inj0(_clean(b))
        case Inj1(b):
            return Inj1(_clean(b))
        case Comp(l, r):
            return Comp(_clean(l), _clean(r))
        case Rec(l, r):
            return Rec(_clean(l), _clean(r))
        case Elim(a, b, c):
            return Elim(_clean(a), _clean(b), _clean(c))
        case Ite(c, a, b):
            return Ite(c, _clean(a), _clean(b))
        case While(c, z, r, s, tt, u):
            return While(c, z, _clean(r), _clean(s), _clean(tt), _clean(u))
    return t


def check_extraction_typing(d, theory, ctx: Context = EMPTY):
    """Extract, then typecheck at the realizability type of the conclusion.

    Returns (term, type); raises StTypeError or ExtractError on failure.
    """
    term, tr, tctx = extract_typed(d, theory, ctx)
    want = real_type(tr.body)
    got = st.typecheck(tctx, term, theory, expected=want)
    if got != want:
        raise ExtractError(
            f"extracted term has type {st.show_type(got)}, expected {st.show_type(want)} "
            f"for {show_main(tr.body)}")
    return term, got
