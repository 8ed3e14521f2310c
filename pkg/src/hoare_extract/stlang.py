"""The extracted-program calculus: simple types, terms and typing.

Terms follow the usual call-by-value reading: ``s & t`` (composition,
written ∘) runs ``s`` then ``t`` and pairs their values, ``s * t`` is
``p1(s & t)``, conditionals test a state formula, and ``rec``/``while``
add primitive recursion and a counter-controlled loop.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Any, Union

from . import syntax as fo
from .syntax import StateFormula


class StTypeError(Exception):
    pass


class AmbiguousType(StTypeError):
    pass


# --------------------------------------------------------------------- types


@dataclass(frozen=True)
class DType:
    def __repr__(self):
        return "D"


@dataclass(frozen=True)
class CType:
    def __repr__(self):
        return "C"


@dataclass(frozen=True)
class Prod:
    left: "StType"
    right: "StType"


@dataclass(frozen=True)
class Sum:
    left: "StType"
    right: "StType"


@dataclass(frozen=True)
class Arrow:
    dom: "StType"
    cod: "StType"


@dataclass(frozen=True)
class TVar:
    id: int


StType = Union[DType, CType, Prod, Sum, Arrow]
D = DType()
C = CType()


def fun_type(arity: int) -> StType:
    if arity == 0:
        return D
    return Arrow(dprod(arity), D)


def dprod(n: int) -> StType:
    t: StType = D
    for _ in range(n - 1):
        t = Prod(D, t)
    return t


# --------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Default:
    ty: StType


@dataclass(frozen=True)
class Const:
    name: str
    index: tuple = ()


@dataclass(frozen=True)
class Fun:
    symbol: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class P0:
    body: "StTerm"


@dataclass(frozen=True)
class P1:
    body: "StTerm"


@dataclass(frozen=True)
class Comp:
    left: "StTerm"
    right: "StTerm"


@dataclass(frozen=True)
class Inj0:
    body: "StTerm"


@dataclass(frozen=True)
class Inj1:
    body: "StTerm"


@dataclass(frozen=True)
class Elim:
    scrut: "StTerm"
    left: "StTerm"
    right: "StTerm"


@dataclass(frozen=True)
class Lam:
    var: str
    body: "StTerm"
    ty: Any = None
    # set on lambdas the extractor adds for currying; cleanup may reduce them
    admin: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class App:
    fn: "StTerm"
    arg: "StTerm"


@dataclass(frozen=True)
class Ite:
    cond: StateFormula
    then: "StTerm"
    other: "StTerm"


@dataclass(frozen=True)
class Rec:
    base: "StTerm"
    step: "StTerm"


@dataclass(frozen=True)
class While:
    cond: StateFormula
    hole: str
    r: "StTerm"
    s: "StTerm"
    t: "StTerm"
    u: "StTerm"


StTerm = Union[Skip, Default, Const, Fun, Var, P0, P1, Comp, Inj0, Inj1, Elim,
               Lam, App, Ite, Rec, While]

SKIP = Skip()


def star(s: StTerm, t: StTerm) -> P1:
    return P1(Comp(s, t))


def term_to_st(t: fo.Term) -> StTerm:
    """Natural interpretation of a first-order term: f(t1,...,tn) as f(t1∘...∘tn)."""
    match t:
        case fo.Var(n):
            return Var(n)
        case fo.FunApp(f, ()):
            return Fun(f)
        case fo.FunApp(f, args):
            packed = term_to_st(args[-1])
            for a in reversed(args[:-1]):
                packed = Comp(term_to_st(a), packed)
            return App(Fun(f), packed)
    raise TypeError(t)


def st_to_term(t: StTerm, arities: dict | None = None) -> fo.Term | None:
    """Inverse of term_to_st where possible, else None."""
    match t:
        case Var(n):
            return fo.Var(n)
        case Fun(f) if arities is None or arities.get(f, 0) == 0:
            return fo.FunApp(f)
        case App(Fun(f), packed):
            n = arities.get(f) if arities else None
            args = []
            cur = packed
            while True:
                if n is not None and len(args) == n - 1:
                    break
                if n is None and not isinstance(cur, Comp):
                    break
                if not isinstance(cur, Comp):
                    return None
                args.append(cur.left)
                cur = cur.right
            args.append(cur)
            conv = [st_to_term(a, arities) for a in args]
            if any(c is None for c in conv):
                return None
            return fo.FunApp(f, tuple(conv))
    return None


# ------------------------------------------------------------ free variables


def free_vars_st(t: StTerm) -> set[str]:
    match t:
        case Var(n):
            return {n}
        case Skip() | Default() | Fun():
            return set()
        case Const(_, idx):
            out: set[str] = set()
            for i in idx:
                out |= fo.term_vars(i)
            return out
        case P0(b) | P1(b) | Inj0(b) | Inj1(b):
            return free_vars_st(b)
        case Comp(l, r) | App(l, r) | Rec(l, r):
            return free_vars_st(l) | free_vars_st(r)
        case Elim(a, b, c):
            return free_vars_st(a) | free_vars_st(b) | free_vars_st(c)
        case Lam(x, b):
            return free_vars_st(b) - {x}
        case Ite(c, a, b):
            return fo.free_vars(c) | free_vars_st(a) | free_vars_st(b)
        case While(c, z, r, s, tt, u):
            out = fo.free_vars(c) - {z}
            for p in (r, s, tt, u):
                out |= free_vars_st(p)
            return out
    raise TypeError(f"not a term: {t!r}")


def bound_vars_st(t: StTerm) -> set[str]:
    match t:
        case Lam(x, b):
            return {x} | bound_vars_st(b)
        case While(_, z, r, s, tt, u):
            out = {z}
            for p in (r, s, tt, u):
                out |= bound_vars_st(p)
            return out
        case P0(b) | P1(b) | Inj0(b) | Inj1(b):
            return bound_vars_st(b)
        case Comp(l, r) | App(l, r) | Rec(l, r):
            return bound_vars_st(l) | bound_vars_st(r)
        case Elim(a, b, c):
            return bound_vars_st(a) | bound_vars_st(b) | bound_vars_st(c)
        case Ite(_, a, b):
            return bound_vars_st(a) | bound_vars_st(b)
    return set()


# -------------------------------------------------------------- substitution


def subst_st(t: StTerm, x: str, s: StTerm) -> StTerm:
    """Capture-avoiding substitution of s for the variable x."""
    if x not in free_vars_st(t):
        return t
    fv_s = free_vars_st(s)
    match t:
        case Var(n):
            return s if n == x else t
        case Const(name, idx):
            ft = _first_order(s, x)
            return Const(name, tuple(fo.subst(i, x, ft) for i in idx))
        case P0(b):
            return P0(subst_st(b, x, s))
        case P1(b):
            return P1(subst_st(b, x, s))
        case Inj0(b):
            return Inj0(subst_st(b, x, s))
        case Inj1(b):
            return Inj1(subst_st(b, x, s))
        case Comp(l, r):
            return Comp(subst_st(l, x, s), subst_st(r, x, s))
        case App(l, r):
            return App(subst_st(l, x, s), subst_st(r, x, s))
        case Rec(l, r):
            return Rec(subst_st(l, x, s), subst_st(r, x, s))
        case Elim(a, b, c):
            return Elim(subst_st(a, x, s), subst_st(b, x, s), subst_st(c, x, s))
        case Lam(y, b, ty, adm):
            if y in fv_s:
                ny = fo.fresh(y, fv_s | free_vars_st(b) | bound_vars_st(b) | {x})
                b = subst_st(b, y, Var(ny))
                y = ny
            return Lam(y, subst_st(b, x, s), ty, adm)
        case Ite(c, a, b):
            cond = c
            if x in fo.free_vars(c):
                cond = fo.subst(c, x, _first_order(s, x))
            return Ite(cond, subst_st(a, x, s), subst_st(b, x, s))
        case While(c, z, r, ss, tt, u):
            cond = c
            if x in fo.free_vars(c) and x != z:
                ft = _first_order(s, x)
                if z in fo.term_vars(ft):
                    nz = fo.fresh(z, fo.free_vars(c) | fo.term_vars(ft))
                    cond = fo.subst(cond, z, fo.Var(nz))
                    z = nz
                cond = fo.subst(cond, x, ft)
            return While(cond, z, subst_st(r, x, s), subst_st(ss, x, s),
                         subst_st(tt, x, s), subst_st(u, x, s))
    return t


def _first_order(s: StTerm, x: str) -> fo.Term:
    ft = st_to_term(s)
    if ft is None:
        raise StTypeError(
            f"cannot substitute a non first-order term for {x}, which occurs in a state formula")
    return ft


# ------------------------------------------------------------------- typing


class _Unifier:
    def __init__(self):
        self.sub: dict[int, Any] = {}
        self.counter = itertools.count()

    def fresh(self) -> TVar:
        return TVar(next(self.counter))

    def walk(self, t):
        while isinstance(t, TVar) and t.id in self.sub:
            t = self.sub[t.id]
        return t

    def resolve(self, t):
        t = self.walk(t)
        match t:
            case Prod(a, b):
                return Prod(self.resolve(a), self.resolve(b))
            case Sum(a, b):
                return Sum(self.resolve(a), self.resolve(b))
            case Arrow(a, b):
                return Arrow(self.resolve(a), self.resolve(b))
        return t

    def occurs(self, v: TVar, t) -> bool:
        t = self.walk(t)
        if t == v:
            return True
        match t:
            case Prod(a, b) | Sum(a, b) | Arrow(a, b):
                return self.occurs(v, a) or self.occurs(v, b)
        return False

    def unify(self, a, b, where: str = "") -> None:
        a, b = self.walk(a), self.walk(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if self.occurs(a, b):
                raise StTypeError(f"infinite type{where}")
            self.sub[a.id] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a, where)
            return
        if type(a) is type(b) and isinstance(a, (Prod, Sum, Arrow)):
            (a1, a2), (b1, b2) = _parts(a), _parts(b)
            self.unify(a1, b1, where)
            self.unify(a2, b2, where)
            return
        raise StTypeError(
            f"type mismatch{where}: {show_type(self.resolve(a))} vs {show_type(self.resolve(b))}")


def _parts(t):
    match t:
        case Prod(a, b) | Sum(a, b) | Arrow(a, b):
            return a, b
    raise TypeError(t)


def has_tvars(t) -> bool:
    match t:
        case TVar():
            return True
        case Prod(a, b) | Sum(a, b) | Arrow(a, b):
            return has_tvars(a) or has_tvars(b)
    return False


@dataclass
class Typed:
    """A term together with its (possibly still unresolved) type and children."""
    term: Any
    ty: Any
    kids: tuple = ()


def _const_type(theory, name: str, index: tuple):
    lconsts = getattr(theory, "lconsts", None) or {}
    if name not in lconsts:
        raise StTypeError(f"unknown constant {name!r}")
    arity, ty = lconsts[name]
    if arity != len(index):
        raise StTypeError(f"constant {name} expects {arity} indices, got {len(index)}")
    return ty


def _fun_arity(theory, f: str) -> int:
    funcs = getattr(getattr(theory, "signature", None), "funcs", None)
    if funcs is None or f not in funcs:
        raise StTypeError(f"unknown function symbol {f!r}")
    return funcs[f]


def _infer(ctx: dict, t: StTerm, theory, u: _Unifier) -> Typed:
    match t:
        case Skip():
            return Typed(t, C)
        case Default(ty):
            return Typed(t, ty)
        case Const(name, index):
            for i in index:
                for v in fo.term_vars(i):
                    if v not in ctx:
                        raise StTypeError(f"unbound variable {v} in index of {name}")
                    u.unify(ctx[v], D, f" for index variable {v}")
            return Typed(t, _const_type(theory, name, index))
        case Fun(f):
            return Typed(t, fun_type(_fun_arity(theory, f)))
        case Var(n):
            if n not in ctx:
                raise StTypeError(f"unbound variable {n}")
            return Typed(t, ctx[n])
        case Comp(l, r):
            a, b = _infer(ctx, l, theory, u), _infer(ctx, r, theory, u)
            return Typed(t, Prod(a.ty, b.ty), (a, b))
        case P0(b) | P1(b):
            k = _infer(ctx, b, theory, u)
            x, y = u.fresh(), u.fresh()
            u.unify(k.ty, Prod(x, y), " in projection")
            return Typed(t, x if isinstance(t, P0) else y, (k,))
        case Inj0(b):
            k = _infer(ctx, b, theory, u)
            return Typed(t, Sum(k.ty, u.fresh()), (k,))
        case Inj1(b):
            k = _infer(ctx, b, theory, u)
            return Typed(t, Sum(u.fresh(), k.ty), (k,))
        case Elim(r, s, tt):
            kr, ks, kt = (_infer(ctx, r, theory, u), _infer(ctx, s, theory, u),
                          _infer(ctx, tt, theory, u))
            x, y, z = u.fresh(), u.fresh(), u.fresh()
            u.unify(kr.ty, Sum(x, y), " in elim scrutinee")
            u.unify(ks.ty, Arrow(x, z), " in elim left branch")
            u.unify(kt.ty, Arrow(y, z), " in elim right branch")
            return Typed(t, z, (kr, ks, kt))
        case Lam(x, b, ty):
            a = ty if ty is not None else u.fresh()
            k = _infer({**ctx, x: a}, b, theory, u)
            return Typed(t, Arrow(a, k.ty), (k,))
        case App(f, a):
            kf, ka = _infer(ctx, f, theory, u), _infer(ctx, a, theory, u)
            r = u.fresh()
            u.unify(kf.ty, Arrow(ka.ty, r), " in application")
            return Typed(t, r, (kf, ka))
        case Ite(c, s, tt):
            _cond_vars(ctx, c, set(), u, "conditional")
            ks, kt = _infer(ctx, s, theory, u), _infer(ctx, tt, theory, u)
            u.unify(ks.ty, kt.ty, " between conditional branches")
            return Typed(t, ks.ty, (ks, kt))
        case Rec(s, st):
            ks, kt = _infer(ctx, s, theory, u), _infer(ctx, st, theory, u)
            u.unify(kt.ty, Arrow(D, Arrow(ks.ty, ks.ty)), " in recursor step")
            return Typed(t, Arrow(D, ks.ty), (ks, kt))
        case While(c, z, r, s, tt, n):
            if z in ctx:
                raise StTypeError(f"loop hole variable {z} clashes with a bound variable")
            _cond_vars(ctx, c, {z}, u, "loop")
            kr, ks, kt, kn = (_infer(ctx, p, theory, u) for p in (r, s, tt, n))
            x, y = u.fresh(), u.fresh()
            u.unify(kr.ty, Arrow(D, Arrow(x, x)), " in loop body")
            u.unify(ks.ty, Arrow(D, Arrow(x, y)), " in loop exit")
            u.unify(kt.ty, Arrow(x, y), " in loop base")
            u.unify(kn.ty, D, " in loop counter")
            return Typed(t, Arrow(x, y), (kr, ks, kt, kn))
    raise StTypeError(f"not a term: {t!r}")


def _cond_vars(ctx, c, skip: set, u: _Unifier, what: str) -> None:
    for v in sorted(fo.free_vars(c) - skip):
        if v not in ctx:
            raise StTypeError(f"{what} condition variable {v} is not in scope")
        try:
            u.unify(ctx[v], D)
        except StTypeError:
            raise StTypeError(f"{what} condition variable {v} must have type D") from None


def typecheck(ctx: dict, t: StTerm, theory=None, expected=None) -> StType:
    u = _Unifier()
    typed = _infer(dict(ctx), t, theory, u)
    if expected is not None:
        u.unify(typed.ty, expected, " against the expected type")
    ty = u.resolve(typed.ty)
    if has_tvars(ty):
        raise AmbiguousType(f"type of term is not determined: {show_type(ty)}")
    return ty


def typed_tree(ctx: dict, t: StTerm, theory=None, expected=None) -> Typed:
    """Typing derivation with every node's type resolved."""
    u = _Unifier()
    typed = _infer(dict(ctx), t, theory, u)
    if expected is not None:
        u.unify(typed.ty, expected)

    def fix(k: Typed) -> Typed:
        ty = u.resolve(k.ty)
        # leftover variables only arise in unused positions; C is a harmless default
        ty = _default_tvars(ty)
        return Typed(k.term, ty, tuple(fix(c) for c in k.kids))

    return fix(typed)


def _default_tvars(t):
    match t:
        case TVar():
            return C
        case Prod(a, b):
            return Prod(_default_tvars(a), _default_tvars(b))
        case Sum(a, b):
            return Sum(_default_tvars(a), _default_tvars(b))
        case Arrow(a, b):
            return Arrow(_default_tvars(a), _default_tvars(b))
    return t


# -------------------------------------------------------- unit simplification


def simplify_type(t: StType) -> StType:
    """Erase unit components: 1×X ≃ X ≃ X×1 and (1→X) ≃ X."""
    match t:
        case Prod(a, b):
            sa, sb = simplify_type(a), simplify_type(b)
            if sa == C:
                return sb
            if sb == C:
                return sa
            return Prod(sa, sb)
        case Sum(a, b):
            return Sum(simplify_type(a), simplify_type(b))
        case Arrow(a, b):
            sa, sb = simplify_type(a), simplify_type(b)
            if sa == C:
                return sb
            return Arrow(sa, sb)
    return t


def simplify_units(x, ctx: dict | None = None, theory=None):
    """Unit simplification of a type, or of a term typed in ``ctx``.

    Terms are rewritten so that their type becomes ``simplify_type`` of the
    original.  Components of rec, while and elim are simplified in place, so
    those constructs may no longer satisfy their own typing rules; the result
    is meant for display.
    """
    if isinstance(x, (DType, CType, Prod, Sum, Arrow)):
        return simplify_type(x)
    tree = typed_tree(ctx or {}, x, theory)
    return _simp(tree)


def _pure(t: StTerm) -> bool:
    return isinstance(t, (Var, Skip, Default, Fun, Lam))


def _star(l: StTerm, r: StTerm, r_ty: StType) -> StTerm:
    # C has a single value, so skip on either side of ∗ is inert
    if isinstance(l, Skip):
        return r
    if isinstance(r, Skip) and r_ty == C:
        return l
    return star(l, r)


def _simp(k: Typed) -> StTerm:
    t = k.term
    kids = k.kids
    match t:
        case Var() | Skip() | Fun():
            return t
        case Default(ty):
            sty = simplify_type(ty)
            return SKIP if sty == C else Default(sty)
        case Const():
            # a program constant is read at the simplified type: its model
            # interpretation is transported along the unit isomorphisms
            return t
        case Comp():
            a, b = kids
            sa, sb = simplify_type(a.ty), simplify_type(b.ty)
            l, r = _simp(a), _simp(b)
            if sa == C:
                return _star(l, r, sb)
            if sb == C:
                return l if isinstance(r, Skip) else P0(Comp(l, r))
            return Comp(l, r)
        case P0() | P1():
            (inner,) = kids
            x, y = _parts(inner.ty)
            sx, sy = simplify_type(x), simplify_type(y)
            first = isinstance(t, P0)
            if isinstance(inner.term, Comp):
                l, r = (_simp(c) for c in inner.kids)
                if not first and sx == C:
                    return _star(l, r, sy)
                return P0(Comp(l, r)) if first else P1(Comp(l, r))
            body = _simp(inner)
            want, other = (sx, sy) if first else (sy, sx)
            if want == C and other == C:
                return body
            if want == C:
                return P1(Comp(body, SKIP))
            if other == C:
                return body
            return P0(body) if first else P1(body)
        case Inj0():
            return Inj0(_simp(kids[0]))
        case Inj1():
            return Inj1(_simp(kids[0]))
        case Elim():
            return Elim(*(_simp(c) for c in kids))
        case Lam(x, _, ty):
            dom = _parts(k.ty)[0]
            body = _simp(kids[0])
            sdom = simplify_type(dom)
            if sdom == C:
                return subst_st(body, x, SKIP)
            return Lam(x, body, sdom if ty is not None else None, t.admin)
        case App():
            f, a = kids
            dom = _parts(f.ty)[0]
            sf, sa_ = _simp(f), _simp(a)
            if simplify_type(dom) == C:
                if _pure(sa_):
                    return sf
                return P0(Comp(sf, sa_))
            return App(sf, sa_)
        case Ite(c, _, _):
            return Ite(c, _simp(kids[0]), _simp(kids[1]))
        case Rec():
            return Rec(_simp(kids[0]), _simp(kids[1]))
        case While(c, z):
            r, s, tt, n = (_simp(q) for q in kids)
            return While(c, z, r, s, tt, n)
    raise TypeError(t)


# --------------------------------------------------------- alpha equivalence


def alpha_eq_st(a: StTerm, b: StTerm) -> bool:
    return _aeq(a, b, {}, {}, itertools.count())


def _aeq(a, b, ea: dict, eb: dict, ctr) -> bool:
    match a, b:
        case Var(n), Var(m):
            if (n in ea) != (m in eb):
                return False
            return ea.get(n, n) == eb.get(m, m)
        case (Skip(), Skip()):
            return True
        case Default(x), Default(y):
            return x == y
        case Fun(f), Fun(g):
            return f == g
        case Const(n, i), Const(m, j):
            return n == m and len(i) == len(j) and all(
                fo._alpha(x, y, ea, eb, 0) for x, y in zip(i, j))
        case (P0(x), P0(y)) | (P1(x), P1(y)) | (Inj0(x), Inj0(y)) | (Inj1(x), Inj1(y)):
            return _aeq(x, y, ea, eb, ctr)
        case (Comp(x1, y1), Comp(x2, y2)) | (App(x1, y1), App(x2, y2)) | \
             (Rec(x1, y1), Rec(x2, y2)):
            return _aeq(x1, x2, ea, eb, ctr) and _aeq(y1, y2, ea, eb, ctr)
        case Elim(x1, y1, z1), Elim(x2, y2, z2):
            return (_aeq(x1, x2, ea, eb, ctr) and _aeq(y1, y2, ea, eb, ctr)
                    and _aeq(z1, z2, ea, eb, ctr))
        case Lam(x, bx, tx), Lam(y, by, ty):
            if tx is not None and ty is not None and tx != ty:
                return False
            key = f"\0{next(ctr)}"
            return _aeq(bx, by, {**ea, x: key}, {**eb, y: key}, ctr)
        case Ite(c1, s1, t1), Ite(c2, s2, t2):
            return (fo._alpha(c1, c2, ea, eb, 0) and _aeq(s1, s2, ea, eb, ctr)
                    and _aeq(t1, t2, ea, eb, ctr))
        case While(c1, z1), While(c2, z2):
            r1 = (a.r, a.s, a.t, a.u)
            r2 = (b.r, b.s, b.t, b.u)
            key = f"\0{next(ctr)}"
            if not fo._alpha(c1, c2, {**ea, z1: key}, {**eb, z2: key}, 0):
                return False
            return all(_aeq(x, y, ea, eb, ctr) for x, y in zip(r1, r2))
    return False


# ------------------------------------------------------------------ printing


def show_type(t, unicode: bool = False) -> str:
    times, plus, arrow = (" × ", " + ", " → ") if unicode else (" * ", " + ", " -> ")

    def go(x, ctx: int) -> str:
        match x:
            case DType():
                return "D"
            case CType():
                return "C"
            case TVar(i):
                return f"?{i}"
            case Prod(a, b):
                p, out = 3, go(a, 4) + times + go(b, 3)
            case Sum(a, b):
                p, out = 2, go(a, 3) + plus + go(b, 2)
            case Arrow(a, b):
                p, out = 1, go(a, 2) + arrow + go(b, 1)
            case _:
                raise TypeError(x)
        return f"({out})" if p < ctx else out

    return go(t, 0)


def _show_index(index: tuple) -> str:
    return "[" + ",".join(fo.show_term(i) for i in index) + "]"


def show_st(t: StTerm, unicode: bool = False, annotate: bool = False) -> str:
    """Pretty-print a term.  ASCII output parses back with ``parse_st``.

    Infix operators always carry their own parentheses; lambdas and
    conditionals are parenthesised unless they end the enclosing term.
    """
    lam = "λ" if unicode else "fun "
    dot = "." if unicode else " -> "
    comp = " ∘ " if unicode else " & "
    st = " ∗ " if unicode else " * "

    def atom(x) -> str:
        s = go(x)
        if isinstance(x, (Lam, Ite, App)):
            return f"({s})"
        return s

    def fnpos(x) -> str:
        s = go(x)
        if isinstance(x, (Lam, Ite)):
            return f"({s})"
        return s

    def sf(c) -> str:
        return fo.show_state(c, unicode)

    def go(x) -> str:
        match x:
            case Skip():
                return "skip"
            case Default(ty):
                return f"default_{{{show_type(ty, True)}}}" if unicode else f"default[{show_type(ty)}]"
            case Const(n, ()):
                return n
            case Const(n, idx):
                return n + _show_index(idx)
            case Fun(f):
                return f
            case Var(n):
                return n
            case P1(Comp(l, r)):
                return f"({infix_operand(l)}{st}{infix_operand(r)})"
            case Comp(l, r):
                return f"({infix_operand(l)}{comp}{infix_operand(r)})"
            case P0(b):
                return f"p₀({go(b)})" if unicode else f"p0({go(b)})"
            case P1(b):
                return f"p₁({go(b)})" if unicode else f"p1({go(b)})"
            case Inj0(b):
                return f"ι₀({go(b)})" if unicode else f"inl({go(b)})"
            case Inj1(b):
                return f"ι₁({go(b)})" if unicode else f"inr({go(b)})"
            case Elim(a, b, c):
                return f"elim({go(a)}, {go(b)}, {go(c)})"
            case Lam(v, b, ty):
                if annotate and ty is not None:
                    head = f"λ{v}:{show_type(ty, True)}" if unicode else f"fun ({v} : {show_type(ty)})"
                else:
                    head = f"{lam}{v}"
                return f"{head}{dot}{go(b)}"
            case App(f, a):
                return f"{fnpos(f)} {atom(a)}"
            case Ite(c, a, b):
                if unicode:
                    return f"if {sf(c)} then {atom_if(a)} else {go(b)}"
                return f"if {{{sf(c)}}} then {atom_if(a)} else {go(b)}"
            case Rec(a, b):
                return f"rec({go(a)}, {go(b)})"
            case While(c, z, r, s, tt, u):
                cond = sf(c)
                head = f"while {cond}[{z}]" if unicode else f"while {{{cond}}}[{z}]"
                return f"{head}({go(r)}, {go(s)}, {go(tt)}, {go(u)})"
        raise TypeError(x)

    def infix_operand(x) -> str:
        s = go(x)
        if isinstance(x, (Lam, Ite)):
            return f"({s})"
        return s

    def atom_if(x) -> str:
        s = go(x)
        if isinstance(x, (Lam, Ite)):
            return f"({s})"
        return s

    return go(t)


def _is_infix(x) -> bool:
    return isinstance(x, Comp) or (isinstance(x, P1) and isinstance(x.body, Comp))


# ---------------------------------------------------------------------- json


def type_to_json(t: StType):
    match t:
        case DType():
            return "D"
        case CType():
            return "C"
        case Prod(a, b):
            return {"kind": "prod", "left": type_to_json(a), "right": type_to_json(b)}
        case Sum(a, b):
            return {"kind": "sum", "left": type_to_json(a), "right": type_to_json(b)}
        case Arrow(a, b):
            return {"kind": "arrow", "dom": type_to_json(a), "cod": type_to_json(b)}
    raise TypeError(t)


def type_from_json(j) -> StType:
    if j == "D":
        return D
    if j == "C":
        return C
    k = j["kind"]
    if k == "prod":
        return Prod(type_from_json(j["left"]), type_from_json(j["right"]))
    if k == "sum":
        return Sum(type_from_json(j["left"]), type_from_json(j["right"]))
    if k == "arrow":
        return Arrow(type_from_json(j["dom"]), type_from_json(j["cod"]))
    raise ValueError(f"unknown type kind {k!r}")


def to_json(t: StTerm) -> dict:
    match t:
        case Skip():
            return {"kind": "skip"}
        case Default(ty):
            return {"kind": "default", "type": type_to_json(ty)}
        case Const(n, idx):
            return {"kind": "const", "name": n, "index": [fo.show(i, False) for i in idx]}
        case Fun(f):
            return {"kind": "fun", "symbol": f}
        case Var(n):
            return {"kind": "var", "name": n}
        case P0(b):
            return {"kind": "p0", "body": to_json(b)}
        case P1(b):
            return {"kind": "p1", "body": to_json(b)}
        case Comp(l, r):
            return {"kind": "comp", "left": to_json(l), "right": to_json(r)}
        case Inj0(b):
            return {"kind": "inl", "body": to_json(b)}
        case Inj1(b):
            return {"kind": "inr", "body": to_json(b)}
        case Elim(a, b, c):
            return {"kind": "elim", "scrut": to_json(a), "left": to_json(b), "right": to_json(c)}
        case Lam(v, b, ty, adm):
            out = {"kind": "lam", "var": v, "body": to_json(b)}
            if ty is not None:
                out["type"] = type_to_json(ty)
            if adm:
                out["admin"] = True
            return out
        case App(f, a):
            return {"kind": "app", "fn": to_json(f), "arg": to_json(a)}
        case Ite(c, a, b):
            return {"kind": "ite", "cond": fo.show(c, False), "then": to_json(a), "else": to_json(b)}
        case Rec(a, b):
            return {"kind": "rec", "base": to_json(a), "step": to_json(b)}
        case While(c, z, r, s, tt, u):
            return {"kind": "while", "cond": fo.show(c, False), "hole": z,
                    "r": to_json(r), "s": to_json(s), "t": to_json(tt), "u": to_json(u)}
    raise TypeError(t)


def from_json(j: dict, parse_state=None, parse_term=None) -> StTerm:
    """Rebuild a term; state formulas and index terms go through the given parsers."""
    if parse_state is None or parse_term is None:
        from .parser import parse_state_formula, parse_term as _pt
        parse_state = parse_state or parse_state_formula
        parse_term = parse_term or _pt

    def go(j):
        k = j["kind"]
        match k:
            case "skip":
                return SKIP
            case "default":
                return Default(type_from_json(j["type"]))
            case "const":
                return Const(j["name"], tuple(parse_term(i) for i in j.get("index", [])))
            case "fun":
                return Fun(j["symbol"])
            case "var":
                return Var(j["name"])
            case "p0":
                return P0(go(j["body"]))
            case "p1":
                return P1(go(j["body"]))
            case "comp":
                return Comp(go(j["left"]), go(j["right"]))
            case "inl":
                return Inj0(go(j["body"]))
            case "inr":
                return Inj1(go(j["body"]))
            case "elim":
                return Elim(go(j["scrut"]), go(j["left"]), go(j["right"]))
            case "lam":
                ty = type_from_json(j["type"]) if "type" in j else None
                return Lam(j["var"], go(j["body"]), ty, j.get("admin", False))
            case "app":
                return App(go(j["fn"]), go(j["arg"]))
            case "ite":
                return Ite(parse_state(j["cond"]), go(j["then"]), go(j["else"]))
            case "rec":
                return Rec(go(j["base"]), go(j["step"]))
            case "while":
                return While(parse_state(j["cond"]), j["hole"], go(j["r"]), go(j["s"]),
                             go(j["t"]), go(j["u"]))
        raise ValueError(f"unknown term kind {k!r}")

    return go(j)


def strip_annotations(t: StTerm) -> StTerm:
    match t:
        case Lam(v, b, _, adm):
            return Lam(v, strip_annotations(b), None, adm)
        case P0(b):
            return P0(strip_annotations(b))
        case P1(b):
            return P1(strip_annotations(b))
        case Inj0(b):
            return Inj0(strip_annotations(b))
        case Inj1(b):
            return Inj1(strip_annotations(b))
        case Comp(l, r):
            return Comp(strip_annotations(l), strip_annotations(r))
        case App(l, r):
            return App(strip_annotations(l), strip_annotations(r))
        case Rec(l, r):
            return Rec(strip_annotations(l), strip_annotations(r))
        case Elim(a, b, c):
            return Elim(strip_annotations(a), strip_annotations(b), strip_annotations(c))
        case Ite(c, a, b):
            return Ite(c, strip_annotations(a), strip_annotations(b))
        case While(c, z, r, s, tt, u):
            return While(c, z, *(strip_annotations(p) for p in (r, s, tt, u)))
    return t
