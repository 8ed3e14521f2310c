"""Concrete syntax: theories (.slt), derivations (.slp), formulas and terms.

Formulas and terms use an infix notation that the ASCII pretty-printers emit,
so printed objects parse back.  Derivations are s-expressions with one
keyword per rule; formula arguments inside them are written in the infix
notation, usually as quoted strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from . import kernel as K
from . import pl as P
from . import stlang as st
from .statelogic import HAxiomSchema, StateLogicError
from .syntax import (
    And, Atom, Bot, Context, EMPTY, EQ, Exists, Forall, ForallTriple, FunApp, Imp,
    ImpTriple, NEQ, Or, SAnd, SAtom, SBot, SImp, SOr, STop, Signature, SignatureError,
    Top, Triple, Var, numeral, show_main, show_state, show_term, snot, succ,
)
from .theory import DefEq, FMeta, FormulaMeta, SAxiomSchema, SwapPat, Theory, TheoryError


# -------------------------------------------------------------- diagnostics


@dataclass
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self):
        return f"{self.line}:{self.col}-{self.end_line}:{self.end_col}"


@dataclass
class Diagnostic:
    severity: str
    message: str
    span: Span | None = None
    detail: str | None = None
    filename: str | None = None

    def __str__(self):
        where = self.filename or "<input>"
        if self.span:
            where += f":{self.span}"
        out = f"{where}: {self.severity}: {self.message}"
        if self.detail:
            out += f"\n    {self.detail}"
        return out


class ParseError(Exception):
    def __init__(self, message: str, span: Span | None = None, filename: str | None = None):
        self.diagnostic = Diagnostic("error", message, span, filename=filename)
        super().__init__(str(self.diagnostic))


# ------------------------------------------------------------------- lexing


_TOKEN = re.compile(r"""
  (?P<ws>\s+)
| (?P<comment>\#[^\n]*)
| (?P<str>"(?:[^"\\]|\\.)*")
| (?P<op><->|\|-|/\\|\\/|->|=>|!=|[(){}\[\],:.=~+*&;]|⊢|∧|∨|→|⇒|¬|⊤|⊥)
| (?P<num>[0-9]+)
| (?P<id>[^\W\d][\w']*)
""", re.VERBOSE)

_UNI = {"⊢": "|-", "∧": "/\\", "∨": "\\/", "→": "->", "⇒": "=>", "¬": "~",
        "⊤": "true", "⊥": "false"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int

    @property
    def span(self) -> Span:
        return Span(self.line, self.col, self.line, self.col + len(self.text))


def tokenize(text: str, line: int = 1, col: int = 1, filename=None) -> list[Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", Span(line, col, line, col + 1),
                             filename)
        kind, s = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            if kind == "op" and s in _UNI:
                s = _UNI[s]
                kind = "id" if s in ("true", "false") else "op"
            out.append(Tok(kind, s, line, col))
        raw = m.group()
        if "\n" in raw:
            line += raw.count("\n")
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    out.append(Tok("eof", "", line, col))
    return out


# ------------------------------------------------------------ infix parser


class _Infix:
    """Recursive-descent parser over a token list.

    ``theory`` (optional) decides between variables and constants; ``fmetas``
    lists formula metavariables allowed in schema patterns.
    """

    def __init__(self, toks, theory=None, fmetas=(), pl=False, filename=None):
        self.toks = toks
        self.i = 0
        self.th = theory
        self.fmetas = set(fmetas)
        self.pl = pl
        self.filename = filename
        self.bound: list[str] = []

    # --- token helpers
    def peek(self, k=0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text, k=0) -> bool:
        t = self.peek(k)
        return t.text == text and t.kind in ("op", "id")

    def next(self) -> Tok:
        t = self.peek()
        self.i += 1
        return t

    def expect(self, text) -> Tok:
        t = self.next()
        if t.text != text or t.kind not in ("op", "id"):
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def ident(self, what="identifier") -> str:
        t = self.next()
        if t.kind not in ("id", "num"):
            self.fail(f"expected {what}, found {t.text or 'end of input'!r}", t)
        return t.text

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.span, self.filename)

    def done(self):
        if self.peek().kind != "eof":
            self.fail(f"unexpected {self.peek().text!r}")

    # --- signature lookups
    @property
    def sa(self) -> bool:
        return self.th is not None and self.th.mode == "sa"

    def _is_const(self, name) -> bool:
        return (self.th is not None and name not in self.bound
                and self.th.signature.funcs.get(name) == 0)

    # --- terms
    def term(self):
        t = self.term_atom()
        while self.at("+") and self.peek(1).kind == "num":
            self.next()
            for _ in range(int(self.next().text)):
                t = succ(t)
        return t

    def term_atom(self):
        tok = self.next()
        if tok.kind == "num":
            if self.sa or (self.th is None and tok.text == "0"):
                return numeral(int(tok.text))
            return FunApp(tok.text)
        if tok.kind != "id":
            self.fail(f"expected a term, found {tok.text or 'end of input'!r}", tok)
        if self.at("("):
            self.next()
            args = [] if self.at(")") else self._list(self.term)
            self.expect(")")
            return FunApp(tok.text, tuple(args))
        if self._is_const(tok.text):
            return FunApp(tok.text)
        return Var(tok.text)

    def _list(self, item, sep=","):
        out = [item()]
        while self.at(sep):
            self.next()
            out.append(item())
        return out

    # --- state formulas
    def state(self):
        left = self._s_or()
        if self.at("->"):
            self.next()
            return SImp(left, self.state())
        return left

    def _s_or(self):
        left = self._s_and()
        if self.at("\\/"):
            self.next()
            return SOr(left, self._s_or())
        return left

    def _s_and(self):
        left = self._s_un()
        if self.at("/\\"):
            self.next()
            return SAnd(left, self._s_and())
        return left

    def _s_un(self):
        t = self.peek()
        if self.at("~"):
            self.next()
            return snot(self._s_un())
        if self.at("true"):
            self.next()
            return STop()
        if self.at("false"):
            self.next()
            return SBot()
        if self.at("("):
            self.next()
            f = self.state()
            self.expect(")")
            return self._swap_suffix(f)
        if t.kind == "id" and t.text in self.fmetas:
            self.next()
            return self._swap_suffix(FMeta(t.text))
        term = self.term()
        match term:
            case Var(n):
                return SAtom(n, ())
            case FunApp(f, args):
                return SAtom(f, args)
        self.fail("expected a state formula", t)

    def _swap_suffix(self, f):
        while self.at("[") and self.peek(2).text == "<->":
            self.next()
            a = self.ident("location variable")
            self.expect("<->")
            b = self.ident("location variable")
            self.expect("]")
            f = SwapPat(f, a, b)
        return f

    # --- main formulas
    def main(self):
        if self.at("all") or self.at("ex"):
            return self._quant()
        left = self._m_or()
        if self.at("=>"):
            self.next()
            if self.pl:
                return Imp(left, self.main())
            return ImpTriple(left, self.triple())
        return left

    def _quant(self):
        q = self.next().text
        x = self.ident("bound variable")
        self.expect(".")
        self.bound.append(x)
        try:
            if q == "ex":
                return Exists(x, self.main())
            if self.pl:
                return Forall(x, self.main())
            return ForallTriple(x, self.triple())
        finally:
            self.bound.pop()

    def _m_or(self):
        left = self._m_and()
        if self.at("\\/"):
            self.next()
            return Or(left, self._m_or())
        return left

    def _m_and(self):
        left = self._m_un()
        if self.at("/\\"):
            self.next()
            return And(left, self._m_and())
        return left

    def _m_un(self):
        t = self.peek()
        if self.at("true"):
            self.next()
            return Top()
        if self.at("false"):
            self.next()
            return Bot()
        if self.at("all") or self.at("ex"):
            return self._quant()
        if self.at("~") and self.pl:
            self.next()
            return P.neg(self._m_un())
        if self.at("("):
            self.next()
            f = self.main()
            self.expect(")")
            return f
        term = self.term()
        if self.at("=") or self.at("!="):
            op = EQ if self.next().text == "=" else NEQ
            return Atom(op, (term, self.term()))
        match term:
            case Var(n):
                return Atom(n, ())
            case FunApp(f, args):
                return Atom(f, args)
        self.fail("expected a formula", t)

    def triple(self):
        self.expect("{")
        pre = self.state()
        self.expect("}")
        body = self.main()
        self.expect("{")
        post = self.state()
        self.expect("}")
        return Triple(pre, body, post)

    # --- program types and terms
    def st_type(self):
        left = self._t_sum()
        if self.at("->"):
            self.next()
            return st.Arrow(left, self.st_type())
        return left

    def _t_sum(self):
        left = self._t_prod()
        if self.at("+"):
            self.next()
            return st.Sum(left, self._t_sum())
        return left

    def _t_prod(self):
        left = self._t_atom()
        if self.at("*"):
            self.next()
            return st.Prod(left, self._t_prod())
        return left

    def _t_atom(self):
        if self.at("("):
            self.next()
            t = self.st_type()
            self.expect(")")
            return t
        name = self.ident("type")
        if name == "D":
            return st.D
        if name in ("C", "1"):
            return st.C
        self.fail(f"unknown type {name!r}")

    _KEYWORDS = {"fun", "if", "then", "else"}

    def st_term(self):
        if self.at("fun"):
            self.next()
            ty = None
            if self.at("("):
                self.next()
                x = self.ident("variable")
                self.expect(":")
                ty = self.st_type()
                self.expect(")")
            else:
                x = self.ident("variable")
            self.expect("->")
            self.bound.append(x)
            try:
                body = self.st_term()
            finally:
                self.bound.pop()
            return st.Lam(x, body, ty)
        if self.at("if"):
            self.next()
            self.expect("{")
            c = self.state()
            self.expect("}")
            self.expect("then")
            a = self.st_term()
            self.expect("else")
            return st.Ite(c, a, self.st_term())
        f = self._st_prim()
        while self._starts_prim():
            f = st.App(f, self._st_prim())
        return f

    def _starts_prim(self) -> bool:
        t = self.peek()
        if t.kind == "num":
            return True
        if t.kind == "id":
            return t.text not in self._KEYWORDS
        return t.text == "(" and t.kind == "op"

    def _st_prim(self):
        t = self.next()
        if t.kind == "num":
            if self.sa and t.text != "0":
                return st.term_to_st(numeral(int(t.text)))
            return st.Fun(t.text)
        if t.text == "(" and t.kind == "op":
            a = self.st_term()
            if self.at("*") or self.at("&"):
                op = self.next().text
                b = self.st_term()
                self.expect(")")
                return st.star(a, b) if op == "*" else st.Comp(a, b)
            self.expect(")")
            return a
        if t.kind != "id":
            self.fail(f"expected a program term, found {t.text or 'end of input'!r}", t)
        name = t.text
        if name in self.bound:
            return st.Var(name)
        match name:
            case "skip":
                return st.SKIP
            case "default":
                self.expect("[")
                ty = self.st_type()
                self.expect("]")
                return st.Default(ty)
            case "p0" | "p1" | "inl" | "inr":
                args = self._st_args(1)
                return {"p0": st.P0, "p1": st.P1, "inl": st.Inj0, "inr": st.Inj1}[name](*args)
            case "elim":
                return st.Elim(*self._st_args(3))
            case "rec":
                return st.Rec(*self._st_args(2))
            case "while":
                self.expect("{")
                c = self.state()
                self.expect("}")
                self.expect("[")
                z = self.ident("loop variable")
                self.expect("]")
                return st.While(c, z, *self._st_args(4))
        if self.at("[") and self.peek(1).text != "<->":
            self.next()
            idx = [] if self.at("]") else self._list(self.term)
            self.expect("]")
            return st.Const(name, tuple(idx))
        if self.th is not None:
            if name in self.th.lconsts:
                return st.Const(name)
            if name in self.th.signature.funcs:
                return st.Fun(name)
        return st.Var(name)

    def _st_args(self, n):
        self.expect("(")
        out = [self.st_term()]
        for _ in range(n - 1):
            self.expect(",")
            out.append(self.st_term())
        self.expect(")")
        return out


def _infix(text, theory=None, fmetas=(), pl=False, filename=None, line=1, col=1) -> _Infix:
    return _Infix(tokenize(text, line, col, filename), theory, fmetas, pl, filename)


def _whole(text, method, **kw):
    p = _infix(text, **kw)
    out = getattr(p, method)()
    p.done()
    return out


def parse_term(text: str, theory=None):
    return _whole(text, "term", theory=theory)


def parse_state_formula(text: str, theory=None):
    return _whole(text, "state", theory=theory)


def parse_main_formula(text: str, theory=None, pl: bool = False):
    return _whole(text, "main", theory=theory, pl=pl)


def parse_triple(text: str, theory=None):
    return _whole(text, "triple", theory=theory)


def parse_st(text: str, theory=None):
    return _whole(text, "st_term", theory=theory)


def parse_type(text: str):
    return _whole(text, "st_type")


# ---------------------------------------------------------------- theories


def _logical_lines(text: str):
    """Declarations start at column 1; indented lines continue the previous one."""
    cur, start = [], None
    for n, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0]
        if not stripped.strip():
            continue
        if raw[:1].isspace() and cur:
            cur.append((n, raw))
            continue
        if cur:
            yield start, cur
        cur, start = [(n, raw)], n
    if cur:
        yield start, cur


def parse_theory(text: str, filename: str | None = None, base: Path | None = None) -> Theory:
    th = Theory(Signature())
    started = False
    for start, lines in _logical_lines(text):
        toks = []
        for n, raw in lines:
            toks.extend(tokenize(raw, n, 1, filename)[:-1])
        last = lines[-1]
        toks.append(Tok("eof", "", last[0], len(last[1]) + 1))
        p = _Infix(toks, th, filename=filename)
        head = p.peek()
        try:
            started = _declaration(p, th, started)
        except (SignatureError, TheoryError, StateLogicError, st.StTypeError) as e:
            raise ParseError(str(e), head.span, filename) from None
    try:
        th.check_realizers()
    except TheoryError as e:
        raise ParseError(str(e), None, filename) from None
    return th


def _declaration(p: _Infix, th: Theory, started: bool) -> bool:
    kw = p.ident("declaration keyword")
    match kw:
        case "mode":
            mode = p.ident("mode")
            if mode not in ("sl", "sa"):
                p.fail("mode must be sl or sa")
            if started:
                p.fail("mode must be the first declaration")
            th.signature = Signature(mode=mode)
        case "model":
            from .models import MODELS
            name = p.ident("model name")
            if name not in MODELS:
                p.fail(f"unknown model {name!r}")
            if th.model is not None:
                p.fail("a theory selects at most one model")
            th.model = name
            while p.peek().kind != "eof":
                k = p.ident("option")
                p.expect("=")
                th.model_options[k] = p.next().text
            for c, (arity, ty) in MODELS[name].constants.items():
                th.add_lconst(c, arity, ty)
        case "func" | "pred" | "statepred":
            name = p.ident("symbol")
            arity = int(p.next().text)
            {"func": th.signature.add_func, "pred": th.signature.add_pred,
             "statepred": th.signature.add_statepred}[kw](name, arity)
        case "stateprop":
            while True:
                th.signature.add_stateprop(p.ident("state proposition"))
                if p.peek().text != ",":
                    break
                p.next()
        case "canonical":
            name = p.ident("constant")
            if th.signature.funcs.get(name) != 0:
                p.fail(f"{name} is not a declared constant")
            th.signature.canonical = name
        case "const":
            name = p.ident("constant")
            arity = int(p.next().text) if p.peek().kind == "num" else 0
            p.expect(":")
            th.add_lconst(name, arity, p.st_type())
        case "hlimit":
            th.h_limit = int(p.next().text)
        case "haxiom":
            th.add_hschema(_haxiom(p))
        case "saxiom":
            th.add_sschema(_saxiom(p, th))
        case "defeq":
            name = p.ident("equation name")
            params = _params(p)
            p.expect(":")
            p.bound.extend(params)
            lhs = p.term()
            p.expect("=")
            rhs = p.term()
            th.add_defeq(DefEq(name, tuple(params), lhs, rhs))
        case _:
            p.fail(f"unknown declaration {kw!r}")
    p.done()
    return True


def _params(p: _Infix) -> list[str]:
    if not p.at("("):
        return []
    p.next()
    out = [] if p.at(")") else p._list(lambda: p.ident("metavariable"))
    p.expect(")")
    return out


def _where(p: _Infix, mvs) -> tuple:
    doms = []
    if not p.at("where"):
        return ()
    p.next()
    while True:
        names = p._list(lambda: p.ident("metavariable"))
        p.expect("in")
        terms = _term_set(p)
        for n in names:
            if n not in mvs:
                p.fail(f"{n} is not a metavariable")
            doms.append((n, terms))
        if not p.at(";"):
            return tuple(doms)
        p.next()


def _term_set(p: _Infix) -> tuple:
    p.expect("{")
    out = tuple(p._list(p.term))
    p.expect("}")
    return out


def _haxiom(p: _Infix) -> HAxiomSchema:
    name = p.ident("axiom name")
    mvs = _params(p)
    doms = _where(p, mvs)
    p.expect(":")
    p.bound.extend(mvs)
    hyps = []
    if not p.at("|-"):
        hyps = p._list(p.state)
    p.expect("|-")
    goal = p.state()
    return HAxiomSchema(name, tuple(mvs), tuple(hyps), goal, doms)


def _saxiom(p: _Infix, th: Theory) -> SAxiomSchema:
    name = p.ident("axiom name")
    mvs = _params(p)
    fms = []
    while p.at("formula"):
        p.next()
        f = p.ident("formula variable")
        if p.at(":") and p.at("conj", 1):
            p.next()
            p.next()
            pred = p.ident("predicate")
            dom = None
            if p.at("in"):
                p.next()
                dom = _term_set(p)
            fms.append(FormulaMeta(f, "conj", pred, dom))
        else:
            fms.append(FormulaMeta(f))
    doms = _where(p, mvs)
    p.expect(":")
    p.bound.extend(mvs)
    p.fmetas = {m.name for m in fms}
    tr = p.triple()
    p.fmetas = set()
    real = None
    if p.at("by"):
        p.next()
        real = p.st_term()
    return SAxiomSchema(name, tuple(mvs), tuple(fms), tr.pre, tr.body, tr.post, real, doms)


# ------------------------------------------------------------ s-expressions


@dataclass
class SAtomTok:
    text: str
    span: Span
    quoted: bool = False


@dataclass
class SList:
    items: list
    span: Span
    head: str | None = field(default=None)


_SEXP = re.compile(r'(?P<ws>\s+)|(?P<comment>;[^\n]*)|(?P<open>\()|(?P<close>\))'
                   r'|(?P<str>"(?:[^"\\]|\\.)*")|(?P<atom>[^\s()";]+)')


def read_sexps(text: str, filename=None) -> list:
    stack: list[list] = [[]]
    spans: list[tuple] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _SEXP.match(text, pos)
        if not m:
            raise ParseError("unreadable input", Span(line, col, line, col + 1), filename)
        kind, s = m.lastgroup, m.group()
        here = Span(line, col, line, col + len(s))
        if kind == "open":
            stack.append([])
            spans.append((line, col))
        elif kind == "close":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", here, filename)
            items = stack.pop()
            l0, c0 = spans.pop()
            sl = SList(items, Span(l0, c0, line, col + 1))
            if items and isinstance(items[0], SAtomTok) and not items[0].quoted:
                sl.head = items[0].text
            stack[-1].append(sl)
        elif kind == "str":
            body = s[1:-1].replace('\\"', '"').replace("\\\\", "\\")
            stack[-1].append(SAtomTok(body, here, True))
        elif kind == "atom":
            stack[-1].append(SAtomTok(s, here))
        if "\n" in s:
            line += s.count("\n")
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    if len(stack) != 1:
        l0, c0 = spans[-1]
        raise ParseError("unclosed '('", Span(l0, c0, l0, c0 + 1), filename)
    return stack[0]


# -------------------------------------------------------------- derivations


@dataclass
class ProofEntry:
    name: str
    ctx: Context
    derivation: object
    expect: Triple | None = None
    span: Span | None = None
    pl: bool = False
    # written as an embedded predicate-logic proof; lost when printed back
    embedded: bool = field(default=False, compare=False)


@dataclass
class ProofFile:
    theory: Theory
    theory_path: str | None
    proofs: dict
    filename: str | None = None
    # id(derivation node) -> Span of the s-expression that produced it
    spans: dict = field(default_factory=dict)

    def span_of(self, node):
        return self.spans.get(id(node)) if node is not None else None


class _Deriv:
    """Builds kernel (or predicate-logic) derivations from s-expressions."""

    def __init__(self, theory: Theory, named: dict, filename=None):
        self.th = theory
        self.named = named
        self.filename = filename
        self.spans: dict = {}

    def fail(self, msg, node):
        raise ParseError(msg, getattr(node, "span", None), self.filename)

    # --- data arguments
    def _text(self, x, what):
        if isinstance(x, SAtomTok):
            return x.text
        self.fail(f"expected {what}", x)

    def _sub(self, x, method, what, pl=False):
        if isinstance(x, SList):
            if method in ("state", "term"):
                return self._sexp_formula(x, method)
            self.fail(f"expected {what} as a string", x)
        text = self._text(x, what)
        sp = x.span
        col = sp.col + (1 if x.quoted else 0)
        p = _infix(text, theory=self.th, pl=pl, filename=self.filename, line=sp.line, col=col)
        out = getattr(p, method)()
        p.done()
        return out

    def term(self, x):
        return self._sub(x, "term", "a term")

    def state(self, x):
        return self._sub(x, "state", "a state formula")

    def main(self, x, pl=False):
        return self._sub(x, "main", "a formula", pl)

    def name(self, x, what="a name"):
        if isinstance(x, SAtomTok) and not x.quoted:
            return x.text
        self.fail(f"expected {what}", x)

    def _sexp_formula(self, x: SList, kind):
        head = x.head
        args = x.items[1:]
        if kind == "term":
            return FunApp(head, tuple(self.term(a) for a in args))
        match head, len(args):
            case "and", 2:
                return SAnd(self.state(args[0]), self.state(args[1]))
            case "or", 2:
                return SOr(self.state(args[0]), self.state(args[1]))
            case "imp", 2:
                return SImp(self.state(args[0]), self.state(args[1]))
            case "not", 1:
                return snot(self.state(args[0]))
        if head is None:
            self.fail("expected a state formula", x)
        return SAtom(head, tuple(self.term(a) for a in args))

    def hints(self, x):
        if isinstance(x, SAtomTok) and x.text == "auto" and not x.quoted:
            return None
        if not isinstance(x, SList) or x.head != "hints":
            self.fail("expected 'auto' or (hints (schema k=v ...) ...)", x)
        out = []
        for h in x.items[1:]:
            if not isinstance(h, SList) or h.head is None:
                self.fail("expected (schema k=v ...)", h)
            pos, kw = self._split(h.items[1:])
            if pos:
                self.fail("hint bindings must be written k=v", h)
            out.append((h.head, tuple(sorted((k, self.term(v)) for k, v in kw.items()))))
        return tuple(out)

    def _split(self, items):
        """Separate positional arguments from k=v and :key value pairs."""
        pos, kw = [], {}
        i = 0
        while i < len(items):
            it = items[i]
            if isinstance(it, SAtomTok) and not it.quoted:
                t = it.text
                if t.startswith(":") and len(t) > 1:
                    if i + 1 >= len(items):
                        self.fail(f"missing value for {t}", it)
                    kw[t] = items[i + 1]
                    i += 2
                    continue
                if "=" in t and not t.startswith("="):
                    k, v = t.split("=", 1)
                    if v == "":
                        if i + 1 >= len(items):
                            self.fail(f"missing value for {k}", it)
                        kw[k] = items[i + 1]
                        i += 2
                        continue
                    kw[k] = SAtomTok(v, it.span)
                    i += 1
                    continue
            pos.append(it)
            i += 1
        return pos, kw

    # --- derivations
    def build(self, x, pl=False):
        out = self._build(x, pl)
        self.spans.setdefault(id(out), x.span)
        return out

    def _build(self, x, pl=False):
        if not isinstance(x, SList) or x.head is None:
            self.fail("expected a derivation (rule ...)", x)
        pos, kw = self._split(x.items[1:])
        rules = _PL_RULES if pl else _RULES
        if x.head not in rules and x.head not in _MACROS:
            self.fail(f"unknown rule {x.head!r}", x)
        if x.head in _MACROS:
            return _MACROS[x.head](self, x, pos, kw, pl)
        shape, ctor = rules[x.head]
        req = [k for k in shape if not k.endswith("?")]
        if not (len(req) <= len(pos) <= len(shape)):
            self.fail(f"{x.head} expects {len(req)}"
                      + (f" to {len(shape)}" if len(shape) != len(req) else "")
                      + f" arguments, got {len(pos)}", x)
        vals = [self._arg(k.rstrip("?"), a, pl) for k, a in zip(shape, pos)]
        vals += [None] * (len(shape) - len(vals))
        extra = {}
        for k, v in kw.items():
            if not k.startswith(":"):
                self.fail(f"unexpected binding {k}= in {x.head}", x)
            key = k[1:]
            kinds = _KW.get((x.head, key))
            if kinds is None:
                self.fail(f"{x.head} has no option {k}", x)
            extra[key] = self._arg(kinds, v, pl)
        try:
            return ctor(self, vals, extra, x)
        except (TypeError, ValueError) as e:
            self.fail(f"{x.head}: {e}", x)

    def _arg(self, kind, a, pl):
        match kind:
            case "d":
                return self.build(a, pl)
            case "pd":
                return self.build(a, True)
            case "s":
                return self.state(a)
            case "m":
                return self.main(a, pl)
            case "t":
                return self.term(a)
            case "n":
                return self.name(a)
            case "h":
                return self.hints(a)
        raise AssertionError(kind)

    def binding(self, schema_vars, fvars, pos, kw, node):
        """Positional arguments fill term metavariables, then formula ones."""
        out = {}
        names = list(schema_vars) + list(fvars)
        if len(pos) > len(names):
            self.fail(f"too many arguments ({len(pos)} for {len(names)})", node)
        for n, a in zip(names, pos):
            out[n] = a
        for k, v in kw.items():
            if k.startswith(":"):
                continue
            if k in out:
                self.fail(f"{k} bound twice", node)
            out[k] = v
        res = {}
        for k, v in out.items():
            res[k] = self.state(v) if k in fvars else self.term(v)
        return res


def _tup(b: dict) -> tuple:
    return tuple(sorted(b.items()))


def _opt_state(v):
    return v if v is not None else STop()


# rule table: keyword -> (argument kinds, constructor); "?" marks optional
_RULES = {
    "hyp": (["n", "s?"], lambda b, v, kw, x: K.Hyp(v[0], _opt_state(v[1]))),
    "top": (["s?"], lambda b, v, kw, x: K.TopAx(_opt_state(v[0]))),
    "and_I": (["d", "d"], lambda b, v, kw, x: K.AndI(*v)),
    "and_EL": (["d"], lambda b, v, kw, x: K.AndEL(*v)),
    "and_ER": (["d"], lambda b, v, kw, x: K.AndER(*v)),
    "or_IL": (["d", "m"], lambda b, v, kw, x: K.OrIL(*v)),
    "or_IR": (["d", "m"], lambda b, v, kw, x: K.OrIR(*v)),
    "or_E": (["d", "n", "d", "n", "d"], lambda b, v, kw, x: K.OrE(*v)),
    "imp_I": (["n", "m", "d", "s?"], lambda b, v, kw, x: K.ImpI(v[0], v[1], v[2], _opt_state(v[3]))),
    "imp_E": (["d", "d"], lambda b, v, kw, x: K.ImpE(*v)),
    "bot_E": (["d", "m", "s?"], lambda b, v, kw, x: K.BotE(v[0], v[1], _opt_state(v[2]))),
    "forall_I": (["n", "d", "s?"],
                 lambda b, v, kw, x: K.ForallI(v[0], v[1], _opt_state(v[2] or kw.get("outer")),
                                               kw.get("bound"))),
    "forall_E": (["d", "t"], lambda b, v, kw, x: K.ForallE(*v)),
    "exists_I": (["t", "n", "m", "d"], lambda b, v, kw, x: K.ExistsI(*v)),
    "exists_E": (["d", "n", "n", "d"], lambda b, v, kw, x: K.ExistsE(*v)),
    "cons": (["d"], lambda b, v, kw, x: K.Cons(v[0], kw.get("pre"), kw.get("post"),
                                               kw.get("pre_hints"), kw.get("post_hints"))),
    "cond": (["s", "s", "h", "d", "d"], lambda b, v, kw, x: K.Cond(*v)),
    "eq_refl": (["t", "s?"], lambda b, v, kw, x: K.EqRefl(v[0], _opt_state(v[1]))),
    "eq_sym": (["d"], lambda b, v, kw, x: K.EqSym(*v)),
    "eq_trans": (["d", "d"], lambda b, v, kw, x: K.EqTrans(*v)),
    "ext": (["d", "d", "n", "m", "s"], lambda b, v, kw, x: K.Ext(*v)),
    "succ_nonzero": (["t", "s?"], lambda b, v, kw, x: K.SuccNonzero(v[0], _opt_state(v[1]))),
    "succ_inj": (["d"], lambda b, v, kw, x: K.SuccInj(*v)),
    "ind": (["d", "n", "n", "m", "d", "s?"],
            lambda b, v, kw, x: K.Ind(v[0], v[1], v[2], v[3], v[4], _opt_state(v[5]))),
    "while": (["n", "n", "n", "s", "d", "d", "d"], lambda b, v, kw, x: K.WhileRule(*v)),
}

_KW = {
    ("forall_I", "outer"): "s", ("forall_I", "bound"): "n",
    ("cons", "pre"): "s", ("cons", "post"): "s",
    ("cons", "pre_hints"): "h", ("cons", "post_hints"): "h",
}

_PL_RULES = {
    "hyp": (["n"], lambda b, v, kw, x: P.PHyp(v[0])),
    "top": ([], lambda b, v, kw, x: P.PTopI()),
    "and_I": (["d", "d"], lambda b, v, kw, x: P.PAndI(*v)),
    "and_EL": (["d"], lambda b, v, kw, x: P.PAndEL(*v)),
    "and_ER": (["d"], lambda b, v, kw, x: P.PAndER(*v)),
    "or_IL": (["d", "m"], lambda b, v, kw, x: P.POrIL(*v)),
    "or_IR": (["d", "m"], lambda b, v, kw, x: P.POrIR(*v)),
    "or_E": (["d", "n", "d", "n", "d"], lambda b, v, kw, x: P.POrE(*v)),
    "imp_I": (["n", "m", "d"], lambda b, v, kw, x: P.PImpI(*v)),
    "imp_E": (["d", "d"], lambda b, v, kw, x: P.PImpE(*v)),
    "bot_E": (["d", "m"], lambda b, v, kw, x: P.PBotE(*v)),
    "forall_I": (["n", "d"], lambda b, v, kw, x: P.PForallI(v[0], v[1], kw.get("bound"))),
    "forall_E": (["d", "t"], lambda b, v, kw, x: P.PForallE(*v)),
    "exists_I": (["t", "n", "m", "d"], lambda b, v, kw, x: P.PExistsI(*v)),
    "exists_E": (["d", "n", "n", "d"], lambda b, v, kw, x: P.PExistsE(*v)),
    "eq_refl": (["t"], lambda b, v, kw, x: P.PEqRefl(*v)),
    "eq_sym": (["d"], lambda b, v, kw, x: P.PEqSym(*v)),
    "eq_trans": (["d", "d"], lambda b, v, kw, x: P.PEqTrans(*v)),
    "ext": (["d", "d", "n", "m"], lambda b, v, kw, x: P.PExt(*v)),
    "succ_nonzero": (["t"], lambda b, v, kw, x: P.PSuccNonzero(*v)),
    "succ_inj": (["d"], lambda b, v, kw, x: P.PSuccInj(*v)),
    "ind": (["d", "n", "n", "m", "d"], lambda b, v, kw, x: P.PInd(*v)),
}
_KW[("forall_I", "bound")] = "n"


def _m_sax(b: _Deriv, x, pos, kw, pl):
    if pl or not pos:
        b.fail("sax needs an action axiom name", x)
    name = b.name(pos[0], "an action axiom name")
    sch = b.th.sschemas.get(name)
    if sch is None:
        b.fail(f"unknown action axiom {name!r}", pos[0])
    bind = b.binding(sch.metavars, [m.name for m in sch.fmetas], pos[1:], kw, x)
    return K.SAxiom(name, _tup(bind))


def _m_defeq(b: _Deriv, x, pos, kw, pl):
    if not pos:
        b.fail("defeq needs an equation name", x)
    name = b.name(pos[0], "an equation name")
    de = b.th.defeqs.get(name)
    if de is None:
        b.fail(f"unknown defining equation {name!r}", pos[0])
    rest = pos[1:]
    state = None
    if not pl and len(rest) == len(de.params) + 1:
        state = b.state(rest[-1])
        rest = rest[:-1]
    if ":state" in kw and not pl:
        state = b.state(kw[":state"])
    bind = b.binding(de.params, [], rest, {k: v for k, v in kw.items() if k != ":state"}, x)
    if pl:
        return P.PDefEq(name, _tup(bind))
    return K.DefEqAx(name, _tup(bind), _opt_state(state))


def _m_use(b: _Deriv, x, pos, kw, pl):
    if len(pos) != 1:
        b.fail("use takes one proof name", x)
    name = b.name(pos[0], "a proof name")
    entry = b.named.get(name)
    if entry is None:
        b.fail(f"unknown proof {name!r} (proofs must be defined before use)", pos[0])
    if entry.pl != pl:
        b.fail(f"proof {name} belongs to the other logic", pos[0])
    return entry.derivation


def _m_comp(b: _Deriv, x, pos, kw, pl):
    if pl or len(pos) != 2:
        b.fail("comp takes two derivations", x)
    return K.derive_comp(b.build(pos[0]), b.build(pos[1]))


def _m_embed(b: _Deriv, x, pos, kw, pl):
    if pl or len(pos) != 2:
        b.fail("embed takes a state formula and a predicate-logic derivation", x)
    alpha = b.state(pos[0])
    d = b.build(pos[1], pl=True)
    try:
        return P.embed_pl(d, alpha, b.th)
    except P.PLError as e:
        b.fail(f"embedding failed: {e}", x)


def _m_ext_ha(b: _Deriv, x, pos, kw, pl):
    if pl or len(pos) != 6:
        b.fail("ext_ha takes an equation proof, a variable, pre, body, post and a derivation", x)
    eqd = b.build(pos[0], pl=True)
    var = b.name(pos[1], "a variable")
    pre, body, post = b.state(pos[2]), b.main(pos[3]), b.state(pos[4])
    d = b.build(pos[5])
    try:
        return K.derive_ext(eqd, var, pre, body, post, d, b.th)
    except (P.PLError, K.KernelError) as e:
        b.fail(f"ext_ha: {e}", x)


_MACROS = {"sax": _m_sax, "defeq": _m_defeq, "use": _m_use, "comp": _m_comp,
           "embed": _m_embed, "ext_ha": _m_ext_ha}


def parse_derivation(text: str, theory: Theory, pl: bool = False, named=None, filename=None):
    """A single derivation expression."""
    items = read_sexps(text, filename)
    if len(items) != 1:
        raise ParseError("expected exactly one derivation", None, filename)
    return _Deriv(theory, named or {}, filename).build(items[0], pl)


def parse_proofs(text: str, theory: Theory | None = None, filename: str | None = None,
                 base: Path | None = None) -> ProofFile:
    """A proof file: an optional (theory "file.slt") header and (proof ...) forms."""
    items = read_sexps(text, filename)
    theory_path = None
    named: dict = {}
    b = None
    for it in items:
        if not isinstance(it, SList) or it.head is None:
            raise ParseError("expected (theory ...) or (proof ...)", getattr(it, "span", None),
                             filename)
        if it.head == "theory":
            if theory is not None and theory_path is not None:
                raise ParseError("duplicate theory header", it.span, filename)
            if len(it.items) != 2 or not isinstance(it.items[1], SAtomTok):
                raise ParseError('expected (theory "file.slt")', it.span, filename)
            theory_path = it.items[1].text
            if theory is None:
                theory = load_theory(theory_path, base)
            continue
        if theory is None:
            raise ParseError("no theory given before the first proof", it.span, filename)
        b = b or _Deriv(theory, named, filename)
        if it.head in ("proof", "plproof"):
            entry = _proof_entry(b, it, it.head == "plproof")
            if entry.name in named:
                raise ParseError(f"duplicate proof name {entry.name!r}", it.span, filename)
            named[entry.name] = entry
        else:
            raise ParseError(f"unknown form {it.head!r}", it.span, filename)
    if theory is None:
        raise ParseError("proof file names no theory", None, filename)
    theory.proofs.update({k: v.derivation for k, v in named.items()})
    return ProofFile(theory, theory_path, named, filename, b.spans if b else {})


def _proof_entry(b: _Deriv, it: SList, pl: bool) -> ProofEntry:
    args = it.items[1:]
    if not args:
        b.fail("proof needs a name", it)
    name = b.name(args[0], "a proof name")
    pos, kw = b._split(args[1:])
    ctx = EMPTY
    rest = []
    for a in pos:
        if isinstance(a, SList) and a.head == "ctx":
            for h in a.items[1:]:
                if not (isinstance(h, SList) and len(h.items) == 2):
                    b.fail("context entries are (label \"formula\")", h)
                lab = b.name(h.items[0], "a hypothesis label")
                ctx = ctx.extend(lab, b.main(h.items[1], pl))
        else:
            rest.append(a)
    if len(rest) != 1:
        b.fail("proof takes exactly one derivation", it)
    expect = None
    if ":expect" in kw:
        expect = b.main(kw[":expect"], pl) if pl else b._sub(kw[":expect"], "triple", "a triple")
    d = b.build(rest[0], pl)
    embedded = isinstance(rest[0], SList) and rest[0].head == "embed"
    return ProofEntry(name, ctx, d, expect, it.span, pl, embedded)


# ------------------------------------------------------------------ loading


def _resolve(path: str, base: Path | None) -> Path:
    p = Path(path)
    if not p.is_absolute() and base is not None and (base / p).exists():
        return base / p
    if p.exists():
        return p
    from .models import corpus_path
    cp = corpus_path(p.name)
    if cp.is_file():
        return Path(str(cp))
    raise FileNotFoundError(path)


def load_theory(path: str, base: Path | None = None) -> Theory:
    p = _resolve(path, base)
    return parse_theory(p.read_text(encoding="utf-8"), filename=str(p), base=p.parent)


def load_proofs(path: str) -> ProofFile:
    """Load a proof file; ``path`` may omit the .slp suffix or name a shipped example."""
    candidates = [path] if path.endswith(".slp") else [path + ".slp", path]
    for c in candidates:
        try:
            p = _resolve(c, None)
        except FileNotFoundError:
            continue
        if p.is_file():
            return parse_proofs(p.read_text(encoding="utf-8"), filename=str(p), base=p.parent)
    raise FileNotFoundError(path)


# ----------------------------------------------------------------- printing


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _sq(f) -> str:
    return _q(show_state(f, False))


def _mq(f) -> str:
    return _q(show_main(f, False))


def _tq(t) -> str:
    return _q(show_term(t))


def _hq(h) -> str:
    if h is None:
        return "auto"
    parts = []
    for name, b in h:
        kv = " ".join(f"{k}={_tq(v)}" for k, v in b)
        parts.append(f"({name} {kv})" if kv else f"({name})")
    return "(hints " + " ".join(parts) + ")"


def _bq(v) -> str:
    if isinstance(v, (Var, FunApp)):
        return _tq(v)
    return _sq(v)


def show_derivation(d, pl: bool = False) -> str:
    """Print a derivation in the proof syntax.  Derived-rule macros are
    printed expanded, so the output parses back to an equal tree."""
    g = lambda x: show_derivation(x, pl)  # noqa: E731
    match d:
        case K.Hyp(u, s):
            return f"(hyp {u} {_sq(s)})"
        case K.TopAx(s):
            return f"(top {_sq(s)})"
        case K.AndI(a, b) | P.PAndI(a, b):
            return f"(and_I {g(a)} {g(b)})"
        case K.AndEL(a) | P.PAndEL(a):
            return f"(and_EL {g(a)})"
        case K.AndER(a) | P.PAndER(a):
            return f"(and_ER {g(a)})"
        case K.OrIL(a, r) | P.POrIL(a, r):
            return f"(or_IL {g(a)} {_mq(r)})"
        case K.OrIR(a, left) | P.POrIR(a, left):
            return f"(or_IR {g(a)} {_mq(left)})"
        case K.OrE(a, u, b, v, c) | P.POrE(a, u, b, v, c):
            return f"(or_E {g(a)} {u} {g(b)} {v} {g(c)})"
        case K.ImpI(u, a, b, o):
            return f"(imp_I {u} {_mq(a)} {g(b)} {_sq(o)})"
        case P.PImpI(u, a, b):
            return f"(imp_I {u} {_mq(a)} {g(b)})"
        case K.ImpE(a, b) | P.PImpE(a, b):
            return f"(imp_E {g(a)} {g(b)})"
        case K.BotE(a, t, s):
            return f"(bot_E {g(a)} {_mq(t)} {_sq(s)})"
        case P.PBotE(a, t):
            return f"(bot_E {g(a)} {_mq(t)})"
        case K.ForallI(y, a, o, bound):
            extra = f" :bound {bound}" if bound else ""
            return f"(forall_I {y} {g(a)} {_sq(o)}{extra})"
        case P.PForallI(y, a, bound):
            extra = f" :bound {bound}" if bound else ""
            return f"(forall_I {y} {g(a)}{extra})"
        case K.ForallE(a, t) | P.PForallE(a, t):
            return f"(forall_E {g(a)} {_tq(t)})"
        case K.ExistsI(t, x, body, a) | P.PExistsI(t, x, body, a):
            return f"(exists_I {_tq(t)} {x} {_mq(body)} {g(a)})"
        case K.ExistsE(a, y, u, b) | P.PExistsE(a, y, u, b):
            return f"(exists_E {g(a)} {y} {u} {g(b)})"
        case K.Cons(a, pre, post, ph, qh):
            out = f"(cons {g(a)}"
            if pre is not None:
                out += f" :pre {_sq(pre)}"
            if post is not None:
                out += f" :post {_sq(post)}"
            if ph is not None:
                out += f" :pre_hints {_hq(ph)}"
            if qh is not None:
                out += f" :post_hints {_hq(qh)}"
            return out + ")"
        case K.Cond(a, b, h, d1, d2):
            return f"(cond {_sq(a)} {_sq(b)} {_hq(h)} {g(d1)} {g(d2)})"
        case K.SAxiom(name, binding):
            kv = " ".join(f"{k}={_bq(v)}" for k, v in binding)
            return f"(sax {name} {kv})" if kv else f"(sax {name})"
        case K.EqRefl(t, s):
            return f"(eq_refl {_tq(t)} {_sq(s)})"
        case P.PEqRefl(t):
            return f"(eq_refl {_tq(t)})"
        case K.EqSym(a) | P.PEqSym(a):
            return f"(eq_sym {g(a)})"
        case K.EqTrans(a, b) | P.PEqTrans(a, b):
            return f"(eq_trans {g(a)} {g(b)})"
        case K.Ext(a, b, x, body, post):
            return f"(ext {g(a)} {g(b)} {x} {_mq(body)} {_sq(post)})"
        case P.PExt(a, b, x, body):
            return f"(ext {g(a)} {g(b)} {x} {_mq(body)})"
        case K.SuccNonzero(t, s):
            return f"(succ_nonzero {_tq(t)} {_sq(s)})"
        case P.PSuccNonzero(t):
            return f"(succ_nonzero {_tq(t)})"
        case K.SuccInj(a) | P.PSuccInj(a):
            return f"(succ_inj {g(a)})"
        case K.DefEqAx(name, binding, s):
            kv = " ".join(f"{k}={_tq(v)}" for k, v in binding)
            return f"(defeq {name} {kv} :state {_sq(s)})"
        case P.PDefEq(name, binding):
            kv = " ".join(f"{k}={_tq(v)}" for k, v in binding)
            return f"(defeq {name} {kv})".replace("  ", " ")
        case K.Ind(base, x, u, f, step, o):
            return f"(ind {g(base)} {x} {u} {_mq(f)} {g(step)} {_sq(o)})"
        case P.PInd(base, x, u, f, step):
            return f"(ind {g(base)} {x} {u} {_mq(f)} {g(step)})"
        case K.WhileRule(x, u, z, c, d1, d2, d3):
            return f"(while {x} {u} {z} {_sq(c)} {g(d1)} {g(d2)} {g(d3)})"
        case P.PTopI():
            return "(top)"
        case P.PHyp(u):
            return f"(hyp {u})"
    raise TypeError(f"not a derivation: {d!r}")


def show_theory(th: Theory) -> str:
    """Print a theory in the .slt syntax (schemas and declarations only)."""
    lines = [f"mode {th.mode}"]
    if th.model:
        opts = "".join(f" {k}={v}" for k, v in th.model_options.items())
        lines.append(f"model {th.model}{opts}")
    sig = th.signature
    builtin = {"0", "succ", EQ, NEQ} if th.mode == "sa" else set()
    for f, n in sig.funcs.items():
        if f not in builtin:
            lines.append(f"func {f} {n}")
    for f, n in sig.preds.items():
        if f not in builtin:
            lines.append(f"pred {f} {n}")
    for f, n in sig.statepreds.items():
        lines.append(f"statepred {f} {n}")
    if sig.stateprops:
        lines.append(f"stateprop {', '.join(sig.stateprops)}")
    if sig.canonical and not (th.mode == "sa" and sig.canonical == "0"):
        lines.append(f"canonical {sig.canonical}")
    from .models import MODELS
    model_consts = MODELS[th.model].constants if th.model in MODELS else {}
    for c, (arity, ty) in th.lconsts.items():
        if c not in model_consts:
            lines.append(f"const {c} {arity} : {st.show_type(ty)}")
    if th.h_limit != 24:
        lines.append(f"hlimit {th.h_limit}")

    def where(mvs, doms):
        if not doms:
            return ""
        return " where " + "; ".join(
            f"{n} in {{{', '.join(show_term(t) for t in ts)}}}" for n, ts in doms)

    def params(mvs):
        return f"({', '.join(mvs)})" if mvs else ""

    for h in th.hschemas:
        hyps = ", ".join(show_state(x, False) for x in h.hyps)
        sep = " " if hyps else ""
        lines.append(f"haxiom {h.name}{params(h.metavars)}{where(h.metavars, h.domains)}: "
                     f"{hyps}{sep}|- {show_state(h.goal, False)}")
    for s in th.sschemas.values():
        fm = ""
        for m in s.fmetas:
            if m.kind == "conj":
                dom = f" in {{{', '.join(show_term(t) for t in m.domain)}}}" if m.domain else ""
                fm += f" formula {m.name}: conj {m.pred}{dom}"
            else:
                fm += f" formula {m.name}"
        body = (f"{{{_show_pat(s.pre)}}} {show_main(s.body, False)} {{{_show_pat(s.post)}}}")
        real = f" by {st.show_st(s.realizer)}" if s.realizer is not None else ""
        lines.append(f"saxiom {s.name}{params(s.metavars)}{fm}{where(s.metavars, s.domains)}: "
                     f"{body}{real}")
    for de in th.defeqs.values():
        lines.append(f"defeq {de.name}{params(de.params)}: {show_term(de.lhs)} = {show_term(de.rhs)}")
    return "\n".join(lines) + "\n"


def _show_pat(p) -> str:
    match p:
        case FMeta(n):
            return n
        case SwapPat(inner, a, b):
            inner_s = _show_pat(inner)
            if not isinstance(inner, (FMeta, SwapPat)):
                inner_s = f"({inner_s})"
            return f"{inner_s}[{a}<->{b}]"
        case SAnd(l, r):
            return f"({_show_pat(l)} /\\ {_show_pat(r)})"
        case SOr(l, r):
            return f"({_show_pat(l)} \\/ {_show_pat(r)})"
        case SImp(l, SBot()):
            return f"~({_show_pat(l)})"
        case SImp(l, r):
            return f"({_show_pat(l)} -> {_show_pat(r)})"
    return show_state(p, False)


def show_proofs(pf: ProofFile) -> str:
    out = []
    if pf.theory_path:
        out.append(f"(theory {_q(pf.theory_path)})")
    for e in pf.proofs.values():
        head = "plproof" if e.pl else "proof"
        ctx = ""
        if len(e.ctx):
            ctx = " (ctx " + " ".join(f"({u} {_mq(f)})" for u, f in e.ctx) + ")"
        exp = ""
        if e.expect is not None:
            exp = f" :expect {_mq(e.expect) if e.pl else _q(_show_triple_ascii(e.expect))}"
        out.append(f"({head} {e.name}{ctx}{exp}\n  {show_derivation(e.derivation, e.pl)})")
    return "\n".join(out) + "\n"


def _show_triple_ascii(tr: Triple) -> str:
    from .syntax import show_triple
    return show_triple(tr, False)


__all__ = [
    "Diagnostic", "ParseError", "ProofEntry", "ProofFile", "Span", "load_proofs",
    "load_theory", "parse_derivation", "parse_main_formula", "parse_proofs", "parse_st",
    "parse_state_formula", "parse_term", "parse_theory", "parse_triple", "parse_type",
    "read_sexps", "show_derivation", "show_proofs", "show_theory", "tokenize",
]
