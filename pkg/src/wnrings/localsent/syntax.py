"""Abstract syntax, parser and printer for local sentences.

Grammar (quantifiers may also open any sub-formula; ``->`` binds loosest
and associates to the right)::

    sent   := quant* form
    quant  := ("forallN" | "existsN") ident ["@" ident] "."
            | ("forallE" | "existsE") ident "in" (Scope | ident) "."
            | "existsC" ident "."
    form   := disj ["->" form]
    disj   := conj ("or" conj)*
    conj   := unit ("and" unit)*
    unit   := "not" unit | "(" form ")" | quant form | atom
    atom   := term "in" nbhd | term ("=" | "!=") term
    nbhd   := scaled ("+" scaled)*
    scaled := (factor ("*" | "/"))* ident

Terms use + - * / ^, integer literals, parentheses, bound element or
constant variables, and the field generator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import ParseError

MAX_SUMMANDS = 8
SCOPE = "Scope"

# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Pow:
    base: "Term"
    exp: int


Term = Union[Lit, Gen, Var, Neg, BinOp, Pow]

# --- formulas --------------------------------------------------------------


@dataclass(frozen=True)
class Scaled:
    coef: Term | None
    var: str


@dataclass(frozen=True)
class Mem:
    term: Term
    nbhd: tuple  # of Scaled


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Neq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class NbhdAll:
    var: str
    body: "Formula"
    basis: str | None = None


@dataclass(frozen=True)
class NbhdEx:
    var: str
    body: "Formula"
    basis: str | None = None


@dataclass(frozen=True)
class ElemAll:
    var: str
    scope: str
    body: "Formula"


@dataclass(frozen=True)
class ElemEx:
    var: str
    scope: str
    body: "Formula"


@dataclass(frozen=True)
class ConstEx:
    var: str
    body: "Formula"


Formula = Union[Mem, Eq, Neq, Not, And, Or, Implies, NbhdAll, NbhdEx, ElemAll, ElemEx, ConstEx]
Sentence = Formula
QUANTS = (NbhdAll, NbhdEx, ElemAll, ElemEx, ConstEx)

# --- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(->|!=|[.()+\-*/^=@]))")
KEYWORDS = {"forallN", "existsN", "forallE", "existsE", "existsC", "in", "not", "and", "or", SCOPE}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            w = m.group(2)
            out.append(("kw" if w in KEYWORDS else "id", w, start))
        else:
            out.append(("sym", m.group(3), start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, generator: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.gen = generator
        # stack of (name, kind) with kind in {"nbhd", "elem", "const"}
        self.scope: list[tuple[str, str]] = []

    # token helpers
    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def accept(self, value: str) -> bool:
        kind, v, _ = self.peek()
        if kind != "num" and v == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            got = self.peek()[1] or "end of input"
            self.error(f"expected {value!r}, got {got!r}")

    def ident(self) -> str:
        kind, v, _ = self.peek()
        if kind != "id":
            self.error(f"expected identifier, got {v or 'end of input'!r}")
        self.i += 1
        return v

    def lookup(self, name: str):
        for n, k in reversed(self.scope):
            if n == name:
                return k
        return None

    # entry
    def parse(self) -> Formula:
        if self.peek()[0] == "eof":
            self.error("empty sentence")
        f = self.form()
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def form(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.form())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("or"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unit()
        while self.accept("and"):
            f = And(f, self.unit())
        return f

    def unit(self) -> Formula:
        kind, v, _ = self.peek()
        if v == "not" and kind == "kw":
            self.i += 1
            return Not(self.unit())
        if kind == "kw" and v in ("forallN", "existsN", "forallE", "existsE", "existsC"):
            return self.quant()
        if v == "(" and self._paren_is_formula():
            self.i += 1
            f = self.form()
            self.expect(")")
            return f
        return self.atom()

    def _paren_is_formula(self) -> bool:
        # scan to the matching ")" and look for formula-only tokens
        depth = 0
        j = self.i
        while j < len(self.toks):
            kind, v, _ = self.toks[j]
            if v == "(" and kind == "sym":
                depth += 1
            elif v == ")" and kind == "sym":
                depth -= 1
                if depth == 0:
                    return False
            elif depth >= 1 and (kind == "kw" or v in ("=", "!=", "->")):
                return True
            elif kind == "eof":
                return False
            j += 1
        return False

    def quant(self) -> Formula:
        kind, q, _ = self.peek()
        self.i += 1
        tok = self.peek()
        var = self.ident()
        if self.lookup(var) is not None or var == self.gen:
            self.error(f"variable {var!r} is already bound", tok)
        if q in ("forallN", "existsN"):
            basis = self.ident() if self.accept("@") else None
            self.expect(".")
            self.scope.append((var, "nbhd"))
            body = self.form()
            self.scope.pop()
            return (NbhdAll if q == "forallN" else NbhdEx)(var, body, basis)
        if q == "existsC":
            self.expect(".")
            self.scope.append((var, "const"))
            body = self.form()
            self.scope.pop()
            return ConstEx(var, body)
        self.expect("in")
        stok = self.peek()
        if self.accept(SCOPE):
            scope = SCOPE
        else:
            scope = self.ident()
            if self.lookup(scope) != "nbhd":
                self.error(f"{scope!r} is not a bound neighborhood variable", stok)
        self.expect(".")
        self.scope.append((var, "elem"))
        body = self.form()
        self.scope.pop()
        return (ElemAll if q == "forallE" else ElemEx)(var, scope, body)

    def atom(self) -> Formula:
        left = self.term()
        if self.accept("in"):
            return Mem(left, self.nbhd())
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Neq(left, self.term())
        self.error("expected 'in', '=' or '!='")

    def nbhd(self) -> tuple:
        items = [self.scaled()]
        while self.accept("+"):
            items.append(self.scaled())
        if len(items) > MAX_SUMMANDS:
            self.error(f"neighborhood sums are limited to {MAX_SUMMANDS} summands")
        return tuple(items)

    def scaled(self) -> Scaled:
        coef = None
        op = None
        while True:
            kind, v, _ = self.peek()
            if kind == "id" and self.lookup(v) == "nbhd":
                self.i += 1
                return Scaled(coef, v)
            f = self.unary()
            coef = f if coef is None else BinOp(op, coef, f)
            if self.accept("*"):
                op = "*"
            elif self.accept("/"):
                op = "/"
            else:
                self.error("expected '*' followed by a neighborhood variable")

    # terms
    def term(self) -> Term:
        t = self.prod()
        while True:
            if self.accept("+"):
                t = BinOp("+", t, self.prod())
            elif self.accept("-"):
                t = BinOp("-", t, self.prod())
            else:
                return t

    def prod(self) -> Term:
        t = self.unary()
        while True:
            # stop before "* U" when U is a neighborhood variable
            nxt = self.peek(1)
            if self.peek()[1] in ("*", "/") and nxt[0] == "id" and self.lookup(nxt[1]) == "nbhd":
                return t
            if self.accept("*"):
                t = BinOp("*", t, self.unary())
            elif self.accept("/"):
                t = BinOp("/", t, self.unary())
            else:
                return t

    def unary(self) -> Term:
        if self.accept("-"):
            return Neg(self.unary())
        base = self.primary()
        if self.accept("^"):
            kind, v, _ = self.peek()
            neg = self.accept("-")
            kind, v, _ = self.peek()
            if kind != "num":
                self.error("expected integer exponent")
            self.i += 1
            return Pow(base, -int(v) if neg else int(v))
        return base

    def primary(self) -> Term:
        tok = self.peek()
        kind, v, _ = tok
        if kind == "num":
            self.i += 1
            return Lit(int(v))
        if v == "(" and kind == "sym":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        if kind == "id":
            self.i += 1
            if v == self.gen and self.lookup(v) is None:
                return Gen(v)
            k = self.lookup(v)
            if k is None:
                self.error(f"unbound variable {v!r}", tok)
            if k == "nbhd":
                self.error(f"neighborhood variable {v!r} cannot appear in a term", tok)
            return Var(v)
        self.error(f"expected a term, got {v or 'end of input'!r}")


def parse_sentence(text: str, generator: str = "t") -> Sentence:
    """Parse a closed local sentence; ``generator`` names the field variable."""
    return _Parser(text, generator).parse()


# --- printer ---------------------------------------------------------------

_TERM_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def print_term(t: Term, ctx: int = 0) -> str:
    if isinstance(t, Lit):
        return str(t.value)
    if isinstance(t, (Gen, Var)):
        return t.name
    if isinstance(t, Neg):
        s = "-" + print_term(t.arg, 3)
        return f"({s})" if ctx > 3 else s
    if isinstance(t, Pow):
        s = f"{print_term(t.base, 5)}^{t.exp}"
        return f"({s})" if ctx > 4 else s
    p = _TERM_PREC[t.op]
    s = f"{print_term(t.left, p)}{t.op}{print_term(t.right, p + 1)}"
    return f"({s})" if ctx > p else s


def _print_scaled(s: Scaled) -> str:
    if s.coef is None:
        return s.var
    # coefficient factors are unary terms joined by * and /
    return f"{_print_coef(s.coef)}*{s.var}"


def _print_coef(t: Term) -> str:
    if isinstance(t, BinOp) and t.op in ("*", "/"):
        return f"{_print_coef(t.left)}{t.op}{print_term(t.right, 3)}"
    return print_term(t, 3)


def print_sentence(f: Formula, ctx: int = 0) -> str:
    """Canonical text; parse_sentence(print_sentence(f)) == f."""
    if isinstance(f, Mem):
        return f"{print_term(f.term)} in {' + '.join(_print_scaled(s) for s in f.nbhd)}"
    if isinstance(f, Eq):
        return f"{print_term(f.left)} = {print_term(f.right)}"
    if isinstance(f, Neq):
        return f"{print_term(f.left)} != {print_term(f.right)}"
    if isinstance(f, Not):
        if isinstance(f.arg, (Mem, Eq, Neq)):
            return f"not ({print_sentence(f.arg)})"
        return "not " + print_sentence(f.arg, 4)
    if isinstance(f, And):
        s = f"{print_sentence(f.left, 3)} and {print_sentence(f.right, 4)}"
        return f"({s})" if ctx > 3 else s
    if isinstance(f, Or):
        s = f"{print_sentence(f.left, 2)} or {print_sentence(f.right, 3)}"
        return f"({s})" if ctx > 2 else s
    if isinstance(f, Implies):
        s = f"{print_sentence(f.left, 2)} -> {print_sentence(f.right, 1)}"
        return f"({s})" if ctx > 1 else s
    if isinstance(f, (NbhdAll, NbhdEx)):
        q = "forallN" if isinstance(f, NbhdAll) else "existsN"
        tag = f"@{f.basis}" if f.basis else ""
        s = f"{q} {f.var}{tag} . {print_sentence(f.body)}"
    elif isinstance(f, (ElemAll, ElemEx)):
        q = "forallE" if isinstance(f, ElemAll) else "existsE"
        s = f"{q} {f.var} in {f.scope} . {print_sentence(f.body)}"
    elif isinstance(f, ConstEx):
        s = f"existsC {f.var} . {print_sentence(f.body)}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    return f"({s})" if ctx > 0 else s


def free_summary(f: Formula) -> dict:
    """Counts of each quantifier kind, for reports."""
    out: dict = {}

    def walk(g):
        name = type(g).__name__
        out[name] = out.get(name, 0) + 1
        for child in children(g):
            walk(child)

    walk(f)
    return out


def children(f: Formula) -> tuple:
    if isinstance(f, (Not,)):
        return (f.arg,)
    if isinstance(f, (And, Or, Implies)):
        return (f.left, f.right)
    if isinstance(f, QUANTS):
        return (f.body,)
    return ()
