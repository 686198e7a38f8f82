"""Concrete syntax of ``.sdk`` theory files.

Grammar (``;;`` starts a comment that runs to the end of the line)::

    file   ::= entry*
    entry  ::= IDENT ':' term '.'  |  IDENT ':' term ':=' term '.'
    term   ::= '\\' IDENT ':' term '=>' term
             | '(' IDENT ':' term ')' '->' term
             | app ('->' term)?
    app    ::= atom atom*
    atom   ::= IDENT | '(' term ')'

Identifiers bound by an enclosing ``\\`` or Pi parse as :class:`DkVar`, all
others as :class:`DkSym`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

SIGNATURE_SYMBOLS = frozenset(
    "type arr prop ptype p term impl forallKtype proof forall forallKprop".split()
)


@dataclass(frozen=True)
class DkVar:
    name: str


@dataclass(frozen=True)
class DkSym:
    name: str


@dataclass(frozen=True)
class DkApp:
    fn: "DkTerm"
    arg: "DkTerm"


@dataclass(frozen=True)
class DkLam:
    var: str
    annot: "DkTerm"
    body: "DkTerm"


@dataclass(frozen=True)
class DkPi:
    var: str | None
    annot: "DkTerm"
    body: "DkTerm"


DkTerm = DkVar | DkSym | DkApp | DkLam | DkPi


@dataclass(frozen=True)
class Declaration:
    name: str
    type: DkTerm
    line: int = 0


@dataclass(frozen=True)
class Definition:
    name: str
    type: DkTerm
    body: DkTerm
    line: int = 0


DkEntry = Declaration | Definition


class DkSyntaxError(SyntaxError):
    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        detail = f"expected {expected}" + (f", found {found!r}" if found else "")
        super().__init__(f"{line}:{column}: {detail}")
        self.line = line
        self.column = column
        self.expected = expected


# -- smart constructors -----------------------------------------------------------


def dk_app(f: DkTerm, *args: DkTerm) -> DkTerm:
    for a in args:
        f = DkApp(f, a)
    return f


def dk_spine(t: DkTerm) -> tuple[DkTerm, list]:
    args = []
    while isinstance(t, DkApp):
        args.append(t.arg)
        t = t.fn
    return t, args[::-1]


def dk_arrow(a: DkTerm, b: DkTerm) -> DkPi:
    return DkPi(None, a, b)


# -- lexer ------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>;;[^\n]*)
  | (?P<define>:=)
  | (?P<arrow>->)
  | (?P<fatarrow>=>)
  | (?P<punct>[():.\\])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DkSyntaxError(line, pos - start + 1, "a token", text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            value = m.group()
            toks.append(_Tok(value if kind == "punct" else kind, value, line, pos - start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - start + 1))
    return toks


# -- parser -----------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        t = self.tok
        if t.kind != kind:
            raise DkSyntaxError(t.line, t.col, what or repr(kind), t.text or "end of input")
        self.i += 1
        return t

    def entries(self) -> list[DkEntry]:
        out = []
        names = set()
        while self.tok.kind != "eof":
            name_tok = self.expect("ident", "an entry name")
            if name_tok.text in names:
                raise DkSyntaxError(name_tok.line, name_tok.col, "a fresh entry name", name_tok.text)
            names.add(name_tok.text)
            self.expect(":")
            ty = self.term(frozenset())
            if self.tok.kind == "define":
                self.i += 1
                body = self.term(frozenset())
                self.expect(".", "'.' ending the entry")
                out.append(Definition(name_tok.text, ty, body, name_tok.line))
            else:
                self.expect(".", "'.' or ':=' after the type")
                out.append(Declaration(name_tok.text, ty, name_tok.line))
        return out

    def term(self, bound: frozenset) -> DkTerm:
        t = self.tok
        if t.kind == "\\":
            self.i += 1
            x = self.expect("ident", "a bound variable").text
            self.expect(":")
            annot = self.term(bound)
            self.expect("fatarrow", "'=>'")
            return DkLam(x, annot, self.term(bound | {x}))
        if t.kind == "(" and self.peek().kind == "ident" and self.peek(2).kind == ":":
            self.i += 1
            x = self.expect("ident").text
            self.expect(":")
            annot = self.term(bound)
            self.expect(")", "')' closing the binder")
            self.expect("arrow", "'->' after a dependent binder")
            return DkPi(x, annot, self.term(bound | {x}))
        lhs = self.app(bound)
        if self.tok.kind == "arrow":
            self.i += 1
            return DkPi(None, lhs, self.term(bound))
        return lhs

    def app(self, bound: frozenset) -> DkTerm:
        head = self.atom(bound)
        while self.tok.kind in ("ident", "(", "\\"):
            if self.tok.kind == "\\":
                # a trailing lambda is the last argument
                head = DkApp(head, self.term(bound))
                break
            head = DkApp(head, self.atom(bound))
        return head

    def atom(self, bound: frozenset) -> DkTerm:
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return DkVar(t.text) if t.text in bound else DkSym(t.text)
        if t.kind == "(":
            self.i += 1
            inner = self.term(bound)
            self.expect(")", "')'")
            return inner
        raise DkSyntaxError(t.line, t.col, "a term", t.text or "end of input")


def parse_dk(text: str) -> list[DkEntry]:
    """Entries of an ``.sdk`` file, in order."""
    return _Parser(text).entries()


def parse_term(text: str) -> DkTerm:
    p = _Parser(text)
    t = p.term(frozenset())
    p.expect("eof", "end of input")
    return t


# -- printer ----------------------------------------------------------------------


def show_dk(t: DkTerm, prec: int = 0) -> str:
    match t:
        case DkVar(x) | DkSym(x):
            return x
        case DkApp():
            head, args = dk_spine(t)
            s = " ".join([show_dk(head, 2)] + [show_dk(a, 2) for a in args])
            return f"({s})" if prec > 1 else s
        case DkLam(x, a, b):
            s = f"\\{x} : {show_dk(a, 0)} => {show_dk(b, 0)}"
            return f"({s})" if prec > 0 else s
        case DkPi(None, a, b):
            s = f"{show_dk(a, 1)} -> {show_dk(b, 0)}"
            return f"({s})" if prec > 0 else s
        case DkPi(x, a, b):
            s = f"({x} : {show_dk(a, 0)}) -> {show_dk(b, 0)}"
            return f"({s})" if prec > 0 else s
    raise TypeError(f"not a Dedukti term: {t!r}")


def show_entry(e: DkEntry) -> str:
    match e:
        case Declaration(name, ty):
            return f"{name} : {show_dk(ty)}."
        case Definition(name, ty, body):
            return f"{name} :\n  {show_dk(ty)}\n:= {show_dk(body)}."
    raise TypeError(f"not an entry: {e!r}")


def show_entries(entries) -> str:
    return "\n\n".join(show_entry(e) for e in entries) + ("\n" if entries else "")


# -- alpha-equivalence --------------------------------------------------------------


def dk_alpha_eq(t: DkTerm, u: DkTerm, env=()) -> bool:
    match t, u:
        case DkVar(x), DkVar(y):
            for a, b in reversed(env):
                if a == x or b == y:
                    return a == x and b == y
            return x == y
        case DkSym(x), DkSym(y):
            return x == y
        case DkApp(f, a), DkApp(g, b):
            return dk_alpha_eq(f, g, env) and dk_alpha_eq(a, b, env)
        case (DkLam(x, a, b), DkLam(y, c, d)) | (DkPi(x, a, b), DkPi(y, c, d)):
            if type(t) is not type(u) or not dk_alpha_eq(a, c, env):
                return False
            return dk_alpha_eq(b, d, env + ((x, y),))
    return False
