"""Concrete syntax: tokenizer, recursive-descent parser, pretty-printer.

Grammar, loosest binding first::

    expr   := 'forall' x ':' expr ',' expr
            | 'fun' x ':' expr '=>' expr
            | 'exists' x ':' expr ',' expr
            | iff
    iff    := imp ('<->' iff)?
    imp    := or ('->' imp)?
    or     := and ('\\/' or)?
    and    := not ('/\\' and)?
    not    := '~' not | eq
    eq     := app ('=' app ':>' app)?
    app    := atom atom*
    atom   := 'Prop' | 'Type<n>' | 'False' | ident | '(' expr ')'

Binder forms are right-open and may also appear as the last operand of any
infix operator.  Sugar is expanded while elaborating, so the kernel never sees
it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import term as T
from .term import App, Context, Lam, Pi, SortProp, SortType, Term, Var

KEYWORDS = {"forall", "fun", "exists", "Prop", "False", "Type"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<sym><->|->|=>|\\/|/\\|:>|[~():,;=])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self):
        return f"{self.line}:{self.col}"

    def join(self, other: "Span") -> "Span":
        return Span(self.line, self.col, other.end_line, other.end_col)


class ParseError(Exception):
    def __init__(self, message: str, span: Span, expected: frozenset[str] = frozenset()):
        self.message = message
        self.span = span
        self.expected = expected
        detail = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{span}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'sym', 'ident', 'kw', 'sort', 'eof'
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = Span(line, col, line, col + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        s = m.group()
        end_line, end_col = line, col
        for ch in s:
            if ch == "\n":
                end_line += 1
                end_col = 1
            else:
                end_col += 1
        span = Span(line, col, end_line, end_col)
        if m.lastgroup == "sym":
            tokens.append(Token("sym", s, span))
        elif m.lastgroup == "ident":
            if s == "Type":
                raise ParseError("bare 'Type' is not allowed; write Type0, Type1, ...", span)
            if re.fullmatch(r"Type[0-9]+", s):
                tokens.append(Token("sort", s, span))
            elif s in KEYWORDS:
                tokens.append(Token("kw", s, span))
            else:
                tokens.append(Token("ident", s, span))
        pos = m.end()
        line, col = end_line, end_col
    tokens.append(Token("eof", "", Span(line, col, line, col)))
    return tokens


# ------------------------------------------------------- source syntax tree


@dataclass(frozen=True)
class SourceTerm:
    """Concrete syntax node: ``kind`` names the production, ``args`` holds
    child nodes or binder names, ``span`` locates it in the input."""

    kind: str
    args: tuple = ()
    span: Span = field(default=None, compare=False)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "kw") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail({text})
        return self.advance()

    def fail(self, expected):
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {got}", t.span, frozenset(expected))

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail({"identifier"})
        return self.advance()

    # productions

    def expr(self) -> SourceTerm:
        t = self.tok
        if t.kind == "kw" and t.text in ("forall", "exists", "fun"):
            self.advance()
            x = self.ident()
            self.expect(":")
            dom = self.expr()
            self.expect("=>" if t.text == "fun" else ",")
            body = self.expr()
            return SourceTerm(t.text, (x.text, dom, body), t.span.join(body.span))
        return self.iff()

    def _infix(self, op: str, kind: str, sub, right):
        lhs = sub()
        if self.at(op):
            self.advance()
            rhs = right()
            return SourceTerm(kind, (lhs, rhs), lhs.span.join(rhs.span))
        return lhs

    def _operand(self, sub):
        # binder forms may close an infix chain without parentheses
        if self.tok.kind == "kw" and self.tok.text in ("forall", "exists", "fun"):
            return self.expr()
        return sub()

    def iff(self):
        return self._infix("<->", "iff", self.imp, lambda: self._operand(self.iff))

    def imp(self):
        return self._infix("->", "arrow", self.disj, lambda: self._operand(self.imp))

    def disj(self):
        return self._infix("\\/", "or", self.conj, lambda: self._operand(self.disj))

    def conj(self):
        return self._infix("/\\", "and", self.negation, lambda: self._operand(self.conj))

    def negation(self):
        if self.at("~"):
            t = self.advance()
            body = self._operand(self.negation)
            return SourceTerm("neg", (body,), t.span.join(body.span))
        return self.equality()

    def equality(self):
        lhs = self.app()
        if self.at("="):
            self.advance()
            rhs = self.app()
            self.expect(":>")
            ty = self.app()
            return SourceTerm("eq", (ty, lhs, rhs), lhs.span.join(ty.span))
        return lhs

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "sort") or (t.kind == "kw" and t.text in ("Prop", "False")) or self.at("(")

    def app(self):
        head = self.atom()
        while self._starts_atom():
            arg = self.atom()
            head = SourceTerm("app", (head, arg), head.span.join(arg.span))
        return head

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return SourceTerm("var", (t.text,), t.span)
        if t.kind == "sort":
            self.advance()
            return SourceTerm("type", (int(t.text[4:]),), t.span)
        if self.at("Prop"):
            self.advance()
            return SourceTerm("prop", (), t.span)
        if self.at("False"):
            self.advance()
            return SourceTerm("bottom", (), t.span)
        if self.at("("):
            self.advance()
            inner = self.expr()
            close = self.expect(")")
            return SourceTerm(inner.kind, inner.args, t.span.join(close.span))
        self.fail({"identifier", "Prop", "Type<n>", "False", "("})


def parse_source(text: str) -> SourceTerm:
    p = _Parser(text)
    st = p.expr()
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return st


def elaborate(st: SourceTerm, spans: dict | None = None) -> Term:
    """Lower a source tree to a kernel term, expanding sugar.

    If ``spans`` is given it is filled with ``id(term) -> Span`` for every
    produced node, so errors about a subterm can be located in the input.
    """
    k, a = st.kind, st.args
    if k == "var":
        out = Var(a[0])
    elif k == "prop":
        out = T.PROP
    elif k == "type":
        out = SortType(a[0])
    elif k == "app":
        out = App(elaborate(a[0], spans), elaborate(a[1], spans))
    elif k == "forall":
        out = Pi(a[0], elaborate(a[1], spans), elaborate(a[2], spans))
    elif k == "fun":
        out = Lam(a[0], elaborate(a[1], spans), elaborate(a[2], spans))
    elif k == "exists":
        out = T.expand_sugar("exists", [a[0], elaborate(a[1], spans), elaborate(a[2], spans)])
    elif k == "bottom":
        out = T.expand_sugar("bottom", [])
    else:
        out = T.expand_sugar(k, [elaborate(x, spans) for x in a])
    if spans is not None:
        spans.setdefault(id(out), st.span)
    return out


def parse_term(text: str, spans: dict | None = None) -> Term:
    return elaborate(parse_source(text), spans)


def parse_context(text: str) -> Context:
    """Parse ``x : T; y : U; ...`` into a context (empty text gives [])."""
    p = _Parser(text)
    entries = []
    seen = set()
    if p.tok.kind == "eof":
        return Context()
    while True:
        x = p.ident()
        if x.text in seen:
            raise T.DuplicateName(f"{x.span}: duplicate context name {x.text!r}")
        seen.add(x.text)
        p.expect(":")
        ty = elaborate(p.expr())
        entries.append((x.text, ty))
        if p.at(";"):
            p.advance()
            if p.tok.kind == "eof":
                break
            continue
        if p.tok.kind != "eof":
            p.fail({";", "end of input"})
        break
    return Context(tuple(entries))


# ------------------------------------------------------------- printing

_BINDER, _ARROW, _APP, _ATOM = 0, 1, 2, 3


def pretty(t: Term) -> str:
    return _pp(t, _BINDER)


def _paren(s: str, inner: int, ctx: int) -> str:
    return f"({s})" if inner < ctx else s


def _pp(t: Term, prec: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, SortProp):
        return "Prop"
    if isinstance(t, SortType):
        return f"Type{t.level}"
    if isinstance(t, App):
        return _paren(f"{_pp(t.fun, _APP)} {_pp(t.arg, _ATOM)}", _APP, prec)
    if isinstance(t, Lam):
        s = f"fun {t.binder} : {_pp(t.domain, _BINDER)} => {_pp(t.body, _BINDER)}"
        return _paren(s, _BINDER, prec)
    if isinstance(t, Pi):
        if t.binder not in t.codomain.fv:
            s = f"{_pp(t.domain, _APP)} -> {_pp(t.codomain, _BINDER)}"
            return _paren(s, _ARROW, prec)
        s = f"forall {t.binder} : {_pp(t.domain, _BINDER)}, {_pp(t.codomain, _BINDER)}"
        return _paren(s, _BINDER, prec)
    raise TypeError(f"not a term: {t!r}")
