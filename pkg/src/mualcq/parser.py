"""Surface syntax: tokenizer, recursive-descent parser and pretty printer.

Grammar (``not`` binds tighter than ``and``, which binds tighter than ``or``;
both binary operators associate to the left)::

    concept := or
    or      := and ("or" and)*
    and     := unary ("and" unary)*
    unary   := "not" unary
             | ("exists" | "forall") role "." unary
             | ("atleast" | "atmost") NAT role "." unary
             | ("mu" | "nu") IDENT "." concept        # body extends maximally right
             | atom
    atom    := "top" | "bot" | IDENT | "(" concept ")" | "wf" "(" role ")"
    role    := chain ("|" chain)*
    chain   := postfix (";" postfix)*
    postfix := ratom "*"*
    ratom   := IDENT | "(" role ")" | "id" "(" concept ")"

A concept may start with a ``free X, Y;`` header declaring free variables.
An identifier is a variable when bound by an enclosing mu/nu or declared free,
otherwise an atomic concept.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax as s
from .errors import InverseRoleUnsupported, ParseError

KEYWORDS = frozenset(
    "top bot not and or exists forall atleast atmost mu nu wf id free".split()
)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op><=|==|\^-|[.()*;|,])
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "ident", "nat", "op", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1) -> list:
    tokens = []
    pos, col = 0, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind == "ident" and value in KEYWORDS:
                kind = "kw"
            if kind not in ("ws", "comment"):
                tokens.append(Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens, free=()):
        self.tokens = tokens
        self.pos = 0
        self.free = set(free)
        self.scope = []

    # token helpers
    @property
    def tok(self):
        return self.tokens[self.pos]

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.column)

    def at(self, *texts):
        return self.tok.kind in ("kw", "op") and self.tok.text in texts

    def accept(self, text):
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def ident(self, what):
        tok = self.tok
        if tok.kind != "ident":
            self.error(f"expected {what}")
        self.pos += 1
        return tok.text

    # grammar
    def header(self):
        if self.accept("free"):
            self.free.add(self.ident("variable name"))
            while self.accept(","):
                self.free.add(self.ident("variable name"))
            self.expect(";")

    def concept(self):
        left = self.conjunction()
        while self.accept("or"):
            left = s.Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.accept("and"):
            left = s.And(left, self.unary())
        return left

    def unary(self):
        if self.accept("not"):
            return s.Not(self.unary())
        if self.at("exists", "forall"):
            cls = s.Exists if self.tok.text == "exists" else s.Forall
            self.pos += 1
            role = self.role()
            self.expect(".")
            return cls(role, self.unary())
        if self.at("atleast", "atmost"):
            cls = s.AtLeast if self.tok.text == "atleast" else s.AtMost
            self.pos += 1
            if self.tok.kind != "nat":
                self.error("expected a natural number")
            n = int(self.tok.text)
            self.pos += 1
            role = self.role()
            self.expect(".")
            return cls(n, role, self.unary())
        if self.at("mu", "nu"):
            cls = s.Mu if self.tok.text == "mu" else s.Nu
            self.pos += 1
            var = self.ident("variable name")
            self.expect(".")
            self.scope.append(var)
            try:
                body = self.concept()
            finally:
                self.scope.pop()
            return cls(var, body)
        return self.atom()

    def atom(self):
        tok = self.tok
        if self.accept("top"):
            return s.TOP
        if self.accept("bot"):
            return s.BOT
        if self.accept("("):
            inner = self.concept()
            self.expect(")")
            return inner
        if self.accept("wf"):
            self.expect("(")
            role = self.role()
            self.expect(")")
            return s.WellFounded(role)
        if tok.kind == "ident":
            self.pos += 1
            if tok.text in self.scope or tok.text in self.free:
                return s.Var(tok.text)
            return s.Atomic(tok.text)
        self.error("expected a concept")

    def role(self):
        left = self.chain()
        while self.accept("|"):
            left = s.RoleUnion(left, self.chain())
        return left

    def chain(self):
        left = self.postfix()
        while self.accept(";"):
            left = s.Chain(left, self.postfix())
        return left

    def postfix(self):
        r = self.role_atom()
        while True:
            if self.accept("*"):
                r = s.Star(r)
            elif self.at("^-"):
                tok = self.tok
                raise InverseRoleUnsupported(
                    f"{tok.line}:{tok.column}: inverse roles are not supported"
                )
            else:
                return r

    def role_atom(self):
        if self.accept("("):
            r = self.role()
            self.expect(")")
            return r
        if self.accept("id"):
            self.expect("(")
            c = self.concept()
            self.expect(")")
            return s.IdTest(c)
        return self.ident("role name")

    def end(self):
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")


def _finish(c, free):
    c = s.desugar_pdl(c)
    s.check_well_formed(c)
    return s.uniquify_binders(c, reserved=set(free) | s.atomic_concepts(c))


def parse_extended(text: str, free=()) -> s.Concept:
    """Parse without desugaring role constructs (for inspecting the raw tree)."""
    p = _Parser(tokenize(text), free)
    p.header()
    c = p.concept()
    p.end()
    return c


def parse_concept(text: str, free=()) -> s.Concept:
    """Parse, desugar, check positivity and alpha-rename repeated binders."""
    p = _Parser(tokenize(text), free)
    p.header()
    c = p.concept()
    p.end()
    return _finish(c, p.free)


def parse_tbox(text: str) -> s.TBox:
    """One ``C <= D`` or ``C == D`` per line; ``#`` starts a comment."""
    assertions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = tokenize(raw, line=lineno)
        if tokens[0].kind == "eof":
            continue
        p = _Parser(tokens)
        lhs = _finish(p.concept(), ())
        if p.accept("<="):
            equivalence = False
        elif p.accept("=="):
            equivalence = True
        else:
            p.error("expected '<=' or '=='")
        rhs = _finish(p.concept(), ())
        p.end()
        assertions.append(s.Inclusion(lhs, rhs))
        if equivalence:
            assertions.append(s.Inclusion(rhs, lhs))
    return s.TBox(tuple(assertions))


# Printing ---------------------------------------------------------------------

_OR, _AND, _UNARY = 0, 1, 2


def print_concept(c: s.Concept) -> str:
    """Render ``c`` with the fewest parentheses the grammar allows."""
    free = sorted(s.free_variables(c))
    reserved = set(free) | s.atomic_concepts(c)
    c = s.uniquify_binders(c, reserved=reserved)
    body = _fmt(c, _OR, True)
    if free:
        return f"free {', '.join(free)}; {body}"
    return body


def _fmt(c, prec, tail):
    """``tail`` is true when nothing follows ``c`` inside the current group."""
    if isinstance(c, (s.Atomic, s.Var)):
        return c.name
    if isinstance(c, s.Top):
        return "top"
    if isinstance(c, s.Bot):
        return "bot"
    if isinstance(c, s.Or):
        if prec > _OR:
            return "(" + _fmt(c, _OR, True) + ")"
        return f"{_fmt(c.left, _OR, False)} or {_fmt(c.right, _AND, tail)}"
    if isinstance(c, s.And):
        if prec > _AND:
            return "(" + _fmt(c, _OR, True) + ")"
        return f"{_fmt(c.left, _AND, False)} and {_fmt(c.right, _UNARY, tail)}"
    if isinstance(c, s.Not):
        return "not " + _fmt(c.arg, _UNARY, tail)
    if isinstance(c, (s.Exists, s.Forall)):
        kw = "exists" if isinstance(c, s.Exists) else "forall"
        return f"{kw} {_fmt_role(c.role)}. " + _fmt(c.body, _UNARY, tail)
    if isinstance(c, (s.AtLeast, s.AtMost)):
        kw = "atleast" if isinstance(c, s.AtLeast) else "atmost"
        return f"{kw} {c.n} {_fmt_role(c.role)}. " + _fmt(c.body, _UNARY, tail)
    if isinstance(c, s.BINDERS):
        kw = "mu" if isinstance(c, s.Mu) else "nu"
        text = f"{kw} {c.var}. " + _fmt(c.body, _OR, True)
        return text if tail else "(" + text + ")"
    if isinstance(c, s.WellFounded):
        return f"wf({_fmt_role(c.role)})"
    raise TypeError(f"not a concept: {c!r}")


def _fmt_role(r):
    if isinstance(r, str):
        return r
    if isinstance(r, s.Star):
        return f"({_fmt_role(r.role)})*"
    if isinstance(r, s.Chain):
        return f"({_fmt_role(r.first)}; {_fmt_role(r.second)})"
    if isinstance(r, s.RoleUnion):
        return f"({_fmt_role(r.left)} | {_fmt_role(r.right)})"
    if isinstance(r, s.IdTest):
        return f"id({_fmt(r.concept, _OR, True)})"
    raise TypeError(f"not a role: {r!r}")


def print_tbox(k: s.TBox) -> str:
    return "".join(f"{print_concept(a.lhs)} <= {print_concept(a.rhs)}\n" for a in k)
