"""Surface syntax for types and mixed terms.

ASCII is canonical on output::

    A   T1 -> T2   \\x:T. m   m m'   a   f   T => m

``λ``, ``→`` and ``⇒`` are accepted on input.  In term position ``->`` and
``=>`` both build ``T => m`` (the left operand must denote a type), so a
bare type such as ``A -> A`` embeds as a mixed term.
"""

from __future__ import annotations

import re

from .kernel import (
    BASE, CA, CF, TA, App, Arrow, ArrowAbs, Base, ConstA, ConstF, Lam, Term,
    TyBase, Type, Var, as_type, is_type,
)


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(->|=>|→|⇒)|([\\λ:.()])|([A-Za-z_][A-Za-z0-9_']*))")
_ARROWS = {"->", "=>", "→", "⇒"}


def tokenize(text: str) -> list:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at {pos}")
        tok = mo.group(1) or mo.group(2) or mo.group(3)
        toks.append("\\" if tok == "λ" else tok)
        pos = mo.end()
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}")

    def done(self):
        if self.peek() is not None:
            raise ParseError(f"trailing input at {self.peek()!r}")

    # types
    def type_(self) -> Type:
        left = self.type_atom()
        if self.peek() in _ARROWS:
            self.next()
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> Type:
        tok = self.next()
        if tok == "A":
            return BASE
        if tok == "(":
            t = self.type_()
            self.expect(")")
            return t
        raise ParseError(f"expected a type, got {tok!r}")

    # terms
    def term(self) -> Term:
        if self.peek() == "\\":
            return self.lam()
        left = self.app()
        if self.peek() in _ARROWS:
            self.next()
            dom = as_type(left)
            if dom is None:
                raise ParseError("left operand of '=>' is not a type")
            return ArrowAbs(dom, self.term())
        return left

    def lam(self) -> Term:
        self.expect("\\")
        name = self.next()
        if not _is_var(name):
            raise ParseError(f"bad binder {name!r}")
        self.expect(":")
        ann = self.type_()
        self.expect(".")
        return Lam(ann, name, self.term())

    def app(self) -> Term:
        head = self.atom()
        while True:
            tok = self.peek()
            if tok == "\\":
                return App(head, self.lam())
            if tok is None or tok in _ARROWS or tok in {")", ".", ":"}:
                return head
            head = App(head, self.atom())

    def atom(self) -> Term:
        tok = self.next()
        if tok == "(":
            m = self.term()
            self.expect(")")
            return m
        if tok == "A":
            return TA
        if tok == "a":
            return CA
        if tok == "f":
            return CF
        if _is_var(tok):
            return Var(tok)
        raise ParseError(f"unexpected token {tok!r}")


def _is_var(tok):
    return tok[0].isalpha() or tok[0] == "_"


def parse_term(text: str) -> Term:
    p = _Parser(text)
    m = p.term()
    p.done()
    return m


def parse_type(text: str) -> Type:
    p = _Parser(text)
    t = p.type_()
    p.done()
    return t


def show_type(t: Type) -> str:
    if isinstance(t, Base):
        return "A"
    dom = show_type(t.dom)
    if isinstance(t.dom, Arrow):
        dom = f"({dom})"
    return f"{dom}->{show_type(t.cod)}"


def show(m: Term) -> str:
    return _show(m, "top")


def _show(m, where):
    # where: "top" (anything), "fun" (head of an application), "arg"
    if isinstance(m, Var):
        return m.name
    if isinstance(m, ConstA):
        return "a"
    if isinstance(m, ConstF):
        return "f"
    if isinstance(m, TyBase):
        return "A"
    if isinstance(m, App):
        s = f"{_show(m.fun, 'fun')} {_show(m.arg, 'arg')}"
        return f"({s})" if where == "arg" else s
    if isinstance(m, Lam):
        ann = show_type(m.ann)
        if isinstance(m.ann, Arrow):
            ann = f"({ann})"
        s = f"\\{m.var}:{ann}. {_show(m.body, 'top')}"
    elif is_type(m):
        s = show_type(as_type(m))
    else:
        dom = show_type(m.dom)
        if isinstance(m.dom, Arrow):
            dom = f"({dom})"
        s = f"{dom} => {_show(m.body, 'top')}"
    return s if where == "top" else f"({s})"
