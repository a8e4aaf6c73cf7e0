"""Recursive-descent parser for the one-variable expression grammar.

Grammar (lowest to highest binding)::

    expr    := term (('+' | '-') term)*
    term    := power (('*' | '/') power)*
    power   := unary ('^' power)?              right-associative
    unary   := ('-' | '+') unary | atom        binds tighter than '^'
    atom    := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
             | 'if' '(' expr CMP expr ',' expr ',' expr ')'

Unary minus binding tighter than ``^`` means ``-x^2`` reads as ``(-x)^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ExprSyntaxError, MultipleVariablesError, NonConstantExponentError
from .nodes import (
    FUNCTIONS,
    Binary,
    Constant,
    Expression,
    Guard,
    Piecewise,
    Unary,
    Variable,
    has_variable,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<cmp><=|>=|<|>)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}


@dataclass
class Token:
    kind: str
    text: str
    offset: int  # byte offset


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte(text, pos))
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), _byte(text, pos)))
        pos = m.end()
    tokens.append(Token("eof", "", _byte(text, len(text))))
    return tokens


def _byte(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            found = self.tok.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", self.tok.offset)
        return self.next()

    def parse(self) -> Expression:
        e = self.expr()
        if self.tok.kind != "eof":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return e

    def expr(self) -> Expression:
        e = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = "add" if self.next().text == "+" else "sub"
            e = Binary(op, e, self.term())
        return e

    def term(self) -> Expression:
        e = self.power()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = "mul" if self.next().text == "*" else "div"
            e = Binary(op, e, self.power())
        return e

    def power(self) -> Expression:
        base = self.unary()
        if self.tok.text == "^":
            caret = self.next()
            exponent = self.power()
            if has_variable(exponent):
                raise NonConstantExponentError("exponent must not depend on x", caret.offset)
            return Binary("pow", base, exponent)
        return base

    def unary(self) -> Expression:
        if self.tok.text == "-":
            self.next()
            arg = self.unary()
            if isinstance(arg, Constant):
                return Constant(-arg.value)
            return Unary("neg", arg)
        if self.tok.text == "+":
            self.next()
            return self.unary()
        return self.atom()

    def atom(self) -> Expression:
        t = self.tok
        if t.kind == "num":
            self.next()
            return Constant(float(t.text))
        if t.kind == "ident":
            self.next()
            if t.text == "x":
                return Variable()
            if t.text == "if":
                return self.conditional()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(t.text, arg)
            raise MultipleVariablesError(
                f"unknown identifier {t.text!r}; the only variable is 'x'", t.offset
            )
        if t.text == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        found = t.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", t.offset)

    def conditional(self) -> Piecewise:
        self.expect("(")
        start = self.tok.offset
        lhs = self.expr()
        if self.tok.kind != "cmp":
            raise ExprSyntaxError("expected a comparison in if(...)", self.tok.offset)
        op = self.next().text
        rhs = self.expr()
        if isinstance(lhs, Variable) and not has_variable(rhs):
            guard = Guard(op, rhs)
        elif isinstance(rhs, Variable) and not has_variable(lhs):
            guard = Guard(_FLIP[op], lhs)
        else:
            raise ExprSyntaxError("guard must compare x against a constant", start)
        self.expect(",")
        then = self.expr()
        self.expect(",")
        otherwise = self.expr()
        self.expect(")")
        return Piecewise(((guard, then),), otherwise)


def parse(text: str) -> Expression:
    """Parse ``text`` into an expression tree.

    Raises ExprSyntaxError, MultipleVariablesError or NonConstantExponentError;
    each carries the byte offset of the offending token.
    """
    return _Parser(text).parse()

