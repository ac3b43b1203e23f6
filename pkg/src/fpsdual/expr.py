"""A small expression language for series.

Grammar (precedence star > product > sum, products written with "."):

    expr   := term { "+" term }
    term   := factor { "." factor }
    factor := atom [ "*" ]
    atom   := scalar | letter | named | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import series as S
from .field import Field, FieldError, FieldValue, format_value, parse_value
from .monoid import IndexSpace


class ExprError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class ExprSyntaxError(ExprError):
    pass


class UnknownLetter(ExprError):
    pass


class MalformedScalar(ExprError):
    pass


@dataclass(frozen=True)
class Scalar:
    value: FieldValue


@dataclass(frozen=True)
class Letter:
    symbol: str


@dataclass(frozen=True)
class Named:
    key: str


@dataclass(frozen=True)
class Sum:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Product:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Star:
    inner: "Expr"


Expr = Union[Scalar, Letter, Named, Sum, Product, Star]

NAMED = {
    "zero": lambda space, field: S.zero(space, field),
    "one": lambda space, field: S.one(space, field),
    "geometric": lambda space, field: S.geometric(space, field),
    "ones": lambda space, field: S.ones(field, space),
}

_NUMBER = re.compile(r"-?\d+(?:/\d+|\.\d+(?:[eE][-+]?\d+)?|[eE][-+]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TAGGED_BODY = re.compile(r"[-+]?[0-9][0-9./eE+-]*")
_FIELD_TAG = re.compile(r"Q|R|R64|F\d+")


@dataclass
class _Token:
    kind: str  # "op", "scalar", "letter", "named", "end"
    text: str
    column: int
    value: object = None


def _tokenize(text: str, alphabet: tuple, field: Field) -> list[_Token]:
    out = []
    i = 0
    letters = set(alphabet)
    while i < len(text):
        ch = text[i]
        col = i + 1
        if ch.isspace():
            i += 1
            continue
        if ch in "()+.*":
            out.append(_Token("op", ch, col))
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            lit = m.group()
            out.append(_Token("scalar", lit, col, _scalar(lit, field, col)))
            i = m.end()
            continue
        m = _IDENT.match(text, i)
        if m:
            name = m.group()
            i = m.end()
            if i < len(text) and text[i] == ":":
                if _FIELD_TAG.fullmatch(name):
                    body = _TAGGED_BODY.match(text, i + 1)
                    if not body:
                        raise MalformedScalar(f"malformed scalar after {name}:", i + 2)
                    lit = f"{name}:{body.group()}"
                    out.append(_Token("scalar", lit, col, _scalar(lit, field, col)))
                    i = body.end()
                    continue
                if name == "letter":
                    arg = _IDENT.match(text, i + 1)
                    if not arg:
                        raise ExprSyntaxError("expected a letter after 'letter:'", i + 2)
                    if arg.group() not in letters:
                        raise UnknownLetter(f"unknown letter {arg.group()!r}", i + 2)
                    out.append(_Token("named", f"letter:{arg.group()}", col))
                    i = arg.end()
                    continue
                raise ExprSyntaxError(f"unexpected ':' after {name!r}", i + 1)
            if name in letters:
                out.append(_Token("letter", name, col))
            elif name in NAMED:
                out.append(_Token("named", name, col))
            else:
                raise UnknownLetter(f"unknown letter {name!r}", col)
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", col)
    out.append(_Token("end", "", len(text) + 1))
    return out


def _scalar(lit: str, field: Field, col: int) -> FieldValue:
    try:
        return parse_value(lit, field)
    except (FieldError, ZeroDivisionError) as exc:
        raise MalformedScalar(f"malformed scalar {lit!r} ({exc})", col) from None


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def at_op(self, op):
        t = self.peek()
        return t.kind == "op" and t.text == op

    def expr(self):
        node = self.term()
        while self.at_op("+"):
            self.take()
            node = Sum(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.at_op("."):
            self.take()
            node = Product(node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self.at_op("*"):
            self.take()
            node = Star(node)
        return node

    def atom(self):
        t = self.take()
        if t.kind == "scalar":
            return Scalar(t.value)
        if t.kind == "letter":
            return Letter(t.text)
        if t.kind == "named":
            return Named(t.text)
        if t.kind == "op" and t.text == "(":
            node = self.expr()
            close = self.take()
            if not (close.kind == "op" and close.text == ")"):
                raise ExprSyntaxError("expected ')'", close.column)
            return node
        if t.kind == "end":
            raise ExprSyntaxError("unexpected end of input", t.column)
        raise ExprSyntaxError(f"unexpected {t.text!r}", t.column)


def parse(text: str, alphabet, field: Field) -> Expr:
    p = _Parser(_tokenize(text, tuple(alphabet), field))
    node = p.expr()
    t = p.peek()
    if t.kind != "end":
        raise ExprSyntaxError(f"unexpected {t.text!r}", t.column)
    return node


# --- normalisation and printing ---------------------------------------------------


def _flatten(e, cls):
    if isinstance(e, cls):
        return _flatten(e.left, cls) + _flatten(e.right, cls)
    return [e]


def normalize(e: Expr) -> Expr:
    """Re-associate sums and products to the left; nothing else changes."""
    if isinstance(e, (Sum, Product)):
        cls = type(e)
        parts = [normalize(x) for x in _flatten(e, cls)]
        node = parts[0]
        for x in parts[1:]:
            node = cls(node, x)
        return node
    if isinstance(e, Star):
        return Star(normalize(e.inner))
    return e


def pretty(e: Expr) -> str:
    if isinstance(e, Sum):
        return " + ".join(pretty(x) for x in _flatten(e, Sum))
    if isinstance(e, Product):
        return " . ".join(
            f"({pretty(x)})" if isinstance(x, Sum) else pretty(x) for x in _flatten(e, Product)
        )
    if isinstance(e, Star):
        inner = pretty(e.inner)
        if isinstance(e.inner, (Sum, Product, Star)):
            inner = f"({inner})"
        return inner + "*"
    if isinstance(e, Scalar):
        return format_value(e.value)
    if isinstance(e, Letter):
        return e.symbol
    return e.key


# --- evaluation -------------------------------------------------------------------


def evaluate(e: Expr, space: IndexSpace, field: Field) -> S.Series:
    if isinstance(e, Scalar):
        return S.scale(e.value, S.one(space, field))
    if isinstance(e, Letter):
        return S.letter(space, field, e.symbol)
    if isinstance(e, Named):
        if e.key.startswith("letter:"):
            return S.letter(space, field, e.key[len("letter:") :])
        return NAMED[e.key](space, field)
    if isinstance(e, Sum):
        return S.lin(field.one, evaluate(e.left, space, field), evaluate(e.right, space, field))
    if isinstance(e, Product):
        return S.cauchy_product(evaluate(e.left, space, field), evaluate(e.right, space, field))
    if isinstance(e, Star):
        return S.star(evaluate(e.inner, space, field))
    raise TypeError(f"not an expression node: {e!r}")


def series(text: str, space: IndexSpace, field: Field) -> S.Series:
    """Parse and evaluate in one step."""
    return evaluate(parse(text, space.alphabet, field), space, field)


__all__ = [
    "Expr", "Scalar", "Letter", "Named", "Sum", "Product", "Star",
    "ExprError", "ExprSyntaxError", "UnknownLetter", "MalformedScalar",
    "parse", "normalize", "pretty", "evaluate", "series", "NAMED",
]
