"""Recursive-descent parser and printer for the state-definition language.

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor | '/' number)*
    factor := number | ket | gen | '(' expr ')' | '-' factor
    number := decimal | 'i' | 'sqrt' '(' decimal ')'

Kets are written ``|01>``, with ``.`` standing for the odd bullet level, e.g.
``|0.>`` or ``|..>``.  Generators are ``e1, e2, ...`` for the commuting
nilpotents and ``x1/xb1, x2/xb2, ...`` for the anticommuting conjugate pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ArityError, ParseError

_GEN_RE = re.compile(r"(e|x|xb)([1-9][0-9]*)\Z")
_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_NUMBER_RE = re.compile(r"[0-9]+(\.[0-9]+)?")


# -- abstract syntax ---------------------------------------------------------


@dataclass(frozen=True)
class Number:
    text: str


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class SqrtNum:
    text: str


@dataclass(frozen=True)
class Ket:
    label: str


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "StateExpr"


@dataclass(frozen=True)
class Add:
    left: "StateExpr"
    right: "StateExpr"


@dataclass(frozen=True)
class Sub:
    left: "StateExpr"
    right: "StateExpr"


@dataclass(frozen=True)
class Mul:
    left: "StateExpr"
    right: "StateExpr"


@dataclass(frozen=True)
class Div:
    left: "StateExpr"
    right: "StateExpr"


StateExpr = Union[Number, Imag, SqrtNum, Ket, Gen, Neg, Add, Sub, Mul, Div]

_NUMBER_NODES = (Number, Imag, SqrtNum)


# -- tokenizer ---------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # NUMBER IDENT KET OP EOF
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch in "+-*/()":
            tokens.append(_Token("OP", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == "|":
            j = i + 1
            label = []
            while j < n and text[j] in "01.":
                label.append(text[j])
                j += 1
            if j >= n or text[j] != ">":
                bad_col = start_col + (j - i)
                raise ParseError(
                    "unterminated ket literal", start_line, bad_col,
                    expected=("'0'", "'1'", "'.'", "'>'"),
                )
            if not label:
                raise ParseError("empty ket literal", start_line, start_col + 1,
                                 expected=("'0'", "'1'", "'.'"))
            tokens.append(_Token("KET", "".join(label), start_line, start_col))
            col += j - i + 1
            i = j + 1
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(_Token("NUMBER", m.group(0), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("IDENT", m.group(0), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", start_line, start_col,
                         expected=("number", "generator", "ket", "'('", "'-'"))
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# -- parser ------------------------------------------------------------------

_FACTOR_EXPECTED = ("number", "'i'", "'sqrt'", "ket", "generator", "'('", "'-'")


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _advance(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _error(self, message: str, expected=(), tok: _Token | None = None) -> ParseError:
        tok = tok or self._peek()
        return ParseError(message, tok.line, tok.column, expected=expected)

    def _expect_op(self, symbol: str) -> None:
        tok = self._peek()
        if tok.kind == "OP" and tok.text == symbol:
            self._advance()
            return
        shown = tok.text or "end of input"
        raise self._error(f"expected {symbol!r}, found {shown!r}", expected=(f"'{symbol}'",))

    def parse_expr(self) -> StateExpr:
        node = self.parse_term()
        while True:
            tok = self._peek()
            if tok.kind == "OP" and tok.text in "+-":
                self._advance()
                rhs = self.parse_term()
                node = Add(node, rhs) if tok.text == "+" else Sub(node, rhs)
            else:
                return node

    def parse_term(self) -> StateExpr:
        node = self.parse_factor()
        while True:
            tok = self._peek()
            if tok.kind == "OP" and tok.text == "*":
                self._advance()
                node = Mul(node, self.parse_factor())
            elif tok.kind == "OP" and tok.text == "/":
                self._advance()
                node = Div(node, self.parse_number())
            else:
                return node

    def parse_factor(self) -> StateExpr:
        tok = self._peek()
        if tok.kind == "OP" and tok.text == "-":
            self._advance()
            return Neg(self.parse_factor())
        if tok.kind == "OP" and tok.text == "(":
            self._advance()
            node = self.parse_expr()
            self._expect_op(")")
            return node
        if tok.kind == "KET":
            self._advance()
            return Ket(tok.text)
        if tok.kind == "NUMBER" or (tok.kind == "IDENT" and tok.text in ("i", "sqrt")):
            return self.parse_number()
        if tok.kind == "IDENT":
            m = _GEN_RE.match(tok.text)
            if m:
                self._advance()
                return Gen(tok.text)
            raise self._error(f"unknown symbol {tok.text!r}",
                              expected=("generator", "'i'", "'sqrt'"), tok=tok)
        shown = tok.text or "end of input"
        raise self._error(f"expected a factor, found {shown!r}", expected=_FACTOR_EXPECTED)

    def parse_number(self) -> StateExpr:
        tok = self._peek()
        if tok.kind == "NUMBER":
            self._advance()
            return Number(tok.text)
        if tok.kind == "IDENT" and tok.text == "i":
            self._advance()
            return Imag()
        if tok.kind == "IDENT" and tok.text == "sqrt":
            self._advance()
            self._expect_op("(")
            arg = self._peek()
            if arg.kind != "NUMBER":
                raise self._error("sqrt takes a decimal literal", expected=("number",))
            self._advance()
            self._expect_op(")")
            return SqrtNum(arg.text)
        shown = tok.text or "end of input"
        raise self._error(f"expected a number, found {shown!r}",
                          expected=("number", "'i'", "'sqrt'"))


def parse(text: str) -> StateExpr:
    """Parse one expression; raises :class:`ParseError` or :class:`ArityError`."""
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    node = parser.parse_expr()
    tail = parser._peek()
    if tail.kind != "EOF":
        raise ParseError(f"unexpected {tail.text!r} after expression",
                         tail.line, tail.column,
                         expected=("'+'", "'-'", "'*'", "'/'", "end of input"))
    arities = {len(k) for k in ket_labels(node)}
    if len(arities) > 1:
        raise ArityError(f"kets of mixed arity in one expression: {sorted(arities)}")
    return node


def ket_labels(node: StateExpr) -> set[str]:
    """All ket labels appearing in the tree."""
    if isinstance(node, Ket):
        return {node.label}
    if isinstance(node, Neg):
        return ket_labels(node.operand)
    if isinstance(node, (Add, Sub, Mul, Div)):
        return ket_labels(node.left) | ket_labels(node.right)
    return set()


def gen_names(node: StateExpr) -> set[str]:
    """All generator names appearing in the tree."""
    if isinstance(node, Gen):
        return {node.name}
    if isinstance(node, Neg):
        return gen_names(node.operand)
    if isinstance(node, (Add, Sub, Mul, Div)):
        return gen_names(node.left) | gen_names(node.right)
    return set()


def to_text(node: StateExpr) -> str:
    """Canonical text form; reparsing it yields the identical tree."""
    if isinstance(node, Number):
        return node.text
    if isinstance(node, Imag):
        return "i"
    if isinstance(node, SqrtNum):
        return f"sqrt({node.text})"
    if isinstance(node, Ket):
        return f"|{node.label}>"
    if isinstance(node, Gen):
        return node.name
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        return f"-{inner}"
    ops = {Add: "+", Sub: "-", Mul: "*", Div: "/"}
    op = ops[type(node)]
    return f"({to_text(node.left)} {op} {to_text(node.right)})"
