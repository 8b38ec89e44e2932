# expressions.py
"""
Closed-form entire functions of z: parser, printer and evaluator.

Grammar (lowest to highest binding):
    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?          right-associative
    atom    := number | imaginary | "i" | "z" | "exp" "(" sum ")" | "(" sum ")"

Only entire functions can be written down: a denominator must be constant and an
exponent must be a constant non-negative integer (a negative one is allowed on a
constant base). Anything else raises NonEntire.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from errors import NonEntire, ParseError
from scalars import (
    DEFAULT_PRECISION,
    FieldElement,
    FloatScalar,
    GaussianRational,
    as_scalar,
    exp_scalar,
    promote,
)
from taylor import TaylorSeries

# ---------- AST ----------

PREC_SUM = 1
PREC_PRODUCT = 2
PREC_UNARY = 3
PREC_POWER = 4
PREC_ATOM = 5

_ATOM_LITERAL = re.compile(r"^(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?i?$|^i$")


@dataclass(frozen=True)
class Literal:
    value: GaussianRational
    text: str

    @classmethod
    def of(cls, value) -> "Literal":
        value = as_scalar(value)
        return cls(value, str(value))

    @property
    def precedence(self) -> int:
        return PREC_ATOM if _ATOM_LITERAL.match(self.text) else PREC_SUM


@dataclass(frozen=True)
class Var:
    name: str = "z"
    precedence = PREC_ATOM


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    @property
    def precedence(self) -> int:
        return PREC_SUM if self.op in "+-" else PREC_PRODUCT


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    precedence = PREC_UNARY


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    precedence = PREC_POWER


@dataclass(frozen=True)
class Exp:
    arg: "Node"
    precedence = PREC_ATOM


Node = Union[Literal, Var, BinOp, Neg, Pow, Exp]


def is_constant(node: Node) -> bool:
    if isinstance(node, Literal):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, BinOp):
        return is_constant(node.left) and is_constant(node.right)
    if isinstance(node, Neg):
        return is_constant(node.operand)
    if isinstance(node, Pow):
        return is_constant(node.base)
    return is_constant(node.arg)


# ---------- tokenizer ----------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_OPERAND_START = ("number", "i", "z", "exp", "(", "-")
_AFTER_OPERAND = ("+", "-", "*", "/", "^", ")", "end of input")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if not m:
            raise ParseError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos), _OPERAND_START)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "name":
                if text not in ("z", "i", "exp"):
                    raise ParseError(f"unknown name {text!r}", _byte_offset(source, pos), ("z", "i", "exp"))
                kind = text
            elif kind == "op":
                kind = text
            tokens.append(_Token(kind, text, _byte_offset(source, pos)))
        pos = m.end()
    tokens.append(_Token("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, pos: int) -> int:
    return len(source[:pos].encode("utf-8"))


def _number_value(text: str) -> GaussianRational:
    if text.endswith("i"):
        return GaussianRational(0, Fraction(text[:-1]))
    return GaussianRational(Fraction(text))


# ---------- parser ----------


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.current
        if tok.kind != kind:
            raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.offset, (kind,))
        return self.advance()

    def parse(self) -> Node:
        node = self.sum()
        if self.current.kind != "end":
            raise ParseError(f"unexpected {self.current.text!r}", self.current.offset, _AFTER_OPERAND)
        return node

    def sum(self) -> Node:
        node = self.product()
        while self.current.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.product())
        return node

    def product(self) -> Node:
        node = self.unary()
        while self.current.kind in ("*", "/"):
            tok = self.advance()
            right = self.unary()
            if tok.kind == "/":
                if not is_constant(right):
                    raise NonEntire("division by a non-constant expression", tok.offset)
                if not evaluate(right, GaussianRational(0)):
                    raise NonEntire("division by zero", tok.offset)
            node = BinOp(tok.kind, node, right)
        return node

    def unary(self) -> Node:
        if self.current.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.current.kind != "^":
            return base
        tok = self.advance()
        exponent_node = self.unary()
        return Pow(base, self._exponent(base, exponent_node, tok.offset))

    def _exponent(self, base: Node, node: Node, offset: int) -> int:
        if not is_constant(node):
            raise NonEntire("exponent must be a constant integer", offset)
        value = evaluate(node, GaussianRational(0))
        if isinstance(value, FloatScalar) or value.im != 0 or value.re.denominator != 1:
            raise NonEntire(f"exponent {value} is not an integer", offset)
        n = int(value.re)
        if n < 0 and not is_constant(base):
            raise NonEntire("negative power of a non-constant expression", offset)
        if n < 0 and not evaluate(base, GaussianRational(0)):
            raise NonEntire("negative power of zero", offset)
        return n

    def atom(self) -> Node:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Literal(_number_value(tok.text), tok.text)
        if tok.kind == "i":
            self.advance()
            return Literal(GaussianRational(0, 1), "i")
        if tok.kind == "z":
            self.advance()
            return Var()
        if tok.kind == "exp":
            self.advance()
            self.expect("(")
            arg = self.sum()
            self.expect(")")
            return Exp(arg)
        if tok.kind == "(":
            self.advance()
            node = self.sum()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.offset, _OPERAND_START)


def parse(source: str) -> Node:
    """Parse `source` into an AST; see the module docstring for the grammar."""
    return _Parser(source).parse()


# ---------- printer ----------


def to_source(node: Node) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""
    if isinstance(node, Literal):
        return node.text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, BinOp):
        p = node.precedence
        left = _wrap(node.left, node.left.precedence < p)
        right = _wrap(node.right, node.right.precedence <= p)
        return f"{left}{node.op}{right}"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, node.operand.precedence < PREC_UNARY)
    if isinstance(node, Pow):
        base = _wrap(node.base, node.base.precedence < PREC_ATOM)
        exponent = str(node.exponent) if node.exponent >= 0 else f"({node.exponent})"
        return f"{base}^{exponent}"
    return f"exp({to_source(node.arg)})"


def _wrap(node: Node, needed: bool) -> str:
    text = to_source(node)
    return f"({text})" if needed else text


# ---------- evaluation ----------

Value = Union[FieldElement, TaylorSeries]


def _combine(op: str, x: Value, y: Value) -> Value:
    if not isinstance(x, TaylorSeries) and not isinstance(y, TaylorSeries):
        x, y = promote(x, y)
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    return x / y


def evaluate(node: Node, at: Value, precision_bits: int = DEFAULT_PRECISION) -> Value:
    """
    Evaluate at a scalar point, or propagate a truncated power series.

    With `at = TaylorSeries.variable(z0, N)` the result is the order-N Taylor
    expansion of the expression around z0.
    """
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Var):
        return at
    if isinstance(node, BinOp):
        left = evaluate(node.left, at, precision_bits)
        right = evaluate(node.right, at, precision_bits)
        if isinstance(right, TaylorSeries) and node.op == "/":
            right = right.coeffs[0]
        return _combine(node.op, left, right)
    if isinstance(node, Neg):
        return -evaluate(node.operand, at, precision_bits)
    if isinstance(node, Pow):
        base = evaluate(node.base, at, precision_bits)
        if node.exponent < 0:
            return 1 / (base ** (-node.exponent))
        return base ** node.exponent
    arg = evaluate(node.arg, at, precision_bits)
    if isinstance(arg, TaylorSeries):
        return arg.exp(precision_bits)
    return exp_scalar(arg, precision_bits)
