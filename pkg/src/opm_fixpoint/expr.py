"""A small arithmetic language for the components of a coupled map on R^n.

Grammar, loosest binding first::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | atom
    atom   := NUMBER | VAR | FUNC "(" expr ("," expr)* ")" | "(" expr ")"

``VAR`` is ``x<i>`` or ``y<i>`` with ``1 <= i <= dimension``; ``FUNC`` is one
of ``min``, ``max`` (two arguments) and ``abs`` (one argument).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from .errors import ExprEvalError, ExprSyntaxError

FUNCTIONS = {"min": 2, "max": 2, "abs": 1}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "y"
    index: int  # 1-based


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Expr", ...]


Expr = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/(),])
    """,
    re.VERBOSE,
)
_VAR = re.compile(r"([xy])(\d+)\Z")


def _byte_offset(text: str, i: int) -> int:
    return len(text[:i].encode("utf-8"))


def tokenize(text: str):
    """Yield ``(kind, value, offset)`` triples; offsets are byte offsets."""
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, dimension: int):
        self.tokens = tokenize(text)
        self.pos = 0
        self.dimension = dimension

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, v, off = self.advance()
        if v != value or kind == "end":
            found = "end of input" if kind == "end" else repr(v)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", off)

    def parse(self) -> Expr:
        e = self.expr()
        kind, v, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {v!r}", off)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        kind, v, off = self.advance()
        if kind == "num":
            value = float(v)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"literal {v} is not a finite number", off)
            return Num(value)
        if kind == "name":
            if v in FUNCTIONS:
                return self.call(v, off)
            m = _VAR.match(v)
            if m is None:
                raise ExprSyntaxError(f"unknown identifier {v!r}", off)
            index = int(m.group(2))
            if not 1 <= index <= self.dimension:
                raise ExprSyntaxError(
                    f"variable {v} out of range for dimension {self.dimension}", off
                )
            return Var(m.group(1), index)
        if (kind, v) == ("op", "("):
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(v)
        raise ExprSyntaxError(f"expected an operand, found {found}", off)

    def call(self, func: str, off: int) -> Expr:
        self.expect("(")
        args = [self.expr()]
        while self.peek()[:2] == ("op", ","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        if len(args) != FUNCTIONS[func]:
            raise ExprSyntaxError(
                f"{func} takes {FUNCTIONS[func]} argument(s), got {len(args)}", off
            )
        return Call(func, tuple(args))


def parse(text: str, dimension: int) -> Expr:
    """Parse ``text`` into an AST whose variables fit ``dimension``."""
    if not isinstance(dimension, int) or dimension < 1:
        raise ValueError(f"dimension must be a positive integer, got {dimension!r}")
    return _Parser(text, dimension).parse()


def evaluate(e: Expr, x: Sequence[float], y: Sequence[float]) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        vec = x if e.name == "x" else y
        if e.index > len(vec):
            raise ExprEvalError(f"{e.name}{e.index} is out of range for a vector of length {len(vec)}")
        return float(vec[e.index - 1])
    if isinstance(e, Neg):
        return -evaluate(e.operand, x, y)
    if isinstance(e, BinOp):
        a = evaluate(e.left, x, y)
        b = evaluate(e.right, x, y)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0:
            raise ExprEvalError("division by zero")
        return a / b
    if isinstance(e, Call):
        vals = [evaluate(a, x, y) for a in e.args]
        if e.func == "abs":
            return abs(vals[0])
        return min(vals) if e.func == "min" else max(vals)
    raise TypeError(f"not an expression node: {e!r}")


def _atom_source(e: Expr) -> str:
    s = to_source(e)
    return f"({s})" if isinstance(e, Neg) else s


def to_source(e: Expr) -> str:
    """Render ``e`` as text that parses back to the same tree.

    Binary operations are always parenthesized, so precedence never matters
    on the way back in.
    """
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return f"{e.name}{e.index}"
    if isinstance(e, Neg):
        return f"-{_atom_source(e.operand)}"
    if isinstance(e, BinOp):
        return f"({to_source(e.left)} {e.op} {to_source(e.right)})"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(to_source(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")


def max_index(e: Expr) -> int:
    """Largest variable index used in ``e`` (0 when there are none)."""
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Neg):
        return max_index(e.operand)
    if isinstance(e, BinOp):
        return max(max_index(e.left), max_index(e.right))
    if isinstance(e, Call):
        return max(max_index(a) for a in e.args)
    return 0
