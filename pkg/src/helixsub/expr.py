"""A tiny recursive-descent parser for component expressions.

Grammar::

    list   := expr (',' expr)*
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' factor)?
    base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base

``^`` is right-associative and, as the grammar says, binds to a whole
``base`` including a leading minus: ``-u1^2`` is ``(-u1)^2``. There is no
implicit multiplication. Positions in error messages are 1-based.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityError,
    ComponentCountMismatch,
    ExprSyntaxError,
    NumericalDomain,
    UnknownIdentifier,
)

__all__ = [
    "Num",
    "Var",
    "Param",
    "Neg",
    "Func",
    "BinOp",
    "FUNCTIONS",
    "CONSTANTS",
    "parse_expressions",
    "parse_expression",
    "eval_ast",
    "to_text",
    "immersion_variables",
]


@dataclass(frozen=True)
class Num:
    value: float
    pos: int = 0


@dataclass(frozen=True)
class Var:
    name: str
    index: int
    pos: int = 0


@dataclass(frozen=True)
class Param:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class Func:
    name: str
    arg: object
    pos: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int = 0


def _log(x):
    if x <= 0:
        raise ValueError("log of non-positive number")
    return math.log(x)


def _sqrt(x):
    if x < 0:
        raise ValueError("sqrt of negative number")
    return math.sqrt(x)


FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": _log,
    "sqrt": _sqrt,
    "sinh": math.sinh,
    "cosh": math.cosh,
}

CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)

_BASE_START = ("number", "identifier", "'('", "'-'")


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | ident | op | end
    text: str
    pos: int


def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None or m.lastgroup is None:
            raise ExprSyntaxError(f"unexpected character {text[i]!r}", i + 1, _BASE_START)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        i = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text, variables, params):
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = {name: k for k, name in enumerate(variables)}
        self.params = set(params)

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def is_op(self, *ops):
        return self.tok.kind == "op" and self.tok.text in ops

    def fail(self, expected):
        tok = self.tok
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExprSyntaxError(f"unexpected {what}", tok.pos, expected)

    def parse_list(self):
        items = [self.parse_expr()]
        while self.is_op(","):
            self.advance()
            items.append(self.parse_expr())
        if self.tok.kind != "end":
            self.fail(("','", "'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return items

    def parse_expr(self):
        node = self.parse_term()
        while self.is_op("+", "-"):
            op = self.advance()
            node = BinOp(op.text, node, self.parse_term(), op.pos)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.is_op("*", "/"):
            op = self.advance()
            node = BinOp(op.text, node, self.parse_factor(), op.pos)
        return node

    def parse_factor(self):
        node = self.parse_base()
        if self.is_op("^"):
            op = self.advance()
            node = BinOp("^", node, self.parse_factor(), op.pos)
        return node

    def parse_base(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text), tok.pos)
        if tok.kind == "ident":
            self.advance()
            if self.is_op("("):
                paren = self.advance()
                if tok.text not in FUNCTIONS:
                    raise UnknownIdentifier(f"unknown function {tok.text!r}", tok.pos)
                arg = self.parse_expr()
                if self.is_op(","):
                    raise ArityError(f"{tok.text} takes exactly one argument", paren.pos)
                if not self.is_op(")"):
                    self.fail(("')'", "'+'", "'-'", "'*'", "'/'", "'^'"))
                self.advance()
                return Func(tok.text, arg, tok.pos)
            if tok.text in FUNCTIONS:
                self.fail(("'('",))
            if tok.text in self.variables:
                return Var(tok.text, self.variables[tok.text], tok.pos)
            if tok.text in self.params or tok.text in CONSTANTS:
                return Param(tok.text, tok.pos)
            raise UnknownIdentifier(f"unknown identifier {tok.text!r}", tok.pos)
        if self.is_op("("):
            self.advance()
            node = self.parse_expr()
            if not self.is_op(")"):
                self.fail(("')'", "'+'", "'-'", "'*'", "'/'", "'^'"))
            self.advance()
            return node
        if self.is_op("-"):
            self.advance()
            return Neg(self.parse_base(), tok.pos)
        self.fail(_BASE_START)


def immersion_variables(m):
    return [f"u{k + 1}" for k in range(m)]


def parse_expressions(text, variables, params=(), n=None):
    """Parse a comma-separated list of expressions into ASTs.

    ``params`` names the free parameters allowed besides ``variables`` and
    the constants ``pi`` and ``e``. With ``n`` given the component count is
    checked.
    """
    items = _Parser(text, variables, params).parse_list()
    if n is not None and len(items) != n:
        raise ComponentCountMismatch(f"expected {n} components, got {len(items)}")
    return items


def parse_expression(text, variables, params=()):
    return parse_expressions(text, variables, params, n=1)[0]


def _power(b, e, pos):
    if float(e).is_integer() and abs(e) < 2**31:
        k = int(e)
        if b == 0 and k < 0:
            raise NumericalDomain("zero to a negative power", pos)
        return b**k
    if b > 0:
        return math.exp(e * math.log(b))
    if b == 0 and e > 0:
        return 0.0
    raise NumericalDomain("non-integer power of a non-positive base", pos)


def eval_ast(ast, u, params=None):
    """Evaluate an AST at the variable values ``u``."""
    params = params or {}
    try:
        value = _eval(ast, u, params)
    except OverflowError:
        raise NumericalDomain("overflow", getattr(ast, "pos", None)) from None
    if not math.isfinite(value):
        raise NumericalDomain("non-finite result", getattr(ast, "pos", None))
    return value


def _eval(node, u, params):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(u[node.index])
    if isinstance(node, Param):
        if node.name in params:
            return float(params[node.name])
        if node.name in CONSTANTS:
            return CONSTANTS[node.name]
        raise UnknownIdentifier(f"parameter {node.name!r} is not bound", node.pos)
    if isinstance(node, Neg):
        return -_eval(node.arg, u, params)
    if isinstance(node, Func):
        x = _eval(node.arg, u, params)
        try:
            y = FUNCTIONS[node.name](x)
        except (ValueError, OverflowError) as exc:
            raise NumericalDomain(f"{node.name}({x!r}): {exc}", node.pos) from None
        if not math.isfinite(y):
            raise NumericalDomain(f"{node.name}({x!r}) is not finite", node.pos)
        return y
    if isinstance(node, BinOp):
        a = _eval(node.left, u, params)
        b = _eval(node.right, u, params)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0:
                raise NumericalDomain("division by zero", node.pos)
            return a / b
        return _power(a, b, node.pos)
    raise TypeError(f"not an expression node: {node!r}")


def to_text(node):
    """Print an AST so that reparsing gives the same value everywhere."""
    if isinstance(node, Num):
        text = repr(float(node.value))
        return f"(-{text[1:]})" if text.startswith("-") else text
    if isinstance(node, (Var, Param)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, Func):
        return f"{node.name}({to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    raise TypeError(f"not an expression node: {node!r}")


def compile_components(asts, params=None):
    """Return ``f(u) -> ndarray`` evaluating every component AST."""
    params = dict(params or {})

    def f(u):
        return np.array([eval_ast(a, u, params) for a in asts])

    return f
