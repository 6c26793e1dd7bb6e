"""Closed-form coefficient expressions.

A small recursive-descent parser for arithmetic over one variable with the
operators ``+ - * / ^`` (``^`` right-associative, binding tighter than unary
minus), parentheses, the constant ``pi`` and the functions listed in
:data:`FUNCTIONS`.  Parsed expressions are kept as a tree for diagnostics and
compiled to plain Python callables for the hot integration loops.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExpressionSyntaxError

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs", "tanh", "cosh", "sinh")
CONSTANTS = {"pi": math.pi}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


# --- tree -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: object

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call:
    func: str
    arg: object

    def __str__(self):
        return f"{self.func}({self.arg})"


# --- parser -----------------------------------------------------------------


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variable):
        self.text = text
        self.variable = variable
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(message, self.text, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.error(f"expected {op!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            # right-associative; exponent may carry its own sign
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            if value in FUNCTIONS:
                if not (self.peek()[0] == "op" and self.peek()[1] == "("):
                    self.error(f"function {value!r} requires parentheses")
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            if value == self.variable:
                return Var(value)
            if value in CONSTANTS:
                return Const(value)
            self.error(f"unknown name {value!r}", tok)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected token {value!r}", tok)


def parse_expression(text: str, variable: str = "x"):
    """Parse ``text`` into an expression tree over ``variable``."""
    return _Parser(text, variable).parse()


# --- evaluation -------------------------------------------------------------

_MATH = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
    "log": math.log, "sqrt": math.sqrt, "abs": abs, "tanh": math.tanh,
    "cosh": math.cosh, "sinh": math.sinh,
}


def evaluate(node, x: float) -> float:
    """Tree-walking evaluation with domain checks naming the failing subexpression."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return float(x)
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.arg, x)
    if isinstance(node, BinOp):
        lhs = evaluate(node.left, x)
        rhs = evaluate(node.right, x)
        op = node.op
        if op == "+":
            val = lhs + rhs
        elif op == "-":
            val = lhs - rhs
        elif op == "*":
            val = lhs * rhs
        elif op == "/":
            if rhs == 0.0:
                raise DomainError(f"division by zero in {node} at x={x!r}", str(node), x)
            val = lhs / rhs
        else:
            if lhs < 0 and not float(rhs).is_integer():
                raise DomainError(f"negative base with non-integer exponent in {node} at x={x!r}", str(node), x)
            if lhs == 0 and rhs < 0:
                raise DomainError(f"division by zero in {node} at x={x!r}", str(node), x)
            try:
                val = math.pow(lhs, rhs)
            except OverflowError:
                raise DomainError(f"overflow in {node} at x={x!r}", str(node), x) from None
        if not math.isfinite(val):
            raise DomainError(f"non-finite value in {node} at x={x!r}", str(node), x)
        return val
    if isinstance(node, Call):
        arg = evaluate(node.arg, x)
        f = node.func
        if f == "sqrt" and arg < 0:
            raise DomainError(f"sqrt of negative number in {node} at x={x!r}", str(node), x)
        if f == "log" and arg <= 0:
            raise DomainError(f"log of non-positive number in {node} at x={x!r}", str(node), x)
        try:
            val = _MATH[f](arg)
        except (OverflowError, ValueError):
            raise DomainError(f"cannot evaluate {node} at x={x!r}", str(node), x) from None
        if not math.isfinite(val):
            raise DomainError(f"non-finite value in {node} at x={x!r}", str(node), x)
        return val
    raise TypeError(f"not an expression node: {node!r}")


def _source(node, lib):
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return repr(CONSTANTS[node.name])
    if isinstance(node, Neg):
        return f"(-{_source(node.arg, lib)})"
    if isinstance(node, BinOp):
        lhs, rhs = _source(node.left, lib), _source(node.right, lib)
        if node.op == "^":
            if isinstance(node.right, Num) and node.right.value == 2.0:
                return f"({lhs}*{lhs})" if isinstance(node.left, (Var, Num)) else f"(({lhs})**2)"
            return f"{lib}pow({lhs}, {rhs})"
        return f"({lhs} {node.op} {rhs})"
    if isinstance(node, Call):
        fname = "fabs" if node.func == "abs" else node.func
        if lib == "np." and node.func == "abs":
            fname = "abs"
        return f"{lib}{fname}({_source(node.arg, lib)})"
    raise TypeError(node)


def _compile(node, vector):
    lib = "np." if vector else "math."
    src = _source(node, lib)
    if vector:
        src = src.replace("np.pow(", "np.power(")
    code = compile(f"lambda x: {src}", "<coefficient>", "eval")
    return eval(code, {"math": math, "np": np, "__builtins__": {}})


class CoefficientField:
    """A coefficient given by a closed-form expression in one variable.

    Calling the field evaluates it through a compiled fast path; on any
    arithmetic failure the tree walker re-evaluates to produce a
    :class:`DomainError` naming the offending subexpression.
    """

    def __init__(self, text, variable: str = "x"):
        if isinstance(text, (int, float)):
            text = repr(float(text))
        self.text = str(text).strip()
        self.variable = variable
        self.node = parse_expression(self.text, variable)
        self._fast = _compile(self.node, vector=False)
        self._vec = _compile(self.node, vector=True)

    def __reduce__(self):
        return (CoefficientField, (self.text, self.variable))

    def __repr__(self):
        return f"CoefficientField({self.text!r})"

    def __eq__(self, other):
        return isinstance(other, CoefficientField) and other.text == self.text and other.variable == self.variable

    def __hash__(self):
        return hash((self.text, self.variable))

    def __call__(self, x: float) -> float:
        try:
            val = self._fast(x)
        except (ZeroDivisionError, ValueError, OverflowError, TypeError):
            return evaluate(self.node, x)
        if val - val != 0.0:
            return evaluate(self.node, x)
        return val

    def evaluate(self, x: float) -> float:
        return evaluate(self.node, x)

    def vectorized(self, xs):
        """Evaluate on an array without domain diagnostics (non-finite values pass through)."""
        xs = np.asarray(xs, dtype=float)
        with np.errstate(all="ignore"):
            out = self._vec(xs)
        return np.broadcast_to(np.asarray(out, dtype=float), xs.shape).copy()

    @property
    def is_constant(self) -> bool:
        return _free_of_variable(self.node)

    def constant_value(self):
        return evaluate(self.node, 0.0) if self.is_constant else None


def _free_of_variable(node):
    if isinstance(node, Var):
        return False
    if isinstance(node, (Num, Const)):
        return True
    if isinstance(node, Neg):
        return _free_of_variable(node.arg)
    if isinstance(node, BinOp):
        return _free_of_variable(node.left) and _free_of_variable(node.right)
    if isinstance(node, Call):
        return _free_of_variable(node.arg)
    return False


def eval_coefficient(field: CoefficientField, x: float) -> float:
    """Value of ``field`` at ``x``; raises :class:`DomainError` on failure."""
    return field.evaluate(x)


def eval_constant(text: str) -> float:
    """Evaluate a variable-free expression such as ``pi/2``."""
    field = CoefficientField(text, variable="\0")
    return field.evaluate(0.0)
