"""A small expression language for q(x), v(x), A(L) and B(L).

Grammar (``^`` binds tightest, then unary minus, then ``* /``, then ``+ -``)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" exponent)?
    exponent:= ["-"] INT | "(" constant-expr ")"
    primary := INT | IDENT | ("exp" | "log" | "sqrt") "(" expr ")" | "(" expr ")"

An expression has at most one free variable.  Exponents are constants; an
integral exponent becomes :class:`IntPow`, any other rational :class:`RatPow`.
There is no implicit multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ExpArgumentNotZero,
    ExprSyntaxError,
    LogArgumentNotOne,
    MultipleVariables,
    NotAPolynomial,
    PoleAtExpansionPoint,
    PowArgumentNotOne,
    SqrtArgumentNotOne,
)
from .series import DEFAULT_ORDER, Polynomial, Series, as_fraction, exp, log, power

FUNCTIONS = ("exp", "log", "sqrt")


class Node:
    __slots__ = ()

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True)
class RationalLiteral(Node):
    value: Fraction


@dataclass(frozen=True)
class Variable(Node):
    name: str


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class IntPow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class RatPow(Node):
    base: Node
    exponent: Fraction


@dataclass(frozen=True)
class Exp(Node):
    arg: Node


@dataclass(frozen=True)
class Log(Node):
    arg: Node


@dataclass(frozen=True)
class Sqrt(Node):
    arg: Node


_BINARY = {"+": Add, "-": Sub, "*": Mul, "/": Div}
_CALLS = {"exp": Exp, "log": Log, "sqrt": Sqrt}


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        offset = len(text[:i].encode())
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], offset))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], offset))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch, offset))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", offset)
    tokens.append(("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables: set[str] = set()

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.take()[0]
            node = _BINARY[op](node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[0] in ("*", "/"):
            op = self.take()[0]
            node = _BINARY[op](node, self.unary())
        return node

    def unary(self):
        if self.tok[0] == "-":
            self.take()
            return Neg(self.unary())
        if self.tok[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok[0] != "^":
            return base
        self.take()
        exponent = self.exponent()
        if self.tok[0] == "^":
            raise ExprSyntaxError("chained '^' is ambiguous; add parentheses", self.tok[2])
        if exponent.denominator == 1:
            return IntPow(base, int(exponent))
        return RatPow(base, exponent)

    def exponent(self) -> Fraction:
        tok = self.tok
        if tok[0] == "num":
            return Fraction(int(self.take()[1]))
        if tok[0] == "-" and self.tokens[self.i + 1][0] == "num":
            self.take()
            return -Fraction(int(self.take()[1]))
        if tok[0] == "(":
            self.take()
            before = set(self.variables)
            node = self.expr()
            self.take(")")
            if self.variables != before or free_variable(node) is not None:
                raise ExprSyntaxError("exponent must be a constant", tok[2])
            value = _constant_value(node)
            if value is None:
                raise ExprSyntaxError("exponent must evaluate to a rational constant", tok[2])
            return value
        raise ExprSyntaxError("expected an integer or a parenthesized constant exponent", tok[2])

    def primary(self):
        tok = self.tok
        if tok[0] == "num":
            self.take()
            return RationalLiteral(Fraction(int(tok[1])))
        if tok[0] == "ident":
            self.take()
            name = tok[1]
            if name in _CALLS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return _CALLS[name](arg)
            if self.tok[0] == "(":
                raise ExprSyntaxError(f"unknown function {name!r}", tok[2])
            self.variables.add(name)
            if len(self.variables) > 1:
                raise MultipleVariables(
                    f"expressions take one variable, found {sorted(self.variables)} "
                    f"(second one at byte {tok[2]})"
                )
            return Variable(name)
        if tok[0] == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if tok[0] == "end":
            raise ExprSyntaxError("unexpected end of input", tok[2])
        raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])


def parse(text: str) -> Node:
    """Parse an expression string into an AST."""
    parser = _Parser(text)
    if parser.tok[0] == "end":
        raise ExprSyntaxError("empty expression", 0)
    node = parser.expr()
    parser.take("end")
    return node


def _constant_value(node: Node) -> Fraction | None:
    if isinstance(node, RationalLiteral):
        return node.value
    if isinstance(node, Neg):
        v = _constant_value(node.arg)
        return None if v is None else -v
    if isinstance(node, (Add, Sub, Mul, Div)):
        a, b = _constant_value(node.left), _constant_value(node.right)
        if a is None or b is None:
            return None
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        if isinstance(node, Mul):
            return a * b
        return None if b == 0 else a / b
    if isinstance(node, IntPow):
        a = _constant_value(node.base)
        if a is None or (a == 0 and node.exponent < 0):
            return None
        return a**node.exponent
    return None


def free_variable(node: Node) -> str | None:
    """Name of the free variable, or None for a constant expression."""
    if isinstance(node, Variable):
        return node.name
    if isinstance(node, RationalLiteral):
        return None
    for child in _children(node):
        name = free_variable(child)
        if name is not None:
            return name
    return None


def _children(node: Node):
    if isinstance(node, (Add, Sub, Mul, Div)):
        return (node.left, node.right)
    if isinstance(node, (IntPow, RatPow)):
        return (node.base,)
    if isinstance(node, (Neg, Exp, Log, Sqrt)):
        return (node.arg,)
    return ()


# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, IntPow: 4, RatPow: 4}


def _prec(node: Node) -> int:
    if isinstance(node, RationalLiteral):
        v = node.value
        return 5 if v.denominator == 1 and v >= 0 else 0
    return _PREC.get(type(node), 5)


def _wrap(node: Node, min_prec: int) -> str:
    s = to_string(node)
    return s if _prec(node) >= min_prec else f"({s})"


def to_string(node: Node) -> str:
    """Print an AST so that ``parse(to_string(ast))`` rebuilds it."""
    if isinstance(node, RationalLiteral):
        v = node.value
        return str(v) if v.denominator == 1 and v >= 0 else f"({v})"
    if isinstance(node, Variable):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, 3)
    if isinstance(node, (Add, Sub, Mul, Div)):
        sym = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
        p = _PREC[type(node)]
        left = _wrap(node.left, p)
        right = _wrap(node.right, p + 1)
        if p == 1:
            return f"{left} {sym} {right}"
        return f"{left}{sym}{right}"
    if isinstance(node, IntPow):
        e = node.exponent
        return f"{_wrap(node.base, 5)}^{e if e >= 0 else f'({e})'}"
    if isinstance(node, RatPow):
        return f"{_wrap(node.base, 5)}^({node.exponent})"
    if isinstance(node, Exp):
        return f"exp({to_string(node.arg)})"
    if isinstance(node, Log):
        return f"log({to_string(node.arg)})"
    if isinstance(node, Sqrt):
        return f"sqrt({to_string(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def canonical(text: str) -> str:
    return to_string(parse(text))


# expansion


@dataclass(frozen=True)
class ExpansionRequest:
    ast: Node
    point: Fraction = Fraction(0)
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be >= 0")


def _as_node(expr) -> Node:
    return parse(expr) if isinstance(expr, str) else expr


def default_tag(node: Node, point: Fraction) -> str:
    name = free_variable(node) or "x"
    return name if point == 0 else f"{name}-{point}"


def taylor(expr, point=0, order: int = DEFAULT_ORDER, var: str | None = None) -> Series:
    """Taylor series of ``expr`` about ``point`` in the shifted variable.

    ``expr`` may be a string, an AST or an :class:`ExpansionRequest`.  The
    result is computed by series arithmetic on the tree, so log, sqrt and
    rational powers need an argument equal to exactly 1 at the point, and
    exp an argument equal to 0.
    """
    if isinstance(expr, ExpansionRequest):
        node, point, order = expr.ast, expr.point, expr.order
    else:
        node = _as_node(expr)
        point = as_fraction(point)
    if var is None:
        var = default_tag(node, point)
    return _expand(node, point, order, var)


def _expand(node: Node, x0: Fraction, n: int, var: str) -> Series:
    if isinstance(node, RationalLiteral):
        return Series.constant(node.value, n, var)
    if isinstance(node, Variable):
        return Series.variable(n, var, at=x0)
    if isinstance(node, Neg):
        return -_expand(node.arg, x0, n, var)
    if isinstance(node, (Add, Sub, Mul)):
        a = _expand(node.left, x0, n, var)
        b = _expand(node.right, x0, n, var)
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        return a * b
    if isinstance(node, Div):
        a = _expand(node.left, x0, n, var)
        b = _expand(node.right, x0, n, var)
        if b.coeffs[0] == 0:
            raise PoleAtExpansionPoint(f"denominator {to_string(node.right)} vanishes at {x0}")
        return a / b
    if isinstance(node, IntPow):
        base = _expand(node.base, x0, n, var)
        if node.exponent < 0 and base.coeffs[0] == 0:
            raise PoleAtExpansionPoint(f"{to_string(node)} has a pole at {x0}")
        return base**node.exponent
    if isinstance(node, RatPow):
        base = _expand(node.base, x0, n, var)
        if base.coeffs[0] != 1:
            raise PowArgumentNotOne(
                f"base {to_string(node.base)} of a rational power must equal 1 at {x0}, "
                f"got {base.coeffs[0]}"
            )
        return power(base, node.exponent)
    if isinstance(node, Exp):
        arg = _expand(node.arg, x0, n, var)
        if arg.coeffs[0] != 0:
            raise ExpArgumentNotZero(
                f"argument {to_string(node.arg)} of exp must equal 0 at {x0}, got {arg.coeffs[0]}"
            )
        return exp(arg)
    if isinstance(node, Log):
        arg = _expand(node.arg, x0, n, var)
        if arg.coeffs[0] != 1:
            raise LogArgumentNotOne(
                f"argument {to_string(node.arg)} of log must equal 1 at {x0}, got {arg.coeffs[0]}"
            )
        return log(arg)
    if isinstance(node, Sqrt):
        arg = _expand(node.arg, x0, n, var)
        if arg.coeffs[0] != 1:
            raise SqrtArgumentNotOne(
                f"argument {to_string(node.arg)} of sqrt must equal 1 at {x0}, got {arg.coeffs[0]}"
            )
        return power(arg, Fraction(1, 2))
    raise TypeError(f"not an expression node: {node!r}")


def to_polynomial(expr, var: str = "x") -> Polynomial:
    """Evaluate a polynomial expression exactly in the polynomial ring."""
    node = _as_node(expr)
    return _poly(node, var)


def _poly(node: Node, var: str) -> Polynomial:
    if isinstance(node, RationalLiteral):
        return Polynomial([node.value], var)
    if isinstance(node, Variable):
        return Polynomial([0, 1], var)
    if isinstance(node, Neg):
        return -_poly(node.arg, var)
    if isinstance(node, (Add, Sub, Mul)):
        a, b = _poly(node.left, var), _poly(node.right, var)
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        return a * b
    if isinstance(node, Div):
        b = _poly(node.right, var)
        if b.degree != 0:
            raise NotAPolynomial(f"division by non-constant {to_string(node.right)}")
        return _poly(node.left, var) * (1 / b.coeff(0))
    if isinstance(node, IntPow) and node.exponent >= 0:
        return _poly(node.base, var) ** node.exponent
    raise NotAPolynomial(f"{to_string(node)} is not a polynomial")
