# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.exprlang`
================================================================================

The small expression language used for immersion components, warping
functions and distribution coefficients, with second order forward mode
differentiation.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" integer)?
    atom   := number | ident | func "(" expr ")" | "(" expr ")"
    func   := sin | cos | tan | sqrt | exp | ln

The identifiers ``pi``, ``sigma``, ``sigbar``, ``p`` and ``q`` are reserved.
``sigma`` and ``sigbar`` are bound to the metallic parameters at evaluation
time, so one parsed expression serves every (p, q).

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* NumPy for the gradient and Hessian arrays of :class:`Jet2`

"""

import math
import re
from fractions import Fraction

import numpy as np

from . import MetageeError

FUNCTIONS = ("sin", "cos", "tan", "sqrt", "exp", "ln")
RESERVED = ("pi", "sigma", "sigbar", "p", "q")


class ExprError(MetageeError):
    """Base class for expression errors."""


class ExprSyntaxError(ExprError):
    """
    Lexical or syntax error.

    :param str message: What went wrong.
    :param int offset: UTF-8 byte offset of the offending token.
    :param expected: Descriptions of the tokens that would have been accepted.
    """

    def __init__(self, message, offset, expected):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        super().__init__(
            "syntax error at offset %d: %s (expected one of %s)"
            % (offset, message, ", ".join(self.expected))
        )


class ExprDomainError(ExprError):
    """
    Evaluation left the domain of a function.

    :param str message: What went wrong.
    :param str subexpression: The rendered subexpression that failed.
    """

    def __init__(self, message, subexpression):
        self.subexpression = subexpression
        super().__init__("%s in %s" % (message, subexpression))


# AST


class Expr:
    """Base class of expression nodes. Nodes are immutable and compare structurally."""

    __slots__ = ()
    precedence = 5

    def _fields(self):
        raise NotImplementedError()

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self._fields() == other._fields()

    def __hash__(self):
        return hash((type(self).__name__,) + self._fields())

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, ", ".join(repr(f) for f in self._fields()))

    def __str__(self):
        return self.render()

    def render(self):
        """Source text that parses back to this node."""
        raise NotImplementedError()

    def free_vars(self):
        """Names other than the reserved constants."""
        return frozenset()

    def _jet(self, env):
        raise NotImplementedError()

    def _value(self, env):
        raise NotImplementedError()


def _render_number(value):
    if value.denominator == 1:
        return str(value.numerator)
    scaled, digits = value, 0
    while scaled.denominator != 1:
        scaled *= 10
        digits += 1
        if digits > 64:
            raise ValueError("%s has no finite decimal form" % value)
    text = str(scaled.numerator).rjust(digits + 1, "0")
    return text[:-digits] + "." + text[-digits:]


class Number(Expr):
    """
    A nonnegative decimal literal, held exactly.

    :param value: The literal's value.
    """

    __slots__ = ("value",)

    def __init__(self, value):
        value = Fraction(value)
        if value < 0:
            raise ValueError("literals are nonnegative; use Negate")
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("expression nodes are immutable")

    def _fields(self):
        return (self.value,)

    def render(self):
        return _render_number(self.value)

    def _jet(self, env):
        return Jet2.constant(float(self.value), env.size)

    def _value(self, env):
        return float(self.value)


class _Node(Expr):
    __slots__ = ()

    def __setattr__(self, name, value):
        raise AttributeError("expression nodes are immutable")

    def _set(self, **fields):
        for name, value in fields.items():
            object.__setattr__(self, name, value)


class Name(_Node):
    """
    A parameter or user constant.

    :param str name: The identifier.
    """

    __slots__ = ("name",)

    def __init__(self, name):
        self._set(name=name)

    def _fields(self):
        return (self.name,)

    def render(self):
        return self.name

    def free_vars(self):
        return frozenset((self.name,))

    def _jet(self, env):
        index = env.index.get(self.name)
        if index is not None:
            return Jet2.variable(env.point[self.name], index, env.size)
        return Jet2.constant(env.constant(self.name), env.size)

    def _value(self, env):
        if self.name in env.point:
            return env.point[self.name]
        return env.constant(self.name)


class Constant(_Node):
    """
    One of the reserved constants pi, sigma, sigbar, p, q.

    :param str name: The reserved identifier.
    """

    __slots__ = ("name",)

    def __init__(self, name):
        if name not in RESERVED:
            raise ValueError("%r is not a reserved constant" % name)
        self._set(name=name)

    def _fields(self):
        return (self.name,)

    def render(self):
        return self.name

    def _jet(self, env):
        return Jet2.constant(env.reserved[self.name], env.size)

    def _value(self, env):
        return env.reserved[self.name]


class Negate(_Node):
    """
    Unary minus.

    :param Expr operand: The negated expression.
    """

    __slots__ = ("operand",)
    precedence = 3

    def __init__(self, operand):
        self._set(operand=operand)

    def _fields(self):
        return (self.operand,)

    def render(self):
        inner = self.operand.render()
        if self.operand.precedence < self.precedence:
            inner = "(%s)" % inner
        return "-" + inner

    def free_vars(self):
        return self.operand.free_vars()

    def _jet(self, env):
        return -self.operand._jet(env)

    def _value(self, env):
        return -self.operand._value(env)


class Binary(_Node):
    """
    Left associative binary operation.

    :param str op: One of ``+ - * /``.
    :param Expr left: Left operand.
    :param Expr right: Right operand.
    """

    __slots__ = ("op", "left", "right")
    _PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}

    def __init__(self, op, left, right):
        if op not in self._PRECEDENCE:
            raise ValueError("unknown operator %r" % op)
        self._set(op=op, left=left, right=right)

    @property
    def precedence(self):
        return self._PRECEDENCE[self.op]

    def _fields(self):
        return (self.op, self.left, self.right)

    def render(self):
        left = self.left.render()
        right = self.right.render()
        if self.left.precedence < self.precedence:
            left = "(%s)" % left
        if self.right.precedence <= self.precedence:
            right = "(%s)" % right
        if self.precedence == 1:
            return "%s %s %s" % (left, self.op, right)
        return left + self.op + right

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def _jet(self, env):
        left = self.left._jet(env)
        right = self.right._jet(env)
        if self.op == "+":
            return left + right
        if self.op == "-":
            return left - right
        if self.op == "*":
            return left * right
        if right.value == 0:
            raise ExprDomainError("division by zero", self.render())
        return left * right.reciprocal()

    def _value(self, env):
        left = self.left._value(env)
        right = self.right._value(env)
        if self.op == "+":
            return left + right
        if self.op == "-":
            return left - right
        if self.op == "*":
            return left * right
        if right == 0:
            raise ExprDomainError("division by zero", self.render())
        return left / right


class Power(_Node):
    """
    Integer power.

    :param Expr base: The base; rendered in parentheses unless it is an atom.
    :param int exponent: Nonnegative integer exponent.
    """

    __slots__ = ("base", "exponent")
    precedence = 4

    def __init__(self, base, exponent):
        if isinstance(exponent, bool) or not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        self._set(base=base, exponent=exponent)

    def _fields(self):
        return (self.base, self.exponent)

    def render(self):
        base = self.base.render()
        if self.base.precedence < 5:
            base = "(%s)" % base
        return "%s^%d" % (base, self.exponent)

    def free_vars(self):
        return self.base.free_vars()

    def _jet(self, env):
        base = self.base._jet(env)
        n = self.exponent
        if n == 0:
            return Jet2.constant(1.0, env.size)
        v = base.value
        return base.chain(
            v**n,
            n * v ** (n - 1),
            n * (n - 1) * v ** (n - 2) if n > 1 else 0.0,
        )

    def _value(self, env):
        return self.base._value(env) ** self.exponent


class Call(_Node):
    """
    Elementary function application.

    :param str func: One of sin, cos, tan, sqrt, exp, ln.
    :param Expr arg: The argument.
    """

    __slots__ = ("func", "arg")

    def __init__(self, func, arg):
        if func not in FUNCTIONS:
            raise ValueError("unknown function %r" % func)
        self._set(func=func, arg=arg)

    def _fields(self):
        return (self.func, self.arg)

    def render(self):
        return "%s(%s)" % (self.func, self.arg.render())

    def free_vars(self):
        return self.arg.free_vars()

    def _check(self, x):
        if self.func == "sqrt" and x <= 0:
            raise ExprDomainError("sqrt of nonpositive value %r" % x, self.render())
        if self.func == "ln" and x <= 0:
            raise ExprDomainError("ln of nonpositive value %r" % x, self.render())
        if self.func == "tan" and math.cos(x) == 0:
            raise ExprDomainError("tan at a pole", self.render())

    def _jet(self, env):
        arg = self.arg._jet(env)
        x = arg.value
        self._check(x)
        if self.func == "sin":
            s, c = math.sin(x), math.cos(x)
            return arg.chain(s, c, -s)
        if self.func == "cos":
            s, c = math.sin(x), math.cos(x)
            return arg.chain(c, -s, -c)
        if self.func == "tan":
            t = math.tan(x)
            sec2 = 1.0 + t * t
            return arg.chain(t, sec2, 2.0 * t * sec2)
        if self.func == "sqrt":
            r = math.sqrt(x)
            return arg.chain(r, 0.5 / r, -0.25 / (r * x))
        if self.func == "exp":
            e = math.exp(x)
            return arg.chain(e, e, e)
        return arg.chain(math.log(x), 1.0 / x, -1.0 / (x * x))

    def _value(self, env):
        x = self.arg._value(env)
        self._check(x)
        return getattr(math, "log" if self.func == "ln" else self.func)(x)


# Jets


class Jet2:
    """
    Value, gradient and Hessian of a scalar function at a point.

    :param float value: Function value.
    :param numpy.ndarray grad: Gradient, length k.
    :param numpy.ndarray hess: Symmetric k by k Hessian.
    """

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = value
        self.grad = grad
        self.hess = hess

    @classmethod
    def constant(cls, value, size):
        """A jet with vanishing derivatives."""
        return cls(value, np.zeros(size), np.zeros((size, size)))

    @classmethod
    def variable(cls, value, index, size):
        """The jet of the coordinate function with the given index."""
        grad = np.zeros(size)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((size, size)))

    def chain(self, f0, f1, f2):
        """
        Compose with a scalar function g given g, g' and g'' at ``self.value``.

        The Hessian is a sum of symmetric terms, so it stays bitwise symmetric.
        """
        return Jet2(f0, f1 * self.grad, f1 * self.hess + f2 * np.outer(self.grad, self.grad))

    def reciprocal(self):
        """The jet of 1/self."""
        v = self.value
        return self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))

    def __add__(self, other):
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    def __sub__(self, other):
        return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        cross = np.outer(self.grad, other.grad)
        return Jet2(
            self.value * other.value,
            self.value * other.grad + other.value * self.grad,
            self.value * other.hess + other.value * self.hess + (cross + cross.T),
        )

    def __repr__(self):
        return "Jet2(value=%r, grad=%r, hess=%r)" % (
            self.value,
            self.grad.tolist(),
            self.hess.tolist(),
        )


class _Env:
    __slots__ = ("point", "index", "size", "reserved", "constants")

    def __init__(self, point, params, constants):
        self.point = {name: float(value) for name, value in point.items()}
        self.index = {name: i for i, name in enumerate(self.point)}
        self.size = len(self.point)
        self.reserved = {
            "pi": math.pi,
            "sigma": params.sigma.to_float(),
            "sigbar": params.sigbar.to_float(),
            "p": float(params.p),
            "q": float(params.q),
        }
        self.constants = constants or {}

    def constant(self, name):
        try:
            return float(self.constants[name])
        except KeyError:
            raise ExprError("unbound name %r" % name) from None


# Lexer and parser

_NUMBER = re.compile(r"\d+(?:\.\d*)?|\.\d+")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_OPERATORS = "+-*/^()"

_ATOM_START = ("number", "identifier", "function", "'('")
_OPERAND_START = ("'-'",) + _ATOM_START
_AFTER_OPERAND = ("'+'", "'-'", "'*'", "'/'", "'^'", "end of input")


class _Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind = kind
        self.text = text
        self.offset = offset

    def describe(self):
        return "end of input" if self.kind == "end" else repr(self.text)


def _tokenize(src):
    pos = 0
    consumed = 0  # bytes before pos
    while True:
        while pos < len(src) and src[pos].isspace():
            consumed += len(src[pos].encode("utf-8"))
            pos += 1
        if pos == len(src):
            yield _Token("end", "", consumed)
            return
        char = src[pos]
        match = _NUMBER.match(src, pos) or _IDENT.match(src, pos)
        if match:
            text = match.group()
            kind = "number" if (text[0].isdigit() or text[0] == ".") else "ident"
        elif char in _OPERATORS:
            text, kind = char, char
        else:
            raise ExprSyntaxError(
                "unexpected character %r" % char, consumed, ("number", "identifier", "operator")
            )
        yield _Token(kind, text, consumed)
        consumed += len(text.encode("utf-8"))
        pos += len(text)


class _Parser:
    def __init__(self, src):
        self._tokens = list(_tokenize(src))
        self._index = 0

    def _peek(self):
        return self._tokens[self._index]

    def _advance(self):
        token = self._tokens[self._index]
        self._index += 1
        return token

    @staticmethod
    def _fail(token, expected):
        raise ExprSyntaxError("unexpected %s" % token.describe(), token.offset, expected)

    def parse(self):
        node = self._expr()
        if self._peek().kind != "end":
            self._fail(self._peek(), _AFTER_OPERAND)
        return node

    def _expr(self):
        node = self._term()
        while self._peek().kind in ("+", "-"):
            op = self._advance().kind
            node = Binary(op, node, self._term())
        return node

    def _term(self):
        node = self._factor()
        while self._peek().kind in ("*", "/"):
            op = self._advance().kind
            node = Binary(op, node, self._factor())
        return node

    def _factor(self):
        if self._peek().kind == "-":
            self._advance()
            return Negate(self._factor())
        return self._power()

    def _power(self):
        node = self._atom()
        if self._peek().kind == "^":
            self._advance()
            token = self._peek()
            if token.kind != "number" or not token.text.isdigit():
                self._fail(token, ("integer",))
            self._advance()
            node = Power(node, int(token.text))
        return node

    def _atom(self):
        token = self._peek()
        if token.kind == "number":
            self._advance()
            text = token.text + "0" if token.text.endswith(".") else token.text
            return Number(Fraction(text))
        if token.kind == "ident":
            self._advance()
            if token.text in FUNCTIONS:
                if self._peek().kind != "(":
                    self._fail(self._peek(), ("'('",))
                self._advance()
                arg = self._expr()
                self._close()
                return Call(token.text, arg)
            if token.text in RESERVED:
                return Constant(token.text)
            return Name(token.text)
        if token.kind == "(":
            self._advance()
            node = self._expr()
            self._close()
            return node
        self._fail(token, _OPERAND_START)
        return None

    def _close(self):
        if self._peek().kind != ")":
            self._fail(self._peek(), ("')'", "'+'", "'-'", "'*'", "'/'", "'^'"))
        self._advance()


def parse(src):
    """
    Parse expression source text.

    :param str src: The expression.
    :return: The expression tree.
    """
    if not isinstance(src, str):
        raise TypeError("expression source must be text")
    return _Parser(src).parse()


def render(expr):
    """
    Source text for an expression; ``parse(render(e)) == e``.

    :param Expr expr: The expression.
    """
    return expr.render()


def free_vars(expr):
    """
    The non-reserved names an expression uses.

    :param Expr expr: The expression.
    """
    return expr.free_vars()


def eval_jet2(expr, point, params, constants=None):
    """
    Evaluate an expression with its gradient and Hessian.

    :param Expr expr: The expression.
    :param point: Ordered mapping of variable name to value; derivatives follow its order.
    :param MetallicParams params: Binds sigma, sigbar, p and q.
    :param dict constants: Named constants with zero derivative. Defaults to ``None``.
    :return: The :class:`Jet2` at the point.
    """
    return expr._jet(_Env(point, params, constants))


def evaluate(expr, point, params, constants=None):
    """
    Evaluate an expression's value only.

    :param Expr expr: The expression.
    :param point: Mapping of variable name to value.
    :param MetallicParams params: Binds sigma, sigbar, p and q.
    :param dict constants: Named constants. Defaults to ``None``.
    """
    return expr._value(_Env(point, params, constants))
