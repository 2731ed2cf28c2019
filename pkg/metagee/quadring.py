# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.quadring`
================================================================================

Exact arithmetic in the quadratic ring Q[sigma], where sigma is the metallic
number of a pair (p, q): the positive root of x^2 - p*x - q.

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* Python standard library ``fractions`` for arbitrary precision rationals

"""

import math
from fractions import Fraction
from numbers import Rational

from . import MetageeError


class RingMismatchError(MetageeError):
    """Operands belong to rings with different (p, q)."""


class ZeroNormError(MetageeError, ZeroDivisionError):
    """Division by an element whose norm vanishes."""


class MetallicParams:
    """
    The pair (p, q) fixing the metallic number sigma = (p + sqrt(p^2 + 4q)) / 2.

    :param int p: Positive integer.
    :param int q: Positive integer.
    """

    __slots__ = ("_p", "_q")

    def __init__(self, p, q):
        for label, value in (("p", p), ("q", q)):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError("%s must be a positive integer, got %r" % (label, value))
        self._p = p
        self._q = q

    @property
    def p(self):
        """Coefficient of sigma in the minimal polynomial."""
        return self._p

    @property
    def q(self):
        """Constant term of the minimal polynomial."""
        return self._q

    @property
    def discriminant(self):
        """p^2 + 4q."""
        return self._p * self._p + 4 * self._q

    @property
    def sigma_is_rational(self):
        """True when p^2 + 4q is a perfect square."""
        root = math.isqrt(self.discriminant)
        return root * root == self.discriminant

    @property
    def is_golden(self):
        """True for p = q = 1."""
        return self._p == 1 and self._q == 1

    @property
    def sigma(self):
        """sigma as a ring element."""
        return RingElem(0, 1, self)

    @property
    def sigbar(self):
        """The conjugate p - sigma as a ring element."""
        return RingElem(self._p, -1, self)

    def sigma_float(self):
        """sigma in floating point."""
        return (self._p + math.sqrt(self.discriminant)) / 2

    def element(self, a, b=0):
        """
        Build the element a + b*sigma.

        :param a: Rational coefficient of 1.
        :param b: Rational coefficient of sigma. Defaults to ``0``.
        """
        return RingElem(a, b, self)

    def __eq__(self, other):
        if not isinstance(other, MetallicParams):
            return NotImplemented
        return self._p == other.p and self._q == other.q

    def __hash__(self):
        return hash((self._p, self._q))

    def __repr__(self):
        return "MetallicParams(p=%d, q=%d)" % (self._p, self._q)


GOLDEN = MetallicParams(1, 1)


def _fraction(value):
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError("ring coefficients must be rational, got %r" % (value,))


class RingElem:
    """
    The exact element a + b*sigma of Q[sigma].

    :param a: Rational coefficient of 1.
    :param b: Rational coefficient of sigma.
    :param MetallicParams params: The ring the element lives in.
    """

    __slots__ = ("_a", "_b", "_params")

    def __init__(self, a, b, params):
        if not isinstance(params, MetallicParams):
            raise TypeError("params must be MetallicParams")
        self._a = _fraction(a)
        self._b = _fraction(b)
        self._params = params

    @property
    def a(self):
        """Coefficient of 1."""
        return self._a

    @property
    def b(self):
        """Coefficient of sigma."""
        return self._b

    @property
    def params(self):
        """The ring's (p, q)."""
        return self._params

    @property
    def is_rational(self):
        """True when the sigma coefficient is zero."""
        return self._b == 0

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.params != self._params:
                raise RingMismatchError("ring mismatch: %r vs %r" % (self._params, other.params))
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return RingElem(other, 0, self._params)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElem(self._a + other.a, self._b + other.b, self._params)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(-self._a, -self._b, self._params)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElem(self._a - other.a, self._b - other.b, self._params)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p, q = self._params.p, self._params.q
        a1, b1, a2, b2 = self._a, self._b, other.a, other.b
        # sigma^2 = p*sigma + q
        return RingElem(a1 * a2 + b1 * b2 * q, a1 * b2 + a2 * b1 + b1 * b2 * p, self._params)

    __rmul__ = __mul__

    def conj(self):
        """The image under sigma -> p - sigma."""
        return RingElem(self._a + self._b * self._params.p, -self._b, self._params)

    def norm(self):
        """x * conj(x) = a^2 + a*b*p - b^2*q, a rational."""
        p, q = self._params.p, self._params.q
        return self._a * self._a + self._a * self._b * p - self._b * self._b * q

    def inverse(self):
        """The multiplicative inverse conj(x) / norm(x)."""
        norm = self.norm()
        if norm == 0:
            raise ZeroNormError("division by an element of zero norm: %s" % self)
        conj = self.conj()
        return RingElem(conj.a / norm, conj.b / norm, self._params)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if isinstance(exponent, bool) or not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** -exponent
        result = RingElem(1, 0, self._params)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def to_float(self):
        """
        Evaluate a + b*sigma in floating point.

        The element is rewritten as r + s*sqrt(D); when r and s*sqrt(D) have
        opposite signs the value is computed as (r^2 - s^2*D) / (r - s*sqrt(D))
        so that no cancellation happens.
        """
        discriminant = self._params.discriminant
        r = self._a + self._b * Fraction(self._params.p, 2)
        s = self._b / 2
        root = math.isqrt(discriminant)
        if root * root == discriminant:
            return float(r + s * root)
        if s == 0:
            return float(r)
        if r == 0 or (r > 0) == (s > 0):
            return float(r) + float(s) * math.sqrt(discriminant)
        return float(r * r - s * s * discriminant) / (float(r) - float(s) * math.sqrt(discriminant))

    def __float__(self):
        return self.to_float()

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return (
                self._params == other.params and self._a == other.a and self._b == other.b
            )
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._params))

    def __repr__(self):
        return "RingElem(%s, %s, %r)" % (self._a, self._b, self._params)

    def __str__(self):
        if self._b == 0:
            return str(self._a)
        if self._a == 0:
            return "%s*sigma" % (self._b,)
        sign = "-" if self._b < 0 else "+"
        return "%s %s %s*sigma" % (self._a, sign, abs(self._b))


def _require_same(x, y):
    if x.params != y.params:
        raise RingMismatchError("ring mismatch: %r vs %r" % (x.params, y.params))


def ring_add(x, y):
    """
    Componentwise sum of two elements of the same ring.

    :param RingElem x: Left operand.
    :param RingElem y: Right operand.
    """
    _require_same(x, y)
    return x + y


def ring_mul(x, y):
    """
    Product of two elements, reducing sigma^2 to p*sigma + q.

    :param RingElem x: Left operand.
    :param RingElem y: Right operand.
    """
    _require_same(x, y)
    return x * y


def ring_conj(x):
    """
    Swap sigma and its conjugate.

    :param RingElem x: The element.
    """
    return x.conj()


def ring_to_float(x):
    """
    Floating point value of an element.

    :param RingElem x: The element.
    """
    return x.to_float()
