# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.ambient`
================================================================================

The flat ambient space R^n with a constant diagonal metallic structure J,
each axis carrying sigma or its conjugate.

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* NumPy for the floating point action of J

"""

import numpy as np

from .quadring import RingElem

SIGMA = "sigma"
SIGBAR = "sigbar"


class AmbientStructure:
    """
    A diagonal metallic structure on Euclidean R^n.

    :param signs: Sequence of ``"sigma"`` / ``"sigbar"``, one per axis.
    :param MetallicParams params: The ring of the structure.
    """

    def __init__(self, signs, params):
        signs = tuple(signs)
        if not signs:
            raise ValueError("the ambient space needs at least one axis")
        for index, sign in enumerate(signs):
            if sign not in (SIGMA, SIGBAR):
                raise ValueError(
                    "axis %d: only diagonal sigma/sigbar structures are supported, got %r"
                    % (index, sign)
                )
        self._signs = signs
        self._params = params
        sigma = params.sigma.to_float()
        sigbar = params.sigbar.to_float()
        self._eigenvalues = np.array([sigma if s == SIGMA else sigbar for s in signs])

    @classmethod
    def from_almost_product(cls, product_signs, params):
        """
        Build J = (p/2) I + ((2 sigma - p)/2) F from a diagonal almost product structure F.

        :param product_signs: Sequence of +1 / -1, the diagonal of F.
        :param MetallicParams params: The ring of the structure.
        """
        signs = []
        for value in product_signs:
            if value not in (1, -1):
                raise ValueError("an almost product structure has eigenvalues +1 and -1")
            signs.append(SIGMA if value == 1 else SIGBAR)
        return cls(signs, params)

    @property
    def n(self):
        """Ambient dimension."""
        return len(self._signs)

    @property
    def signs(self):
        """The axis tokens."""
        return self._signs

    @property
    def params(self):
        """The ring of the structure."""
        return self._params

    @property
    def diagonal(self):
        """The axis coefficients as exact ring elements."""
        sigma, sigbar = self._params.sigma, self._params.sigbar
        return tuple(sigma if s == SIGMA else sigbar for s in self._signs)

    @property
    def eigenvalues(self):
        """The axis coefficients in floating point."""
        return self._eigenvalues.copy()

    def almost_product(self):
        """The diagonal of F = (2J - pI) / (2 sigma - p): +1 on sigma axes, -1 elsewhere."""
        p = self._params.p
        scale = (2 * self._params.sigma - p).inverse()
        diagonal = []
        for value in self.diagonal:
            entry = (2 * value - p) * scale
            diagonal.append(int(entry.a))
        return tuple(diagonal)

    def apply(self, v):
        """
        Apply J to a vector or to each column of a matrix.

        :param v: Array whose first axis has length n.
        """
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.n:
            raise ValueError("expected %d ambient components, got %d" % (self.n, v.shape[0]))
        if v.ndim == 1:
            return self._eigenvalues * v
        return self._eigenvalues[:, None] * v

    def with_params(self, params):
        """The same sign pattern over another ring."""
        return AmbientStructure(self._signs, params)

    def __eq__(self, other):
        if not isinstance(other, AmbientStructure):
            return NotImplemented
        return self._signs == other.signs and self._params == other.params

    def __hash__(self):
        return hash((self._signs, self._params))

    def __repr__(self):
        return "AmbientStructure(%r, %r)" % (list(self._signs), self._params)

    def __str__(self):
        return "<%s: n=%d %s>" % (self.__class__.__name__, self.n, ",".join(self._signs))


def apply_J(structure, v):
    """
    Componentwise multiplication by sigma or sigbar.

    :param AmbientStructure structure: The structure.
    :param v: An ambient vector.
    """
    return structure.apply(v)


def check_metallic_diagonal(entries, params):
    """
    Exact check of x^2 = p x + q on every diagonal entry and of
    sigma * sigbar = -q for every sigma/sigbar pair present.

    :param entries: Ring elements on the diagonal.
    :param MetallicParams params: The ring.
    """
    p, q = params.p, params.q
    entries = tuple(entries)
    for value in entries:
        if not isinstance(value, RingElem) or value.params != params:
            return False
        if value * value != p * value + q:
            return False
    distinct = set(entries)
    for first in distinct:
        for second in distinct:
            # the two roots multiply to -q and add to p
            if first != second and (first * second != -q or first + second != p):
                return False
    return True


def check_metallic(structure):
    """
    Exact structure axioms J^2 = pJ + qI, equivalently
    g(JX, JY) = p g(JX, Y) + q g(X, Y) on every axis pair.

    :param AmbientStructure structure: The structure.
    """
    return check_metallic_diagonal(structure.diagonal, structure.params)


class StructureOperator:
    """
    The operator alpha I + beta J with coefficients in Q[sigma].

    :param RingElem alpha: Coefficient of I.
    :param RingElem beta: Coefficient of J.
    """

    __slots__ = ("_alpha", "_beta")

    def __init__(self, alpha, beta):
        if alpha.params != beta.params:
            raise ValueError("coefficients live in different rings")
        self._alpha = alpha
        self._beta = beta

    @property
    def alpha(self):
        """Coefficient of I."""
        return self._alpha

    @property
    def beta(self):
        """Coefficient of J."""
        return self._beta

    @property
    def params(self):
        """The coefficient ring."""
        return self._alpha.params

    def __add__(self, other):
        return StructureOperator(self._alpha + other.alpha, self._beta + other.beta)

    def __matmul__(self, other):
        # J^2 = pJ + qI
        p, q = self.params.p, self.params.q
        bd = self._beta * other.beta
        return StructureOperator(
            self._alpha * other.alpha + q * bd,
            self._alpha * other.beta + self._beta * other.alpha + p * bd,
        )

    def eigenvalue(self, axis_value):
        """
        The value of the operator on an axis where J acts by ``axis_value``.

        :param RingElem axis_value: sigma or sigbar.
        """
        return self._alpha + self._beta * axis_value

    def apply(self, structure, v):
        """
        Apply the operator to an ambient vector in floating point.

        :param AmbientStructure structure: Supplies J.
        :param v: Ambient vector.
        """
        v = np.asarray(v, dtype=float)
        return self._alpha.to_float() * v + self._beta.to_float() * structure.apply(v)

    def is_identity(self):
        """True for I."""
        return self._alpha == 1 and self._beta == 0

    def is_zero(self):
        """True for the zero operator."""
        return self._alpha == 0 and self._beta == 0

    def __eq__(self, other):
        if not isinstance(other, StructureOperator):
            return NotImplemented
        return self._alpha == other.alpha and self._beta == other.beta

    def __hash__(self):
        return hash((self._alpha, self._beta))

    def __repr__(self):
        return "StructureOperator(%s, %s)" % (self._alpha, self._beta)


def projectors(structure):
    """
    The complementary projectors l and m, as exact operators.

    l = sigma/(2 sigma - p) I - 1/(2 sigma - p) J projects onto the sigbar axes;
    m = (sigma - p)/(2 sigma - p) I + 1/(2 sigma - p) J projects onto the sigma axes.

    :param AmbientStructure structure: The structure; only its ring matters.
    :return: The pair ``(l, m)``.
    """
    params = structure.params
    sigma = params.sigma
    inv = (2 * sigma - params.p).inverse()
    l = StructureOperator(sigma * inv, -inv)
    m = StructureOperator((sigma - params.p) * inv, inv)
    return l, m
