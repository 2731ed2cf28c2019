# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.geometry`
================================================================================

Levi-Civita connection, second fundamental form, shape operators, the
normal connection and the covariant derivatives of T, N, t and n.

Every field that gets differentiated is ambient valued (tangent and normal
projectors, J applied to coordinate fields) so no derivative ever sees the
arbitrary choice of normal basis.

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* NumPy for Christoffel symbols and the central difference stencils

"""

import logging

import numpy as np

from . import ALGEBRAIC, FD_STEP, FINITE_DIFFERENCE, NORMAL_FIELD_TOL, MetageeError
from .checks import Identity, worst
from .slant import cached_classification
from .submanifold import decompose, frame_at

logger = logging.getLogger(__name__)


class NormalBundleError(MetageeError):
    """A field expected to be normal has a tangential component."""


class ConnectionData:
    """
    Christoffel symbols and second fundamental form at a point.

    :param numpy.ndarray Gamma: k by k by k; ``Gamma[c, a, b]`` is the e_c part of nabla_{e_a} e_b.
    :param numpy.ndarray hten: k by k by (n-k), h(e_a, e_b) in the orthonormal normal basis.
    """

    # pylint: disable=invalid-name
    def __init__(self, Gamma, hten):
        self.Gamma = Gamma
        self.hten = hten


def connection_at(spec, frame):
    """
    Gauss formula in a flat ambient: the Hessian splits into E Gamma plus h.

    :param ImmersionSpec spec: The immersion.
    :param PointFrame frame: The frame.
    """
    k = spec.k
    rhs = np.einsum("ic,abi->cab", frame.E, frame.H).reshape(k, k * k)
    Gamma = np.linalg.solve(frame.G, rhs).reshape(k, k, k)
    hten = frame.H @ frame.Q_nor
    return ConnectionData(Gamma, hten)


def shape_operator(connection, frame, V):
    """
    The shape operator A_V in the coordinate frame: G A_V = sum_alpha V_alpha h_alpha.

    :param ConnectionData connection: Second fundamental form.
    :param PointFrame frame: The frame.
    :param V: Normal vector in ``Q_nor`` coordinates.
    :return: k by k matrix whose column a holds the coordinates of A_V e_a.
    """
    return np.linalg.solve(frame.G, connection.hten @ np.asarray(V, dtype=float))


def ambient_shape(frame, a, W):
    """A_W e_a as ambient vectors, one per column of the normal field values ``W``."""
    return frame.E @ np.linalg.solve(frame.G, frame.H[a] @ W)


def second_form(frame, a, W):
    """h(e_a, W) as ambient vectors for tangent vectors given as ambient columns ``W``."""
    h_amb = frame.H[a] @ frame.P_nor
    return h_amb.T @ frame.coordinates(W)


def _check_normal(frame, value):
    tangential = np.linalg.norm(frame.P_tan @ value)
    if tangential > NORMAL_FIELD_TOL * max(1.0, np.linalg.norm(value)):
        raise NormalBundleError("field leaves normal bundle at u=%s" % (frame.u,))


def _shifted(u, a, offset):
    shifted = list(u)
    shifted[a] += offset
    return tuple(shifted)


def normal_connection(spec, u, V_field, step=FD_STEP):
    """
    nabla-perp of a normal field along each coordinate direction.

    :param ImmersionSpec spec: The immersion.
    :param u: Parameter point.
    :param V_field: Callable mapping a parameter point to an ambient vector, normal everywhere.
    :param float step: Central difference step. Defaults to ``FD_STEP``.
    :return: n by k array, column a is nabla-perp_{e_a} V.
    """
    # pylint: disable=invalid-name
    frame = frame_at(spec, u)
    _check_normal(frame, np.asarray(V_field(frame.u), dtype=float))
    columns = []
    for a in range(spec.k):
        values = []
        for offset in (step, -step):
            point = _shifted(frame.u, a, offset)
            value = np.asarray(V_field(point), dtype=float)
            _check_normal(frame_at(spec, point), value)
            values.append(value)
        columns.append(frame.P_nor @ ((values[0] - values[1]) / (2 * step)))
    return np.array(columns).T.reshape(spec.n, spec.k)


class LocalFields:
    """
    The ambient valued fields differentiated by the covariant derivative checks.

    :param ImmersionSpec spec: Supplies J.
    :param PointFrame frame: The frame.
    :param Decomposition decomposition: T and N at the same point.
    """

    # pylint: disable=invalid-name,too-many-instance-attributes
    def __init__(self, spec, frame, decomposition):
        J = spec.ambient.apply
        self.frame = frame
        self.Tmat = decomposition.Tmat
        self.G = frame.G
        self.P_tan = frame.P_tan
        self.P_nor = frame.P_nor
        JE = J(frame.E)
        self.TE = frame.P_tan @ JE
        self.NE = frame.P_nor @ JE
        # normal fields spanning the normal bundle at every point
        self.V = np.hstack([frame.P_nor, self.NE])
        JV = J(self.V)
        self.tV = frame.P_tan @ JV
        self.nV = frame.P_nor @ JV


class PointGeometry:
    """
    Fields at a point and at its central difference stencil.

    :param ImmersionSpec spec: The immersion.
    :param u: Parameter point.
    :param float step: Stencil step.
    :param PointFrame frame: Frame at ``u`` if already built. Defaults to ``None``.
    :param Decomposition decomposition: Decomposition at ``u`` if built. Defaults to ``None``.
    """

    # pylint: disable=too-many-arguments
    def __init__(self, spec, u, step, frame=None, decomposition=None):
        self.spec = spec
        self.step = step
        frame = frame or frame_at(spec, u)
        decomposition = decomposition or decompose(spec, frame)
        self.frame = frame
        self.connection = connection_at(spec, frame)
        self.fields = LocalFields(spec, frame, decomposition)
        self._stencil = []
        for a in range(spec.k):
            pair = []
            for offset in (step, -step):
                shifted = frame_at(spec, _shifted(frame.u, a, offset))
                pair.append(LocalFields(spec, shifted, decompose(spec, shifted)))
            self._stencil.append(pair)

    def derivative(self, name, a):
        """Central difference of a named field of :class:`LocalFields` along u_a."""
        plus, minus = self._stencil[a]
        return (getattr(plus, name) - getattr(minus, name)) / (2 * self.step)

    def gamma(self, a):
        """Gamma_a, with ``gamma(a)[c, b]`` the e_c component of nabla_{e_a} e_b."""
        return self.connection.Gamma[:, a, :]

    def shape(self, a, W):
        """A_W e_a for normal columns ``W``."""
        return ambient_shape(self.frame, a, W)

    def h(self, a, W):
        """h(e_a, W) for tangent columns ``W``."""
        return second_form(self.frame, a, W)

    def h_coords(self, a):
        """h(e_a, e_b) for every b, as ambient columns."""
        return (self.frame.H[a] @ self.frame.P_nor).T

    def perp(self, name, a):
        """nabla-perp along u_a of normal fields, by the Weingarten formula dV + A_V e_a."""
        fields = getattr(self.fields, name)
        return self.derivative(name, a) + self.shape(a, fields)

    def covder_T(self, a):
        """(nabla_{e_a} T) e_b for every b, via the ambient derivative of T e_b."""
        f = self.fields
        return f.P_tan @ self.derivative("TE", a) - f.TE @ self.gamma(a)

    def covder_N(self, a):
        """(nabla-bar_{e_a} N) e_b for every b."""
        f = self.fields
        return f.P_nor @ self.derivative("NE", a) - f.NE @ self.gamma(a)

    def covder_t(self, a):
        """(nabla_{e_a} t) V for every normal field V of :class:`LocalFields`."""
        f = self.fields
        J = self.spec.ambient.apply
        return f.P_tan @ self.derivative("tV", a) - f.P_tan @ J(f.P_nor @ self.derivative("V", a))

    def covder_n(self, a):
        """(nabla-bar_{e_a} n) V for every normal field V of :class:`LocalFields`."""
        f = self.fields
        J = self.spec.ambient.apply
        return f.P_nor @ self.derivative("nV", a) - f.P_nor @ J(f.P_nor @ self.derivative("V", a))


def point_geometry(sample, index, step):
    """:class:`PointGeometry` at a grid point, memoised on the sample."""

    def build():
        logger.debug("%s: difference stencil at point %d, step %g", sample.spec.name, index, step)
        return PointGeometry(
            sample.spec,
            sample.points[index],
            step,
            frame=sample.frame(index),
            decomposition=sample.decomposition(index),
        )

    return sample.memo(("geometry", index, step), build)


def covder_T(spec, u, a, b, step=FD_STEP):
    """
    (nabla_{e_a} T) e_b and (nabla-bar_{e_a} N) e_b at a point.

    :param ImmersionSpec spec: The immersion.
    :param u: Parameter point at least ``2 * step`` inside every range.
    :param int a: Direction index.
    :param int b: Coordinate field index.
    :param float step: Central difference step. Defaults to ``FD_STEP``.
    :return: ``(tangent vector, normal vector)``.
    """
    for parameter, x in zip(spec.parameters, u):
        if x - parameter.lo < 2 * step or parameter.hi - x < 2 * step:
            raise ValueError("u too close to the boundary of %s" % parameter.name)
    geometry = PointGeometry(spec, u, step)
    return geometry.covder_T(a)[:, b], geometry.covder_N(a)[:, b]


class _FDIdentity(Identity):
    numeric_class = FINITE_DIFFERENCE

    def residual(self, sample, index, step):
        geometry = point_geometry(sample, index, step)
        return max(self.direction_residual(geometry, a) for a in range(sample.spec.k))

    def direction_residual(self, geometry, a):
        """Residual along the coordinate direction u_a."""
        raise NotImplementedError()


class _NormalFDIdentity(_FDIdentity):
    def requirement(self, sample):
        if sample.spec.n == sample.spec.k:
            return "the normal bundle is trivial (n = k)"
        return None


class GaussSplit(Identity):
    """The Hessian splits into E Gamma plus h."""

    tag = "gauss-split"
    statement = "d^2 i(e_a,e_b) = E Gamma_ab + h(e_a,e_b)"
    numeric_class = ALGEBRAIC

    def residual(self, sample, index, step):
        frame = sample.frame(index)
        connection = connection_at(sample.spec, frame)
        tangential = np.einsum("ic,cab->abi", frame.E, connection.Gamma)
        split = tangential + connection.hten @ frame.Q_nor.T
        return worst(split - frame.H, axis=-1)


class MetricCompat(_FDIdentity):
    """d_a G = Gamma_a^T G + G Gamma_a."""

    tag = "metric-compat"
    statement = "d_a g(e_b,e_c) = g(nabla_a e_b,e_c) + g(e_b,nabla_a e_c)"

    def direction_residual(self, geometry, a):
        G, gamma = geometry.fields.G, geometry.gamma(a)
        return worst(geometry.derivative("G", a) - (gamma.T @ G + G @ gamma))


class CovderTDef(_FDIdentity):
    """nabla T by ambient differentiation against the coordinate expression of T."""

    tag = "covder-T-def"
    statement = "(nabla_X T)Y = nabla_X TY - T nabla_X Y"

    def direction_residual(self, geometry, a):
        gamma = geometry.gamma(a)
        T = geometry.fields.Tmat
        coordinate = geometry.frame.E @ (geometry.derivative("Tmat", a) + gamma @ T - T @ gamma)
        return worst(geometry.covder_T(a) - coordinate, axis=0)


class CovderNDef(_FDIdentity):
    """nabla-bar N by normal projection against the Weingarten formula."""

    tag = "covder-N-def"
    statement = "(nabla-bar_X N)Y = nabla-perp_X NY - N nabla_X Y"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        weingarten = geometry.perp("NE", a) - f.NE @ geometry.gamma(a)
        return worst(geometry.covder_N(a) - weingarten, axis=0)


class CovdertDef(_NormalFDIdentity):
    """nabla t by tangent projection against the Gauss and Weingarten formulas."""

    tag = "covder-t-def"
    statement = "(nabla_X t)V = nabla_X tV - t nabla-perp_X V"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        J = geometry.spec.ambient.apply
        route = (
            geometry.derivative("tV", a)
            - geometry.h(a, f.tV)
            - f.P_tan @ J(geometry.perp("V", a))
        )
        return worst(geometry.covder_t(a) - route, axis=0)


class CovdernDef(_NormalFDIdentity):
    """nabla-bar n by normal projection against the Weingarten formula."""

    tag = "covder-n-def"
    statement = "(nabla-bar_X n)V = nabla-perp_X nV - n nabla-perp_X V"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        J = geometry.spec.ambient.apply
        route = geometry.perp("nV", a) - f.P_nor @ J(geometry.perp("V", a))
        return worst(geometry.covder_n(a) - route, axis=0)


class CovderTSymmetric(_FDIdentity):
    """nabla_X T is self-adjoint."""

    tag = "covder-T-symmetric"
    statement = "g((nabla_X T)Y,Z) = g(Y,(nabla_X T)Z)"

    def direction_residual(self, geometry, a):
        pairing = geometry.frame.E.T @ geometry.covder_T(a)
        return worst(pairing - pairing.T)


class CovderT(_FDIdentity):
    tag = "covder-T"
    statement = "(nabla_X T)Y = A_{NY}X + t h(X,Y)"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        J = geometry.spec.ambient.apply
        rhs = geometry.shape(a, f.NE) + f.P_tan @ J(geometry.h_coords(a))
        return worst(geometry.covder_T(a) - rhs, axis=0)


class CovderN(_FDIdentity):
    tag = "covder-N"
    statement = "(nabla-bar_X N)Y = n h(X,Y) - h(X,TY)"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        J = geometry.spec.ambient.apply
        rhs = f.P_nor @ J(geometry.h_coords(a)) - geometry.h(a, f.TE)
        return worst(geometry.covder_N(a) - rhs, axis=0)


class Covdert(_NormalFDIdentity):
    tag = "covder-t"
    statement = "(nabla_X t)V = A_{nV}X - T A_V X"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        J = geometry.spec.ambient.apply
        rhs = geometry.shape(a, f.nV) - f.P_tan @ J(geometry.shape(a, f.V))
        return worst(geometry.covder_t(a) - rhs, axis=0)


class Covdern(_NormalFDIdentity):
    tag = "covder-n"
    statement = "(nabla-bar_X n)V = -h(X,tV) - N A_V X"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        J = geometry.spec.ambient.apply
        rhs = -geometry.h(a, f.tV) - f.P_nor @ J(geometry.shape(a, f.V))
        return worst(geometry.covder_n(a) - rhs, axis=0)


class CovderNtPairing(_NormalFDIdentity):
    tag = "covder-N-t-pairing"
    statement = "g((nabla-bar_X N)Y,V) = g((nabla_X t)V,Y)"

    def direction_residual(self, geometry, a):
        f = geometry.fields
        lhs = geometry.covder_N(a).T @ f.V
        rhs = geometry.frame.E.T @ geometry.covder_t(a)
        return worst(lhs - rhs)


class CovderTSquared(_FDIdentity):
    """On a submanifold with one slant angle, nabla(T^2) = p cos^2(theta) nabla T."""

    tag = "covder-T-squared"
    statement = "nabla(T^2) = p cos^2(theta) nabla T"

    def requirement(self, sample):
        if not cached_classification(sample).whole_slant:
            return "TM is not slant"
        return None

    def residual(self, sample, index, step):
        scale = sample.spec.params.p * cached_classification(sample).whole_cos2
        geometry = point_geometry(sample, index, step)
        f = geometry.fields
        J = sample.spec.ambient.apply
        value = 0.0
        for a in range(sample.spec.k):
            nabla = geometry.covder_T(a)
            squared = nabla @ f.Tmat + f.P_tan @ J(nabla)
            value = max(value, worst(squared - scale * nabla, axis=0))
        return value


CONNECTION_IDENTITIES = (
    GaussSplit(),
    MetricCompat(),
    CovderTDef(),
    CovderNDef(),
    CovdertDef(),
    CovdernDef(),
    CovderTSymmetric(),
    CovderT(),
    CovderN(),
    Covdert(),
    Covdern(),
    CovderNtPairing(),
)
