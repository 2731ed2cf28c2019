# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.submanifold`
================================================================================

Parametrised submanifolds of the ambient space: per-point frames, the
induced metric, and the split of J into the maps T, N (on tangent vectors)
and t, n (on normal vectors).

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* NumPy for frames, Gram-Schmidt and the linear solves

"""

import itertools
import logging
from collections import namedtuple
from functools import cached_property

import numpy as np

from . import (
    ALGEBRAIC,
    COMPLETION_TOL,
    DEFAULT_GRID,
    LINEAR_SOLVE,
    RANK_TOL,
    MetageeError,
)
from .checks import Identity, worst
from .exprlang import eval_jet2, evaluate

logger = logging.getLogger(__name__)

Parameter = namedtuple("Parameter", ("name", "lo", "hi"))


class DegenerateImmersionError(MetageeError):
    """The Jacobian of the immersion lost rank."""


class ImmersionSpec:
    """
    A parametrised immersion U -> R^n together with its declared distributions.

    :param str name: Spec name.
    :param MetallicParams params: The metallic pair (p, q).
    :param AmbientStructure ambient: The ambient structure, over ``params``.
    :param parameters: Sequence of :class:`Parameter`.
    :param immersion: One expression per ambient coordinate.
    :param dict distributions: Name to a sequence of coefficient vectors (length k) of expressions.
    :param warped: Optional :class:`metagee.warped.WarpedDecl`. Defaults to ``None``.
    :param int grid: Points per parameter. Defaults to ``5``.
    :param dict constants: Named numeric constants. Defaults to ``None``.
    :param dict expected_angles: Distribution name to a cosine expression. Defaults to ``None``.
    :param diagnostics: Load-time warnings. Defaults to ``()``.
    """

    # pylint: disable=too-many-arguments,too-many-instance-attributes
    def __init__(
        self,
        name,
        params,
        ambient,
        parameters,
        immersion,
        distributions,
        warped=None,
        grid=DEFAULT_GRID,
        constants=None,
        expected_angles=None,
        diagnostics=(),
    ):
        self.name = name
        self.params = params
        self.ambient = ambient
        self.parameters = tuple(Parameter(p.name, float(p.lo), float(p.hi)) for p in parameters)
        self.immersion = tuple(immersion)
        self.distributions = {
            key: tuple(tuple(v) for v in vectors) for key, vectors in distributions.items()
        }
        self.warped = warped
        self.grid = grid
        self.constants = dict(constants or {})
        self.expected_angles = dict(expected_angles or {})
        self.diagnostics = tuple(diagnostics)
        if ambient.params != params:
            raise ValueError("ambient structure and spec use different (p, q)")
        if len(self.immersion) != ambient.n:
            raise ValueError(
                "expected %d components, got %d" % (ambient.n, len(self.immersion))
            )
        if isinstance(grid, bool) or not isinstance(grid, int) or grid < 1:
            raise ValueError("grid must be a positive integer")
        for key, vectors in self.distributions.items():
            for vector in vectors:
                if len(vector) != self.k:
                    raise ValueError(
                        "distribution %s: vectors need %d coefficients, got %d"
                        % (key, self.k, len(vector))
                    )

    @property
    def k(self):
        """Dimension of the submanifold."""
        return len(self.parameters)

    @property
    def n(self):
        """Ambient dimension."""
        return self.ambient.n

    @property
    def parameter_names(self):
        """Parameter names in coordinate order."""
        return tuple(p.name for p in self.parameters)

    def _replace(self, **changes):
        fields = dict(
            name=self.name,
            params=self.params,
            ambient=self.ambient,
            parameters=self.parameters,
            immersion=self.immersion,
            distributions=self.distributions,
            warped=self.warped,
            grid=self.grid,
            constants=self.constants,
            expected_angles=self.expected_angles,
            diagnostics=self.diagnostics,
        )
        fields.update(changes)
        return ImmersionSpec(**fields)

    def with_params(self, params):
        """
        The same immersion over another metallic pair.

        :param MetallicParams params: The new (p, q).
        """
        return self._replace(params=params, ambient=self.ambient.with_params(params))

    def with_constants(self, **values):
        """The same spec with some named constants replaced."""
        constants = dict(self.constants)
        constants.update(values)
        return self._replace(constants=constants)

    def with_grid(self, points_per_param):
        """The same spec sampled on a different grid."""
        return self._replace(grid=points_per_param)

    def with_diagnostics(self, *notes):
        """The same spec with load-time warnings appended."""
        return self._replace(diagnostics=self.diagnostics + notes)

    def grid_axis(self, parameter):
        """Interior sample values (i + 1/2)/N of a parameter's range."""
        count = self.grid
        return tuple(
            parameter.lo + (i + 0.5) / count * (parameter.hi - parameter.lo) for i in range(count)
        )

    def grid_points(self):
        """Every grid point, last parameter varying fastest."""
        return [tuple(u) for u in itertools.product(*(self.grid_axis(p) for p in self.parameters))]

    def point(self, u):
        """Name to value mapping for a parameter point."""
        return dict(zip(self.parameter_names, u))

    def distribution_at(self, name, u):
        """
        Coefficient basis of a declared distribution at a point, as a k by r matrix.

        :param str name: Distribution name.
        :param u: Parameter point.
        """
        try:
            vectors = self.distributions[name]
        except KeyError:
            raise ValueError("undeclared distribution %r" % name) from None
        point = self.point(u)
        columns = [
            [evaluate(c, point, self.params, self.constants) for c in vector] for vector in vectors
        ]
        return np.array(columns, dtype=float).T.reshape(self.k, len(vectors))

    def __str__(self):
        return "<%s: %s>" % (self.__class__.__name__, self.name)


class PointFrame:
    """
    Geometric state of the immersion at one parameter point.

    :param tuple u: The point.
    :param numpy.ndarray E: n by k Jacobian; column a is the coordinate field e_a.
    :param numpy.ndarray H: k by k by n Hessian of the immersion.
    :param numpy.ndarray Q_tan: n by k orthonormal tangent basis.
    :param numpy.ndarray Q_nor: n by (n-k) orthonormal normal basis.
    """

    # pylint: disable=invalid-name
    def __init__(self, u, E, H, Q_tan, Q_nor):
        self.u = u
        self.E = E
        self.H = H
        self.Q_tan = Q_tan
        self.Q_nor = Q_nor
        self.G = E.T @ E

    @cached_property
    def G_inv(self):
        """Inverse of the induced metric."""
        return np.linalg.inv(self.G)

    @cached_property
    def P_tan(self):
        """Orthogonal projector onto the tangent space."""
        return self.Q_tan @ self.Q_tan.T

    @cached_property
    def P_nor(self):
        """Orthogonal projector onto the normal space."""
        return np.eye(self.E.shape[0]) - self.P_tan

    def coordinates(self, w):
        """Coordinates in the frame e_a of tangent vectors (columns of ``w``)."""
        return np.linalg.solve(self.G, self.E.T @ w)


class Decomposition:
    """
    T, N, t and n at a point.

    :param numpy.ndarray Tmat: k by k, T in the coordinate frame.
    :param numpy.ndarray Nvec: n by k, column a is N e_a.
    :param numpy.ndarray tmat: k by (n-k); column alpha is t(Q_nor[:, alpha]) in frame coordinates.
    :param numpy.ndarray nmat: (n-k) by (n-k), n on the orthonormal normal basis.
    """

    # pylint: disable=invalid-name
    def __init__(self, Tmat, Nvec, tmat, nmat):
        self.Tmat = Tmat
        self.Nvec = Nvec
        self.tmat = tmat
        self.nmat = nmat


def _orthonormalize(candidates, basis, threshold):
    """Modified Gram-Schmidt with one reorthogonalisation pass. Returns the accepted vectors."""
    accepted = []
    for vector in candidates:
        w = np.array(vector, dtype=float)
        for _ in range(2):
            for q in basis + accepted:
                w -= (q @ w) * q
        norm = np.linalg.norm(w)
        if norm <= threshold:
            continue
        accepted.append(w / norm)
    return accepted


def frame_at(spec, u):
    """
    Build the frame of an immersion at a parameter point.

    :param ImmersionSpec spec: The immersion.
    :param u: Parameter point inside the declared ranges.
    """
    u = tuple(float(x) for x in u)
    if len(u) != spec.k:
        raise ValueError("expected %d parameters, got %d" % (spec.k, len(u)))
    for parameter, x in zip(spec.parameters, u):
        if not parameter.lo <= x <= parameter.hi:
            raise ValueError(
                "%s=%r outside [%r, %r]" % (parameter.name, x, parameter.lo, parameter.hi)
            )
    point = spec.point(u)
    jets = [eval_jet2(e, point, spec.params, spec.constants) for e in spec.immersion]
    E = np.array([jet.grad for jet in jets]).reshape(spec.n, spec.k)
    H = np.stack([jet.hess for jet in jets], axis=-1)
    singular = np.linalg.svd(E, compute_uv=False)
    if singular[-1] <= RANK_TOL:
        raise DegenerateImmersionError("degenerate immersion at u=%s" % (u,))
    tangent = _orthonormalize(E.T, [], 0.0)
    axes = np.eye(spec.n)
    normal = _orthonormalize(axes, tangent, COMPLETION_TOL)[: spec.n - spec.k]
    if len(normal) != spec.n - spec.k:
        raise DegenerateImmersionError("normal completion failed at u=%s" % (u,))
    Q_tan = np.array(tangent).T
    Q_nor = np.array(normal).T.reshape(spec.n, spec.n - spec.k)
    return PointFrame(u, E, H, Q_tan, Q_nor)


def decompose(spec, frame):
    """
    Split J on tangent and normal vectors: JX = TX + NX, JV = tV + nV.

    :param ImmersionSpec spec: Supplies J.
    :param PointFrame frame: The frame.
    """
    E, G = frame.E, frame.G
    JE = spec.ambient.apply(E)
    Tmat = np.linalg.solve(G, E.T @ JE)
    Nvec = JE - E @ Tmat
    JQ = spec.ambient.apply(frame.Q_nor)
    if JQ.shape[1]:
        tmat = np.linalg.solve(G, E.T @ JQ)
    else:
        tmat = np.zeros((spec.k, 0))
    nmat = frame.Q_nor.T @ JQ
    return Decomposition(Tmat, Nvec, tmat, nmat)


def project_subspace(frame, D, v):
    """
    Orthogonal projection of an ambient vector onto span(E D).

    :param PointFrame frame: The frame.
    :param D: k by r coefficient basis of the subspace.
    :param v: Ambient vector, or matrix of ambient column vectors.
    """
    A = frame.E @ np.asarray(D, dtype=float).reshape(frame.E.shape[1], -1)
    singular = np.linalg.svd(A, compute_uv=False)
    if A.shape[1] == 0 or singular[-1] <= RANK_TOL * max(1.0, singular[0]):
        raise ValueError("degenerate subspace basis")
    Q, _ = np.linalg.qr(A)
    v = np.asarray(v, dtype=float)
    return Q @ (Q.T @ v)


class GridSample:
    """
    Frames and decompositions of a spec over its grid, computed once.

    Downstream modules cache their own per-point data in :attr:`cache`.

    :param ImmersionSpec spec: The spec.
    """

    def __init__(self, spec):
        self.spec = spec
        self.points = spec.grid_points()
        self.cache = {}
        self._frames = {}
        self._decompositions = {}
        logger.debug("%s: %d grid points", spec.name, len(self.points))

    def __len__(self):
        return len(self.points)

    def frame(self, index):
        """Frame at a grid point."""
        if index not in self._frames:
            self._frames[index] = frame_at(self.spec, self.points[index])
        return self._frames[index]

    def decomposition(self, index):
        """Decomposition at a grid point."""
        if index not in self._decompositions:
            self._decompositions[index] = decompose(self.spec, self.frame(index))
        return self._decompositions[index]

    def memo(self, key, factory):
        """Return ``cache[key]``, filling it from ``factory()`` on first use."""
        if key not in self.cache:
            self.cache[key] = factory()
        return self.cache[key]


class _NormalBundleIdentity(Identity):
    """Identities that involve t or n need a nontrivial normal bundle."""

    def requirement(self, sample):
        if sample.spec.n == sample.spec.k:
            return "the normal bundle is trivial (n = k)"
        return None


class JSplit(Identity):
    """JX = TX + NX and JV = tV + nV, with NX and nV normal."""

    tag = "J-split"
    statement = "JX = TX + NX, JV = tV + nV"
    numeric_class = ALGEBRAIC

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        spec = sample.spec
        JE = spec.ambient.apply(frame.E)
        JQ = spec.ambient.apply(frame.Q_nor)
        return max(
            worst(JE - frame.E @ d.Tmat - d.Nvec, axis=0),
            worst(frame.E.T @ d.Nvec),
            worst(JQ - frame.E @ d.tmat - frame.Q_nor @ d.nmat, axis=0),
        )


class TSelfAdjoint(Identity):
    """g(TX, Y) = g(X, TY): G T is symmetric."""

    tag = "T-self-adjoint"
    statement = "g(TX,Y) = g(X,TY)"
    numeric_class = ALGEBRAIC

    def residual(self, sample, index, step):
        GT = sample.frame(index).G @ sample.decomposition(index).Tmat
        return worst(GT - GT.T)


class NormalSelfAdjoint(_NormalBundleIdentity):
    """n is symmetric on the orthonormal normal basis."""

    tag = "n-self-adjoint"
    statement = "g(nU,V) = g(U,nV)"
    numeric_class = ALGEBRAIC

    def residual(self, sample, index, step):
        nmat = sample.decomposition(index).nmat
        return worst(nmat - nmat.T)


class NtAdjoint(_NormalBundleIdentity):
    """g(NX, V) = g(X, tV)."""

    tag = "N-t-adjoint"
    statement = "g(NX,V) = g(X,tV)"
    numeric_class = ALGEBRAIC

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        return worst(d.Nvec.T @ frame.Q_nor - frame.G @ d.tmat)


class TQuadratic(Identity):
    """T^2 = pT + qI - tN."""

    tag = "T-quadratic"
    statement = "T^2 X = pTX + qX - tNX"
    numeric_class = LINEAR_SOLVE

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        p, q = sample.spec.params.p, sample.spec.params.q
        T = d.Tmat
        tN = d.tmat @ (frame.Q_nor.T @ d.Nvec)
        return worst(T @ T - p * T - q * np.eye(T.shape[0]) + tN)


class NQuadratic(Identity):
    """pN = NT + nN."""

    tag = "N-quadratic"
    statement = "pNX = NTX + nNX"
    numeric_class = LINEAR_SOLVE

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        p = sample.spec.params.p
        nN = frame.Q_nor @ d.nmat @ (frame.Q_nor.T @ d.Nvec)
        return worst(p * d.Nvec - d.Nvec @ d.Tmat - nN, axis=0)


class SmallNQuadratic(_NormalBundleIdentity):
    """n^2 = pn + qI - Nt."""

    tag = "n-quadratic"
    statement = "n^2 V = pnV + qV - NtV"
    numeric_class = LINEAR_SOLVE

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        p, q = sample.spec.params.p, sample.spec.params.q
        n = d.nmat
        Nt = frame.Q_nor.T @ d.Nvec @ d.tmat
        return worst(n @ n - p * n - q * np.eye(n.shape[0]) + Nt)


class SmallTQuadratic(_NormalBundleIdentity):
    """pt = Tt + tn."""

    tag = "t-quadratic"
    statement = "ptV = TtV + tnV"
    numeric_class = LINEAR_SOLVE

    def residual(self, sample, index, step):
        d = sample.decomposition(index)
        p = sample.spec.params.p
        return worst(p * d.tmat - d.Tmat @ d.tmat - d.tmat @ d.nmat)


DECOMPOSITION_IDENTITIES = (
    JSplit(),
    TSelfAdjoint(),
    NormalSelfAdjoint(),
    NtAdjoint(),
    TQuadratic(),
    NQuadratic(),
    SmallNQuadratic(),
    SmallTQuadratic(),
)
