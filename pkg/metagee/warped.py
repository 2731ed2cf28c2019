# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.warped`
================================================================================

Warped products B x_f F: the block structure of the induced metric, the
connection of a warped product, identities tying the second fundamental
form to the warping function, and the full identity catalog.

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* NumPy

"""

import logging

import numpy as np

from . import (
    CONSTANT_WARPING_TOL,
    FINITE_DIFFERENCE,
    LINEAR_SOLVE,
    MetageeError,
    Tolerances,
)
from .checks import Identity, IdentityResult, NotApplicableError, worst
from .exprlang import eval_jet2, free_vars
from .geometry import (
    CONNECTION_IDENTITIES,
    CovderTSquared,
    ambient_shape,
    connection_at,
    point_geometry,
)
from .slant import (
    KIND_ANTI_INVARIANT,
    KIND_INVARIANT,
    KIND_NON_SLANT,
    KIND_SLANT,
    SLANT_IDENTITIES,
    profile_distribution,
)
from .submanifold import DECOMPOSITION_IDENTITIES, GridSample

logger = logging.getLogger(__name__)

BASE = "base"
FIBER = "fiber"

# |X(ln f)| below which the ratio TX(ln f) / X(ln f) is not formed
RATIO_FLOOR = 1e-3
RATIO_TOL = 1e-6


class WarpedDecl:
    """
    A warped product declaration B x_f F over the immersion's parameters.

    :param base: Parameter names of the base.
    :param fiber: Parameter names of the fiber.
    :param Expr warping: The warping function f, depending on base parameters only.
    """

    def __init__(self, base, fiber, warping):
        self.base = tuple(base)
        self.fiber = tuple(fiber)
        self.warping = warping

    def validate(self, parameter_names, constants=()):
        """
        Check that base and fiber partition the parameters and f lives on the base.

        :param parameter_names: Every parameter name of the immersion.
        :param constants: Names of spec constants, allowed in the warping function.
        """
        if not self.base or not self.fiber:
            raise ValueError("base and fiber must both be nonempty")
        overlap = set(self.base) & set(self.fiber)
        if overlap:
            raise ValueError("base and fiber share %s" % ", ".join(sorted(overlap)))
        if sorted(self.base + self.fiber) != sorted(parameter_names):
            raise ValueError("base and fiber must cover the parameters exactly")
        stray = free_vars(self.warping) - set(self.base) - set(constants)
        if stray:
            raise ValueError(
                "the warping function depends on %s outside the base" % ", ".join(sorted(stray))
            )

    def indices(self, parameter_names):
        """Positions of the base and fiber parameters."""
        names = list(parameter_names)
        return [names.index(n) for n in self.base], [names.index(n) for n in self.fiber]

    def __str__(self):
        return "<%s: %s x_f %s>" % (
            self.__class__.__name__,
            ",".join(self.base),
            ",".join(self.fiber),
        )


class WarpingJet:
    """
    The warping function at a point.

    :param float value: f(u), positive.
    :param numpy.ndarray dlnf: d(ln f) over every parameter; zero on the fiber.
    """

    def __init__(self, value, dlnf):
        self.value = value
        self.dlnf = dlnf


def warping_jet(spec, u):
    """
    f and d(ln f) from the jet of the warping expression.

    :param ImmersionSpec spec: A spec with a warped declaration.
    :param u: Parameter point.
    """
    jet = eval_jet2(spec.warped.warping, spec.point(u), spec.params, spec.constants)
    if not jet.value > 0:
        raise ValueError("the warping function must be positive, got %r at u=%s" % (jet.value, u))
    return WarpingJet(jet.value, jet.grad / jet.value)


def _cached_jet(sample, index):
    return sample.memo(("warping", index), lambda: warping_jet(sample.spec, sample.points[index]))


def _indices(sample):
    return sample.spec.warped.indices(sample.spec.parameter_names)


def factor_profile(sample, which):
    """
    Type of the base or fiber coordinate distribution.

    :param GridSample sample: A sample of a warped spec.
    :param str which: ``"base"`` or ``"fiber"``.
    """
    base, fiber = _indices(sample)
    columns = base if which == BASE else fiber
    k = sample.spec.k

    def basis(_u):
        return np.eye(k)[:, columns]

    return sample.memo(
        ("factor", which),
        lambda: profile_distribution(sample, "%s factor" % which, basis),
    )


def factor_kinds(sample):
    """``(base kind, fiber kind)``."""
    return factor_profile(sample, BASE).kind, factor_profile(sample, FIBER).kind


class _WarpedIdentity(Identity):
    numeric_class = LINEAR_SOLVE

    def requirement(self, sample):
        if sample.spec.warped is None:
            return "no warped product declared"
        return self.factor_requirement(*factor_kinds(sample))

    def factor_requirement(self, base_kind, fiber_kind):
        """Requirement on the factor types, ``None`` when met."""
        return None


class _BothSlantTyped(_WarpedIdentity):
    def factor_requirement(self, base_kind, fiber_kind):
        if KIND_NON_SLANT in (base_kind, fiber_kind):
            return "both factors must be slant-typed, got %s x %s" % (base_kind, fiber_kind)
        return None


def _factor_pair(kinds, expected):
    """A requirement that the (base, fiber) kinds equal ``expected``."""
    if kinds != expected:
        return "needs base %s and fiber %s, got %s x %s" % (expected + kinds)
    return None


class WarpedBlocks(_WarpedIdentity):
    """Base and fiber coordinate fields are orthogonal."""

    tag = "warped-metric/blocks"
    statement = "g(X,Z) = 0"

    def residual(self, sample, index, step):
        G = sample.frame(index).G
        base, fiber = _indices(sample)
        scale = np.sqrt(np.diag(G))
        return worst(G[np.ix_(base, fiber)] / np.outer(scale[base], scale[fiber]))


class WarpedBase(_WarpedIdentity):
    """The base block does not change along the fiber."""

    tag = "warped-metric/base"
    statement = "d_Z g(X,Y) = 0"
    numeric_class = FINITE_DIFFERENCE

    def residual(self, sample, index, step):
        geometry = point_geometry(sample, index, step)
        base, fiber = _indices(sample)
        return max(worst(geometry.derivative("G", z)[np.ix_(base, base)]) for z in fiber)


class WarpedFiber(_WarpedIdentity):
    """The fiber block divided by f^2 does not change along the base."""

    tag = "warped-metric/fiber"
    statement = "d_X (g(Z,W) / f^2) = 0"
    numeric_class = FINITE_DIFFERENCE

    def residual(self, sample, index, step):
        geometry = point_geometry(sample, index, step)
        jet = _cached_jet(sample, index)
        base, fiber = _indices(sample)
        block = np.ix_(fiber, fiber)
        G_F = geometry.fields.G[block]
        value = 0.0
        for x in base:
            dG_F = geometry.derivative("G", x)[block]
            value = max(value, worst((dG_F - 2 * jet.dlnf[x] * G_F) / jet.value**2))
        return value


class WarpedMetric(_WarpedIdentity):
    """
    g = g_B + f^2 g_F, checked as three sub-identities.

    The combined residual and tolerance are those of the component with the
    largest residual to tolerance ratio.
    """

    tag = "warped-metric"
    statement = "g = g_B + f^2 g_F"
    components = (WarpedBlocks(), WarpedBase(), WarpedFiber())

    def evaluate(self, sample, tolerances=None):
        tolerances = tolerances or Tolerances()
        missing = self.requirement(sample)
        if missing is not None:
            raise NotApplicableError("identity not applicable: %s: %s" % (self.tag, missing))
        results = [component.evaluate(sample, tolerances) for component in self.components]
        worst_result = max(
            results, key=lambda r: r.residual / r.tolerance if r.tolerance else np.inf
        )
        return IdentityResult(
            self.tag,
            self.statement,
            worst_result.numeric_class,
            worst_result.residual,
            worst_result.tolerance,
            note="; ".join("%s %.3g" % (r.tag.split("/")[-1], r.residual) for r in results),
            guard_ok=all(r.passed for r in results),
            components=results,
        )


def verify_warped_metric(spec, sample=None, tolerances=None):
    """
    Check that the induced metric is the declared warped product metric.

    :param ImmersionSpec spec: A spec with a warped declaration.
    :param GridSample sample: Shared grid cache. Defaults to a fresh one.
    :param Tolerances tolerances: Defaults to the unscaled ladder.
    """
    if spec.warped is None:
        raise NotApplicableError(
            "identity not applicable: warped-metric: no warped product declared"
        )
    return WARPED_METRIC.evaluate(sample or GridSample(spec), tolerances)


def _gamma(sample, index):
    return sample.memo(
        ("connection", index), lambda: connection_at(sample.spec, sample.frame(index)).Gamma
    )


class LCBase(_WarpedIdentity):
    """The base is totally geodesic."""

    tag = "lc-base"
    statement = "nabla_X Y is tangent to the base"

    def residual(self, sample, index, step):
        E = sample.frame(index).E
        Gamma = _gamma(sample, index)
        base, fiber = _indices(sample)
        value = 0.0
        for x in base:
            for y in base:
                value = max(value, float(np.linalg.norm(E[:, fiber] @ Gamma[fiber, x, y])))
        return value


class LCMixed(_WarpedIdentity):
    tag = "lc-mixed"
    statement = "nabla_X Z = nabla_Z X = X(ln f) Z"

    def residual(self, sample, index, step):
        frame = sample.frame(index)
        Gamma = _gamma(sample, index)
        dlnf = _cached_jet(sample, index).dlnf
        base, fiber = _indices(sample)
        value = 0.0
        for x in base:
            for z in fiber:
                diff = frame.E @ Gamma[:, x, z] - dlnf[x] * frame.E[:, z]
                value = max(value, float(np.linalg.norm(diff)))
        return value


def fiber_christoffel(frame, fiber):
    """
    Christoffel symbols of the fiber block, in fiber coordinates.

    Derivatives of G come from the Hessian, d_c G_ab = <H_ca, E_b> + <E_a, H_cb>.
    """
    dG = np.einsum("cai,ib->cab", frame.H, frame.E)
    dG = dG + dG.transpose(0, 2, 1)
    sub = dG[np.ix_(fiber, fiber, fiber)]
    # first kind: [l; z, w] = (d_z G_lw + d_w G_lz - d_l G_zw) / 2
    first = 0.5 * (sub.transpose(1, 0, 2) + sub.transpose(1, 2, 0) - sub)
    G_F = frame.G[np.ix_(fiber, fiber)]
    m = len(fiber)
    return np.linalg.solve(G_F, first.reshape(m, m * m)).reshape(m, m, m)


class LCFiber(_WarpedIdentity):
    tag = "lc-fiber"
    statement = "nabla_Z W = nabla^F_Z W - g(Z,W) grad(ln f)"

    def residual(self, sample, index, step):
        frame = sample.frame(index)
        Gamma = _gamma(sample, index)
        dlnf = _cached_jet(sample, index).dlnf
        base, fiber = _indices(sample)
        Gamma_F = fiber_christoffel(frame, fiber)
        E_F = frame.E[:, fiber]
        grad = frame.E @ np.linalg.solve(frame.G, dlnf)
        value = 0.0
        for i, z in enumerate(fiber):
            for j, w in enumerate(fiber):
                expected = E_F @ Gamma_F[:, i, j] - frame.G[z, w] * grad
                value = max(value, float(np.linalg.norm(frame.E @ Gamma[:, z, w] - expected)))
        return value


class HBaseFiber(_BothSlantTyped):
    tag = "h-base-fiber"
    statement = "g(h(X,Y),NZ) = -g(h(X,Z),NY)"

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        H, NE = frame.H, d.Nvec
        base, fiber = _indices(sample)
        value = 0.0
        for x in base:
            for y in base:
                for z in fiber:
                    value = max(value, abs(H[x, y] @ NE[:, z] + H[x, z] @ NE[:, y]))
        return value


class HMixedFiber(_BothSlantTyped):
    tag = "h-mixed-fiber"
    statement = "g(h(X,Z),NW) = 0"

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        base, fiber = _indices(sample)
        return worst(
            np.array([[frame.H[x, z] @ d.Nvec[:, w] for z in fiber for w in fiber] for x in base])
        )


class HFiberNormal(_BothSlantTyped):
    tag = "h-fiber-normal"
    statement = "g(h(Z,W),NX) = TX(ln f) g(Z,W) - X(ln f) g(Z,TW)"

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        dlnf = _cached_jet(sample, index).dlnf
        base, fiber = _indices(sample)
        GT = frame.G @ d.Tmat
        value = 0.0
        for x in base:
            t_log = dlnf @ d.Tmat[:, x]
            for z in fiber:
                for w in fiber:
                    lhs = frame.H[z, w] @ d.Nvec[:, x]
                    rhs = t_log * frame.G[z, w] - dlnf[x] * GT[z, w]
                    value = max(value, abs(lhs - rhs))
        return value


class HInvariantFactor(_WarpedIdentity):
    """h(TX, Z) = X(ln f) NZ + n h(X, Z) for X in the invariant factor and Z in the other."""

    tag = "h-invariant-factor"
    statement = "h(TX,Z) = X(ln f)NZ + n h(X,Z)"

    def factor_requirement(self, base_kind, fiber_kind):
        if KIND_INVARIANT not in (base_kind, fiber_kind):
            return "neither factor is invariant"
        if KIND_NON_SLANT in (base_kind, fiber_kind):
            return "both factors must be slant-typed"
        return None

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        dlnf = _cached_jet(sample, index).dlnf
        base, fiber = _indices(sample)
        if factor_profile(sample, BASE).kind == KIND_INVARIANT:
            invariant, other = base, fiber
        else:
            invariant, other = fiber, base
        J = sample.spec.ambient.apply
        P_nor = frame.P_nor
        value = 0.0
        for x in invariant:
            for z in other:
                h_TX = P_nor @ np.einsum("c,ci->i", d.Tmat[:, x], frame.H[:, z])
                rhs = dlnf[x] * d.Nvec[:, z] + P_nor @ J(P_nor @ frame.H[x, z])
                value = max(value, float(np.linalg.norm(h_TX - rhs)))
        return value


class LogWarpInvAnti(_WarpedIdentity):
    tag = "log-warp-inv-anti"
    statement = "TX(ln f) = -(q/p) X(ln f)"

    def factor_requirement(self, base_kind, fiber_kind):
        return _factor_pair((base_kind, fiber_kind), (KIND_INVARIANT, KIND_ANTI_INVARIANT))

    def residual(self, sample, index, step):
        d = sample.decomposition(index)
        dlnf = _cached_jet(sample, index).dlnf
        p, q = sample.spec.params.p, sample.spec.params.q
        base, _ = _indices(sample)
        return max(abs(dlnf @ d.Tmat[:, x] + q / p * dlnf[x]) for x in base)


class LogWarpAntiInv(_WarpedIdentity):
    tag = "log-warp-anti-inv"
    statement = "qX(ln f)Z + (T - pI)A_{NX}Z - t nabla-perp_Z NX = 0"
    numeric_class = FINITE_DIFFERENCE

    def factor_requirement(self, base_kind, fiber_kind):
        return _factor_pair((base_kind, fiber_kind), (KIND_ANTI_INVARIANT, KIND_INVARIANT))

    def residual(self, sample, index, step):
        geometry = point_geometry(sample, index, step)
        f = geometry.fields
        dlnf = _cached_jet(sample, index).dlnf
        p, q = sample.spec.params.p, sample.spec.params.q
        J = sample.spec.ambient.apply
        E = geometry.frame.E
        base, fiber = _indices(sample)
        value = 0.0
        for z in fiber:
            A = ambient_shape(geometry.frame, z, f.NE[:, base])
            perp = f.P_nor @ geometry.derivative("NE", z)[:, base]
            diff = (
                q * np.outer(E[:, z], dlnf[base])
                + f.P_tan @ J(A)
                - p * A
                - f.P_tan @ J(perp)
            )
            value = max(value, worst(diff, axis=0))
        return value


class LogWarpInvInv(_WarpedIdentity):
    """Where X(ln f) is not small, TX(ln f) / X(ln f) is sigma or its conjugate."""

    tag = "log-warp-inv-inv"
    statement = "TX(ln f) = sigma X(ln f) or sigbar X(ln f)"
    tolerance = RATIO_TOL

    def factor_requirement(self, base_kind, fiber_kind):
        return _factor_pair((base_kind, fiber_kind), (KIND_INVARIANT, KIND_INVARIANT))

    def residual(self, sample, index, step):
        d = sample.decomposition(index)
        dlnf = _cached_jet(sample, index).dlnf
        params = sample.spec.params
        roots = (params.sigma.to_float(), params.sigbar.to_float())
        base, _ = _indices(sample)
        value = 0.0
        for x in base:
            if abs(dlnf[x]) > RATIO_FLOOR:
                ratio = (dlnf @ d.Tmat[:, x]) / dlnf[x]
                value = max(value, min(abs(ratio - r) for r in roots))
        return value


class LogWarpAntiAnti(_WarpedIdentity):
    tag = "log-warp-anti-anti"
    statement = "qX(ln f)Z = t nabla-perp_Z NX - p t h(X,Z)"
    numeric_class = FINITE_DIFFERENCE

    def factor_requirement(self, base_kind, fiber_kind):
        return _factor_pair((base_kind, fiber_kind), (KIND_ANTI_INVARIANT, KIND_ANTI_INVARIANT))

    def residual(self, sample, index, step):
        geometry = point_geometry(sample, index, step)
        f = geometry.fields
        dlnf = _cached_jet(sample, index).dlnf
        p, q = sample.spec.params.p, sample.spec.params.q
        J = sample.spec.ambient.apply
        E = geometry.frame.E
        base, fiber = _indices(sample)
        value = 0.0
        for z in fiber:
            perp = f.P_nor @ geometry.derivative("NE", z)[:, base]
            h = f.P_nor @ geometry.frame.H[z][base].T
            diff = q * np.outer(E[:, z], dlnf[base]) - f.P_tan @ J(perp) + p * f.P_tan @ J(h)
            value = max(value, worst(diff, axis=0))
        return value


class HemiShape(_WarpedIdentity):
    """
    X(ln f)TZ - TX(ln f)Z = A_{NZ}X - A_{NX}Z for X in the base and Z in the fiber.

    With an anti-invariant base the TX(ln f) term vanishes.
    """

    tag = "hemi-shape"
    statement = "X(ln f)TZ - TX(ln f)Z = A_{NZ}X - A_{NX}Z"

    def factor_requirement(self, base_kind, fiber_kind):
        if {base_kind, fiber_kind} != {KIND_ANTI_INVARIANT, KIND_SLANT}:
            return "needs one anti-invariant and one slant factor, got %s x %s" % (
                base_kind,
                fiber_kind,
            )
        return None

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        dlnf = _cached_jet(sample, index).dlnf
        E, TE = frame.E, frame.E @ d.Tmat
        base, fiber = _indices(sample)
        value = 0.0
        for x in base:
            t_log = dlnf @ d.Tmat[:, x]
            for z in fiber:
                lhs = dlnf[x] * TE[:, z] - t_log * E[:, z]
                rhs = ambient_shape(frame, x, d.Nvec[:, z]) - ambient_shape(frame, z, d.Nvec[:, x])
                value = max(value, float(np.linalg.norm(lhs - rhs)))
        return value


class WarpingConstancy(_WarpedIdentity):
    """|X(ln f)| vanishes on the base."""

    tag = "warping-constancy"
    statement = "X(ln f) = 0"
    tolerance = CONSTANT_WARPING_TOL

    def factor_requirement(self, base_kind, fiber_kind):
        if not theorem_applies(base_kind, fiber_kind):
            return "no non-existence theorem covers a %s x %s warped product" % (
                base_kind,
                fiber_kind,
            )
        return None

    def residual(self, sample, index, step):
        base, _ = _indices(sample)
        return float(np.max(np.abs(_cached_jet(sample, index).dlnf[base])))


WARPED_METRIC = WarpedMetric()
WARPING_CONSTANCY = WarpingConstancy()

WARPED_IDENTITIES = (
    WARPED_METRIC,
    LCBase(),
    LCMixed(),
    LCFiber(),
    HBaseFiber(),
    HMixedFiber(),
    HFiberNormal(),
    HInvariantFactor(),
    LogWarpInvAnti(),
    LogWarpAntiInv(),
    LogWarpInvInv(),
    LogWarpAntiAnti(),
    HemiShape(),
)

_CATALOG = (
    DECOMPOSITION_IDENTITIES
    + CONNECTION_IDENTITIES
    + (CovderTSquared(),)
    + SLANT_IDENTITIES
    + WARPED_IDENTITIES
)


def catalog():
    """Every identity run by a full verification, in report order."""
    return _CATALOG


def find_identity(tag):
    """
    Look up an identity by tag.

    An exact match wins; otherwise the tag is matched ignoring case, which
    must then be unique since ``N-quadratic`` and ``n-quadratic`` both exist.

    :param str tag: Catalog tag, or ``warping-constancy``.
    """
    identities = _CATALOG + (WARPING_CONSTANCY,)
    for identity in identities:
        if identity.tag == tag:
            return identity
    matches = [identity for identity in identities if identity.tag.lower() == tag.lower()]
    if len(matches) > 1:
        raise ValueError(
            "ambiguous identity %r: %s" % (tag, ", ".join(identity.tag for identity in matches))
        )
    if not matches:
        raise ValueError("unknown identity %r" % tag)
    return matches[0]


def check_identity(spec, tag, sample=None, tolerances=None):
    """
    Evaluate one identity over the grid.

    :param ImmersionSpec spec: The spec.
    :param str tag: Catalog tag, see :func:`find_identity`.
    :param GridSample sample: Shared grid cache. Defaults to a fresh one.
    :param Tolerances tolerances: Defaults to the unscaled ladder.
    :raises NotApplicableError: when the identity's requirement is unmet.
    """
    identity = find_identity(tag)
    return identity.evaluate(sample or GridSample(spec), tolerances)


def theorem_applies(base_kind, fiber_kind):
    """
    True when a non-existence theorem forces constant warping, which is for an
    invariant base with an anti-invariant or slant fiber.
    """
    return base_kind == KIND_INVARIANT and fiber_kind in (KIND_ANTI_INVARIANT, KIND_SLANT)


class ObstructionReport:
    """
    What the non-existence theorems say about a warped declaration.

    :param tuple kinds: ``(base kind, fiber kind)``.
    :param bool applies: Whether a theorem forces f to be constant.
    :param float max_log_derivative: Largest |X(ln f)| over the base and the grid.
    :param IdentityResult constancy: The ``warping-constancy`` result when a theorem applies.
    """

    def __init__(self, kinds, applies, max_log_derivative, constancy=None):
        self.kinds = kinds
        self.applies = applies
        self.max_log_derivative = max_log_derivative
        self.constancy = constancy

    @property
    def verdict(self):
        """Short description of the outcome."""
        constant = self.max_log_derivative <= CONSTANT_WARPING_TOL
        if self.applies:
            if constant:
                return "constant warping forced"
            return "contradiction: non-constant warping where the warped product cannot be proper"
        if constant:
            return "trivial warped product"
        return "proper warped product exists"

    @property
    def results(self):
        """Identity results contributed to a verification report."""
        return [self.constancy] if self.constancy is not None else []

    def to_dict(self):
        """JSON-ready summary."""
        return {
            "base": self.kinds[0],
            "fiber": self.kinds[1],
            "theorem_applies": self.applies,
            "max_log_derivative": self.max_log_derivative,
            "verdict": self.verdict,
        }

    def __str__(self):
        return "<%s: %s>" % (self.__class__.__name__, self.verdict)


def obstruction_report(spec, sample=None, tolerances=None):
    """
    Evaluate X(ln f) over the grid and compare with the non-existence theorems.

    :param ImmersionSpec spec: A spec with a warped declaration.
    :param GridSample sample: Shared grid cache. Defaults to a fresh one.
    :param Tolerances tolerances: Defaults to the unscaled ladder.
    """
    if spec.warped is None:
        raise MetageeError("obstruction report needs a warped product declaration")
    sample = sample or GridSample(spec)
    kinds = factor_kinds(sample)
    base, _ = _indices(sample)
    largest = max(
        float(np.max(np.abs(_cached_jet(sample, i).dlnf[base]))) for i in range(len(sample))
    )
    applies = theorem_applies(*kinds)
    constancy = WARPING_CONSTANCY.evaluate(sample, tolerances) if applies else None
    report = ObstructionReport(kinds, applies, largest, constancy)
    if applies and constancy is not None and not constancy.passed:
        logger.warning("%s: %s", spec.name, report.verdict)
    return report
