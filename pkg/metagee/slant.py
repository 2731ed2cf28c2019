# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.slant`
================================================================================

Slant angles of tangent vectors and distributions, classification of a
submanifold from its declared distributions, and the slant identities.

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* NumPy for projections and the seeded sampling generator

"""

import hashlib
import logging
import math
import os
from functools import partial

import numpy as np

from . import ANGLE_TOL, LINEAR_SOLVE, SEED_ENV, TOL_LINEAR
from .checks import Identity, worst
from .exprlang import evaluate
from .submanifold import GridSample, project_subspace

logger = logging.getLogger(__name__)

TANGENT_BUNDLE = "TM"
"""Name of the implicit distribution used when a spec declares none."""

RANDOM_COMBINATIONS = 8

CONSTANT = "CONSTANT"
NON_CONSTANT = "NON-CONSTANT"

KIND_INVARIANT = "invariant"
KIND_ANTI_INVARIANT = "anti-invariant"
KIND_SLANT = "slant"
KIND_NON_SLANT = "non-slant"

INVARIANT = "INVARIANT"
ANTI_INVARIANT = "ANTI-INVARIANT"
PROPER_SLANT = "PROPER-SLANT"
SEMI_INVARIANT = "SEMI-INVARIANT"
SEMI_SLANT = "SEMI-SLANT"
HEMI_SLANT = "HEMI-SLANT"
BI_SLANT = "BI-SLANT"
UNCLASSIFIED = "UNCLASSIFIED"

_SINGLE_LABELS = {
    KIND_INVARIANT: INVARIANT,
    KIND_ANTI_INVARIANT: ANTI_INVARIANT,
    KIND_SLANT: PROPER_SLANT,
}

_PAIR_LABELS = {
    frozenset((KIND_INVARIANT,)): INVARIANT,
    frozenset((KIND_ANTI_INVARIANT,)): ANTI_INVARIANT,
    frozenset((KIND_INVARIANT, KIND_ANTI_INVARIANT)): SEMI_INVARIANT,
    frozenset((KIND_INVARIANT, KIND_SLANT)): SEMI_SLANT,
    frozenset((KIND_ANTI_INVARIANT, KIND_SLANT)): HEMI_SLANT,
    frozenset((KIND_SLANT,)): BI_SLANT,
}

# labels under which the whole tangent bundle has one constant angle
WHOLE_SLANT_LABELS = (INVARIANT, ANTI_INVARIANT, PROPER_SLANT)


def sampling_seed(name):
    """
    Seed of the pseudo-random unit combinations for a spec.

    ``METAGEE_SEED`` overrides it; otherwise the first 8 bytes of
    sha256(name), big endian.

    :param str name: Spec name.
    """
    override = os.environ.get(SEED_ENV)
    if override:
        try:
            return int(override)
        except ValueError:
            raise ValueError("%s must be an integer, got %r" % (SEED_ENV, override)) from None
    return int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")


def _angle_and_ratio(frame, decomposition, X, D=None):
    X = np.asarray(X, dtype=float)
    if not np.any(X) or np.linalg.norm(frame.E @ X) == 0.0:
        raise ValueError("slant angle of the zero vector")
    tangential = frame.E @ (decomposition.Tmat @ X)
    v = tangential + decomposition.Nvec @ X
    if D is None:
        along = tangential
    else:
        along = project_subspace(frame, D, v)
    across = np.linalg.norm(v - along)
    along = np.linalg.norm(along)
    norm = np.linalg.norm(v)
    ratio = along / norm if norm else 0.0
    return math.atan2(across, along), ratio


def slant_angle_vector(frame, decomposition, X, D=None):
    """
    Angle between J(E X) and the tangent space, or the subspace E D.

    :param PointFrame frame: The frame.
    :param Decomposition decomposition: T and N at the same point.
    :param X: Nonzero tangent vector in frame coordinates.
    :param D: Optional k by r coefficient basis of a subspace. Defaults to ``None``.
    :return: The angle in radians, in [0, pi/2].
    """
    return _angle_and_ratio(frame, decomposition, X, D)[0]


def distribution_names(spec):
    """Declared distribution names in spec order, or the implicit tangent bundle."""
    return tuple(spec.distributions) or (TANGENT_BUNDLE,)


def distribution_basis(spec, name, u):
    """Coefficient basis of a distribution at ``u``, including the implicit tangent bundle."""
    if name == TANGENT_BUNDLE and name not in spec.distributions:
        return np.eye(spec.k)
    return spec.distribution_at(name, u)


class AngleReport:
    """
    Slant angle samples of one distribution over the grid.

    :param str name: Distribution name.
    :param numpy.ndarray samples: Angles, one row per grid point.
    :param float max_ratio: Largest ``|proj v| / |v|`` seen, before any clamping.
    """

    def __init__(self, name, samples, max_ratio):
        self.name = name
        self.samples = np.asarray(samples, dtype=float)
        self.max_ratio = float(max_ratio)
        self.mean = float(np.mean(self.samples))
        self.max_dev = float(np.max(np.abs(self.samples - self.mean)))

    @property
    def verdict(self):
        """``CONSTANT`` iff every sample is within ``ANGLE_TOL`` of the mean."""
        return CONSTANT if self.max_dev <= ANGLE_TOL else NON_CONSTANT

    @property
    def constant(self):
        """True for a ``CONSTANT`` verdict."""
        return self.verdict == CONSTANT

    @property
    def point_means(self):
        """Mean angle at each grid point."""
        return self.samples.mean(axis=1)

    @property
    def cos2(self):
        """Mean of cos^2 over every sample."""
        return float(np.mean(np.cos(self.samples) ** 2))

    def to_dict(self):
        """JSON-ready summary."""
        return {"dist": self.name, "mean_rad": self.mean, "max_dev": self.max_dev}

    def __str__(self):
        return "<%s: %s %.9f %s>" % (self.__class__.__name__, self.name, self.mean, self.verdict)


def angle_report(spec, name, sample=None, basis=None):
    """
    Sample the slant angle of a distribution over the grid.

    At each point the basis vectors of the distribution are used together
    with ``RANDOM_COMBINATIONS`` unit combinations drawn from a generator
    seeded by :func:`sampling_seed`.

    :param ImmersionSpec spec: The spec.
    :param str name: Distribution name.
    :param GridSample sample: Shared grid cache. Defaults to a fresh one.
    :param basis: Callable mapping a point to a coefficient basis, used instead of
        the declared distribution. Defaults to ``None``.
    """
    if basis is None:
        if name not in spec.distributions and name != TANGENT_BUNDLE:
            raise ValueError("undeclared distribution %r" % name)
        basis = partial(distribution_basis, spec, name)
    sample = sample or GridSample(spec)
    rng = np.random.default_rng(sampling_seed(spec.name))
    rows = []
    max_ratio = 0.0
    for index, u in enumerate(sample.points):
        frame, decomposition = sample.frame(index), sample.decomposition(index)
        D = basis(u)
        combos = rng.standard_normal((D.shape[1], RANDOM_COMBINATIONS))
        combos /= np.linalg.norm(combos, axis=0)
        row = []
        for X in np.hstack([D, D @ combos]).T:
            theta, ratio = _angle_and_ratio(frame, decomposition, X, D)
            row.append(theta)
            max_ratio = max(max_ratio, ratio)
        rows.append(row)
    report = AngleReport(name, rows, max_ratio)
    logger.debug(
        "%s/%s: mean angle %.12f, spread %.3g", spec.name, name, report.mean, report.max_dev
    )
    return report


def cached_angle_report(sample, name, basis=None):
    """:func:`angle_report` memoised on a grid sample."""
    return sample.memo(("angles", name), lambda: angle_report(sample.spec, name, sample, basis))


class DistributionProfile:
    """
    The type of one distribution.

    :param str name: Distribution name.
    :param str kind: invariant, anti-invariant, slant or non-slant.
    :param AngleReport angles: Its angle samples.
    :param float anti_residual: Largest |T X| / |J X| over basis vectors.
    :param float invariance_residual: Largest |J X - proj_D J X| / |J X| over basis vectors.
    """

    # pylint: disable=too-many-arguments
    def __init__(self, name, kind, angles, anti_residual, invariance_residual):
        self.name = name
        self.kind = kind
        self.angles = angles
        self.anti_residual = anti_residual
        self.invariance_residual = invariance_residual

    def __str__(self):
        return "<%s: %s %s>" % (self.__class__.__name__, self.name, self.kind)


def profile_distribution(sample, name, basis=None):
    """
    Decide the type of a distribution.

    Anti-invariant when J maps it into the normal bundle; otherwise its angle
    must be constant. A constant angle within ``ANGLE_TOL`` of pi/2 resolves to
    anti-invariant, and one within ``ANGLE_TOL`` of 0 to invariant provided J
    also maps the basis into the distribution within ``TOL_LINEAR``.

    :param GridSample sample: The sampled spec.
    :param str name: Distribution name.
    :param basis: Callable mapping a point to a coefficient basis.
        Defaults to the declared distribution.
    """
    spec = sample.spec
    if basis is None:
        basis = partial(distribution_basis, spec, name)
    angles = cached_angle_report(sample, name, basis)
    anti = 0.0
    invariance = 0.0
    for index, u in enumerate(sample.points):
        frame, decomposition = sample.frame(index), sample.decomposition(index)
        D = basis(u)
        for X in D.T:
            tangential = frame.E @ (decomposition.Tmat @ X)
            v = tangential + decomposition.Nvec @ X
            norm = np.linalg.norm(v)
            anti = max(anti, np.linalg.norm(tangential) / norm)
            invariance = max(invariance, np.linalg.norm(v - project_subspace(frame, D, v)) / norm)
    if anti <= TOL_LINEAR:
        kind = KIND_ANTI_INVARIANT
    elif not angles.constant:
        kind = KIND_NON_SLANT
    elif angles.mean <= ANGLE_TOL and invariance <= TOL_LINEAR:
        kind = KIND_INVARIANT
    elif math.pi / 2 - angles.mean <= ANGLE_TOL:
        kind = KIND_ANTI_INVARIANT
    else:
        kind = KIND_SLANT
    return DistributionProfile(name, kind, angles, anti, invariance)


class Classification:
    """
    The type of a submanifold.

    :param str label: One of the classification labels.
    :param dict profiles: Distribution name to :class:`DistributionProfile`.
    :param dict residuals: Spanning, orthogonality and J-cross residuals.
    :param diagnostics: Why the label is ``UNCLASSIFIED``, if it is. Defaults to ``()``.
    """

    def __init__(self, label, profiles, residuals, diagnostics=()):
        self.label = label
        self.profiles = profiles
        self.residuals = residuals
        self.diagnostics = tuple(diagnostics)

    @property
    def angles(self):
        """Distribution name to mean slant angle."""
        return {name: profile.angles.mean for name, profile in self.profiles.items()}

    def kind(self, name):
        """Type of a named distribution."""
        return self.profiles[name].kind

    @property
    def whole_slant(self):
        """True when TM itself has one constant slant angle."""
        return self.label in WHOLE_SLANT_LABELS

    @property
    def whole_cos2(self):
        """cos^2 of the slant angle of TM; only meaningful when :attr:`whole_slant`."""
        if self.label == INVARIANT:
            return 1.0
        if self.label == ANTI_INVARIANT:
            return 0.0
        return float(np.mean([p.angles.cos2 for p in self.profiles.values()]))

    def to_dict(self):
        """JSON-ready summary."""
        return {
            "label": self.label,
            "distributions": {name: p.kind for name, p in self.profiles.items()},
            "residuals": dict(self.residuals),
            "diagnostics": list(self.diagnostics),
        }

    def __str__(self):
        return "<%s: %s>" % (self.__class__.__name__, self.label)


def _pair_residuals(sample, first, second):
    spec = sample.spec
    rank = 0.0
    orthogonality = 0.0
    cross = 0.0
    for index, u in enumerate(sample.points):
        frame, decomposition = sample.frame(index), sample.decomposition(index)
        D1 = distribution_basis(spec, first, u)
        D2 = distribution_basis(spec, second, u)
        if D1.shape[1] + D2.shape[1] != spec.k:
            return math.inf, math.inf, math.inf
        A = frame.E @ np.hstack([D1, D2])
        singular = np.linalg.svd(A, compute_uv=False)
        rank = max(rank, 1.0 if singular[-1] <= TOL_LINEAR * singular[0] else 0.0)
        n1 = np.linalg.norm(frame.E @ D1, axis=0)
        n2 = np.linalg.norm(frame.E @ D2, axis=0)
        jn1 = np.linalg.norm(spec.ambient.apply(frame.E @ D1), axis=0)
        inner = D1.T @ frame.G @ D2
        orthogonality = max(orthogonality, worst(inner / np.outer(n1, n2)))
        # g(J E d1, E d2) = d2^T G T d1
        jcross = (D2.T @ frame.G @ decomposition.Tmat @ D1).T
        cross = max(cross, worst(jcross / np.outer(jn1, n2)))
    return rank, orthogonality, cross


def classify(spec, sample=None):
    """
    Classify a submanifold from its declared distributions.

    :param ImmersionSpec spec: The spec; one or two distributions, or none for TM.
    :param GridSample sample: Shared grid cache. Defaults to a fresh one.
    """
    sample = sample or GridSample(spec)
    names = distribution_names(spec)
    profiles = {name: profile_distribution(sample, name) for name in names}
    residuals = {}
    diagnostics = []
    if len(names) == 1:
        label = _SINGLE_LABELS.get(profiles[names[0]].kind, UNCLASSIFIED)
        if names[0] != TANGENT_BUNDLE:
            D = distribution_basis(spec, names[0], sample.points[0])
            if D.shape[1] != spec.k:
                diagnostics.append("a single distribution must span TM")
                label = UNCLASSIFIED
    elif len(names) == 2:
        rank, orthogonality, cross = _pair_residuals(sample, *names)
        residuals = {"rank": rank, "orthogonality": orthogonality, "j-cross": cross}
        kinds = frozenset(p.kind for p in profiles.values())
        label = _PAIR_LABELS.get(kinds, UNCLASSIFIED)
        if rank > 0.0:
            diagnostics.append("distributions do not span TM")
        if orthogonality > TOL_LINEAR:
            diagnostics.append("distributions are not orthogonal (%.3g)" % orthogonality)
            logger.warning("%s: declared distributions are not orthogonal", spec.name)
        if cross > TOL_LINEAR:
            diagnostics.append("J D1 is not orthogonal to D2 (%.3g)" % cross)
        if diagnostics:
            label = UNCLASSIFIED
        elif label == BI_SLANT:
            first, second = (profiles[name].angles.mean for name in names)
            if abs(first - second) <= ANGLE_TOL:
                label = PROPER_SLANT
    else:
        label = UNCLASSIFIED
        diagnostics.append("expected one or two distributions, got %d" % len(names))
    for profile in profiles.values():
        if profile.kind == KIND_NON_SLANT:
            diagnostics.append(
                "%s is not slant (angle spread %.3g)" % (profile.name, profile.angles.max_dev)
            )
    result = Classification(label, profiles, residuals, diagnostics)
    logger.debug("%s classified %s", spec.name, label)
    return result


def cached_classification(sample):
    """:func:`classify` memoised on a grid sample."""
    return sample.memo("classification", lambda: classify(sample.spec, sample))


def _metric_projector(G, D):
    """G-orthogonal projector onto span(D), in frame coordinates."""
    return D @ np.linalg.solve(D.T @ G @ D, D.T @ G)


class _SlantIdentity(Identity):
    numeric_class = LINEAR_SOLVE

    def requirement(self, sample):
        if not _slant_profiles(sample):
            return "no slant distribution"
        return None

    def note(self, sample):
        return ", ".join(
            "%s: theta=%.9f" % (p.name, p.angles.mean) for p in _slant_profiles(sample)
        )


def _slant_profiles(sample):
    classification = cached_classification(sample)
    return [p for p in classification.profiles.values() if p.kind == KIND_SLANT]


class SlantTMetric(_SlantIdentity):
    """g(TX, TY) = cos^2(theta) [p g(X, TY) + q g(X, Y)] on a slant distribution."""

    tag = "slant-T-metric"
    statement = "g(TX,TY) = cos^2(theta)[p g(X,TY) + q g(X,Y)]"

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        p, q = sample.spec.params.p, sample.spec.params.q
        G, T = frame.G, d.Tmat
        value = 0.0
        for profile in _slant_profiles(sample):
            D = distribution_basis(sample.spec, profile.name, sample.points[index])
            TD = T @ D
            diff = TD.T @ G @ TD - profile.angles.cos2 * (p * D.T @ G @ TD + q * D.T @ G @ D)
            value = max(value, worst(diff))
        return value


class SlantNMetric(_SlantIdentity):
    """
    g(NX, NY) = sin^2(theta) [p g(T P X, P Y) + q g(P X, P Y)].

    P is the projection onto the slant distribution. X and Y range over the
    whole coordinate frame when the other factor is invariant (N vanishes on
    it), and over the slant distribution otherwise.
    """

    tag = "slant-N-metric"
    statement = "g(NX,NY) = sin^2(theta)[p g(TPX,PY) + q g(PX,PY)]"

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        p, q = sample.spec.params.p, sample.spec.params.q
        G, T = frame.G, d.Tmat
        classification = cached_classification(sample)
        value = 0.0
        for profile in _slant_profiles(sample):
            D = distribution_basis(sample.spec, profile.name, sample.points[index])
            others = [c.kind for c in classification.profiles.values() if c is not profile]
            if all(kind == KIND_INVARIANT for kind in others):
                X = np.eye(sample.spec.k)
            else:
                X = D
            PX = _metric_projector(G, D) @ X
            NX = d.Nvec @ X
            sin2 = 1.0 - profile.angles.cos2
            diff = NX.T @ NX - sin2 * (p * PX.T @ G @ T @ PX + q * PX.T @ G @ PX)
            value = max(value, worst(diff))
        return value


class SlantTSquare(_SlantIdentity):
    """T^2 = cos^2(theta) (pT + qI) on a slant distribution."""

    tag = "slant-T-square"
    statement = "T^2 X = cos^2(theta)(pTX + qX)"

    def residual(self, sample, index, step):
        frame, d = sample.frame(index), sample.decomposition(index)
        p, q = sample.spec.params.p, sample.spec.params.q
        T = d.Tmat
        value = 0.0
        for profile in _slant_profiles(sample):
            D = distribution_basis(sample.spec, profile.name, sample.points[index])
            diff = T @ T @ D - profile.angles.cos2 * (p * T @ D + q * D)
            value = max(value, worst(frame.E @ diff, axis=0))
        return value


class AngleClosedForm(Identity):
    """Measured cos(theta) of each distribution against the spec's expected closed form."""

    tag = "angle-closed-form"
    statement = "cos(theta) = expected closed form"
    numeric_class = LINEAR_SOLVE

    def requirement(self, sample):
        if not sample.spec.expected_angles:
            return "no expected angles declared"
        return None

    def residual(self, sample, index, step):
        spec = sample.spec
        point = spec.point(sample.points[index])
        value = 0.0
        for name, expr in spec.expected_angles.items():
            expected = abs(evaluate(expr, point, spec.params, spec.constants))
            measured = np.cos(cached_angle_report(sample, name).samples[index])
            value = max(value, float(np.max(np.abs(measured - expected))))
        return value


SLANT_IDENTITIES = (SlantTMetric(), SlantNMetric(), SlantTSquare(), AngleClosedForm())
