# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.checks`
================================================================================

Identity base class, results and the grid evaluation loop shared by the
decomposition, connection, slant and warped identity families.

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* NumPy for residual norms

"""

import logging

import numpy as np

from . import (
    FD_STEP,
    FINITE_DIFFERENCE,
    GUARD_FLOOR,
    GUARD_GROWTH,
    MetageeError,
    Tolerances,
)

logger = logging.getLogger(__name__)


class NotApplicableError(MetageeError):
    """An identity was requested whose structural requirement is unmet."""


class IdentityResult:
    """
    The outcome of one identity over a sample grid.

    :param str tag: Catalog tag.
    :param str statement: The identity in words.
    :param str numeric_class: exact, algebraic, linear-solve or FD.
    :param float residual: Maximum residual over the grid.
    :param float tolerance: Pass threshold.
    :param str note: Extra detail for the report. Defaults to ``""``.
    :param bool guard_ok: False when the FD residual grew under step halving. Defaults to ``True``.
    :param components: Sub-results for composite checks. Defaults to ``()``.
    """

    # pylint: disable=too-many-arguments
    def __init__(
        self,
        tag,
        statement,
        numeric_class,
        residual,
        tolerance,
        note="",
        guard_ok=True,
        components=(),
    ):
        self.tag = tag
        self.statement = statement
        self.numeric_class = numeric_class
        self.residual = float(residual)
        self.tolerance = float(tolerance)
        self.note = note
        self.guard_ok = guard_ok
        self.components = tuple(components)

    @property
    def passed(self):
        """PASS iff the residual is within tolerance and the FD guard held."""
        return self.residual <= self.tolerance and self.guard_ok

    @property
    def verdict(self):
        """``"PASS"`` or ``"FAIL"``."""
        return "PASS" if self.passed else "FAIL"

    def to_dict(self):
        """JSON-ready form."""
        return {
            "id": self.tag,
            "anchor": self.statement,
            "class": self.numeric_class,
            "residual": self.residual,
            "tol": self.tolerance,
            "pass": self.passed,
        }

    def __str__(self):
        return "<%s: %s %s>" % (self.__class__.__name__, self.tag, self.verdict)


class Identity:
    """
    Base class for checkable identities.

    Subclasses set ``tag``, ``statement`` and ``numeric_class`` and implement
    :meth:`residual`. :meth:`requirement` returns ``None`` when the identity
    applies to a sample, otherwise a description of what is missing.
    """

    tag = None
    statement = ""
    numeric_class = None
    tolerance = None
    """Fixed tolerance overriding the ladder, or ``None``."""

    def requirement(self, sample):
        """
        Describe the unmet structural requirement, or return ``None``.

        :param GridSample sample: The sampled submanifold.
        """
        return None

    def residual(self, sample, index, step):
        """
        The residual at one grid point.

        :param GridSample sample: The sampled submanifold.
        :param int index: Grid point index.
        :param float step: Finite difference step, ignored by non-FD identities.
        """
        raise NotImplementedError()

    def note(self, sample):
        """Extra detail reported with the result."""
        return ""

    def evaluate(self, sample, tolerances=None):
        """Evaluate over every grid point; see :func:`evaluate`."""
        return evaluate(self, sample, tolerances)

    def tolerance_for(self, tolerances):
        """The scaled tolerance of this identity."""
        if self.tolerance is not None:
            return tolerances.scaled(self.tolerance)
        return tolerances[self.numeric_class]

    def __str__(self):
        return "<%s: %s>" % (self.__class__.__name__, self.tag)


def worst(diff, axis=None):
    """
    Largest ambient norm among the columns of ``diff``, or the largest
    absolute entry when ``axis`` is ``None`` and ``diff`` is scalar valued.
    """
    diff = np.asarray(diff, dtype=float)
    if diff.size == 0:
        return 0.0
    if axis is None:
        return float(np.max(np.abs(diff)))
    return float(np.max(np.linalg.norm(diff, axis=axis)))


def evaluate(identity, sample, tolerances=None):
    """
    Evaluate an identity over every grid point of a sample.

    FD identities are evaluated twice, at ``FD_STEP`` and ``FD_STEP / 2``;
    the guard fails when the halved-step residual exceeds ``GUARD_GROWTH``
    times the full-step one and is above the noise floor.

    :param Identity identity: The identity.
    :param GridSample sample: The sampled submanifold.
    :param Tolerances tolerances: Defaults to the unscaled ladder.
    """
    tolerances = tolerances or Tolerances()
    missing = identity.requirement(sample)
    if missing is not None:
        raise NotApplicableError("identity not applicable: %s: %s" % (identity.tag, missing))
    tolerance = identity.tolerance_for(tolerances)
    fd = identity.numeric_class == FINITE_DIFFERENCE
    residual = 0.0
    guard_ok = True
    for index in range(len(sample)):
        value = identity.residual(sample, index, FD_STEP)
        if fd:
            halved = identity.residual(sample, index, FD_STEP / 2)
            if halved > GUARD_GROWTH * value and halved > GUARD_FLOOR * tolerance:
                logger.debug(
                    "%s: residual grew from %.3g to %.3g at point %d",
                    identity.tag,
                    value,
                    halved,
                    index,
                )
                guard_ok = False
        residual = max(residual, value)
    result = IdentityResult(
        identity.tag,
        identity.statement,
        identity.numeric_class,
        residual,
        tolerance,
        note=identity.note(sample),
        guard_ok=guard_ok,
    )
    logger.debug(
        "%s on %s: residual %.3g -> %s", identity.tag, sample.spec.name, residual, result.verdict
    )
    return result
