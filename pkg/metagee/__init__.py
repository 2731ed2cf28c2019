# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
Shared tolerances and errors for the metagee library.

Author(s): metagee contributors
"""

__version__ = "0.0.0-auto.0"

# Numeric classes. Every checked identity is tagged with one of these.
EXACT = "exact"
ALGEBRAIC = "algebraic"
LINEAR_SOLVE = "linear-solve"
FINITE_DIFFERENCE = "FD"

TOL_ALGEBRAIC = 1e-10
TOL_LINEAR = 1e-9
TOL_FD = 2e-5

FD_STEP = 1e-5
GUARD_GROWTH = 4.0
GUARD_FLOOR = 1e-3  # fraction of the FD tolerance below which growth is noise

ANGLE_TOL = 1e-7
CONSTANT_WARPING_TOL = 1e-8
RANK_TOL = 1e-8
COMPLETION_TOL = 1e-8
NORMAL_FIELD_TOL = 1e-8

DEFAULT_GRID = 5
SEED_ENV = "METAGEE_SEED"


class MetageeError(ValueError):
    """Base class for every error raised by the library."""


class Tolerances:
    """
    The tolerance ladder, one entry per numeric class.

    :param float scale: Multiplier applied to every non-exact tolerance. Defaults to ``1.0``.
    """

    _BASE = {
        EXACT: 0.0,
        ALGEBRAIC: TOL_ALGEBRAIC,
        LINEAR_SOLVE: TOL_LINEAR,
        FINITE_DIFFERENCE: TOL_FD,
    }

    def __init__(self, scale=1.0):
        if not scale > 0:
            raise ValueError("tolerance scale must be positive")
        self._scale = float(scale)

    def __getitem__(self, numeric_class):
        try:
            return self._BASE[numeric_class] * self._scale
        except KeyError:
            raise ValueError("unknown numeric class %r" % (numeric_class,)) from None

    def scaled(self, tolerance):
        """
        Scale a tolerance that does not come from the ladder.

        :param float tolerance: The unscaled tolerance.
        """
        return tolerance * self._scale

    @property
    def scale(self):
        """The multiplier applied to the ladder."""
        return self._scale

    def __repr__(self):
        return "Tolerances(scale=%r)" % self._scale
