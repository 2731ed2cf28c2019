# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.report`
================================================================================

Spec file ingestion, the builtin fixtures and the full verification run.

* Author(s): metagee contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* Python standard library ``json`` and ``csv`` for spec files, reports and angle tables
* NumPy for the load-time orthogonality check of declared distributions

"""

import csv
import json
import logging
import os

import numpy as np

from . import DEFAULT_GRID, TOL_LINEAR, MetageeError, __version__
from .ambient import AmbientStructure
from .exprlang import FUNCTIONS, RESERVED, ExprError, free_vars, parse
from .quadring import MetallicParams
from .slant import UNCLASSIFIED, cached_angle_report, cached_classification, distribution_names
from .submanifold import DegenerateImmersionError, GridSample, ImmersionSpec, Parameter, frame_at
from .warped import WarpedDecl, catalog, obstruction_report

logger = logging.getLogger(__name__)

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")

BUILTIN_NAMES = (
    "golden_r4_bislant",
    "metallic_r4_bislant",
    "golden_r5_semiinvariant",
    "metallic_r5_semiinvariant",
    "golden_r4_semislant",
    "metallic_r4_semislant",
    "golden_r8_semislant",
    "metallic_r8_semislant",
    "golden_r5_hemislant",
    "metallic_r5_hemislant",
    "golden_r7_hemislant",
    "metallic_r7_hemislant",
)

CONSTRUCTED_NAMES = (
    "constructed_counter_semiinvariant",
    "constructed_product_semiinvariant",
    "constructed_invariant_pair",
    "constructed_antiinvariant_pair",
)


class SpecError(MetageeError):
    """
    A spec file failed to load.

    :param str message: What is wrong.
    :param str path: JSON pointer of the offending value. Defaults to ``""``.
    """

    def __init__(self, message, path=""):
        super().__init__("%s: %s" % (path or "/", message))
        self.path = path


def _expect(value, kind, pointer, what):
    if kind is int and isinstance(value, bool):
        raise SpecError("%s must be an integer" % what, pointer)
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SpecError("%s must be a number" % what, pointer)
        return float(value)
    if not isinstance(value, kind):
        article = "an" if kind is int else "a"
        raise SpecError("%s must be %s %s" % (what, article, kind.__name__), pointer)
    return value


def _field(data, key, pointer, default=KeyError):
    if key in data:
        return data[key], "%s/%s" % (pointer, key)
    if default is KeyError:
        raise SpecError("missing key %r" % key, "%s/%s" % (pointer, key))
    return default, "%s/%s" % (pointer, key)


def _expression(source, pointer, names):
    if not isinstance(source, str):
        raise SpecError("expressions are strings", pointer)
    try:
        expr = parse(source)
    except ExprError as err:
        raise SpecError(str(err), pointer) from None
    unbound = free_vars(expr) - set(names)
    if unbound:
        raise SpecError("unbound name %s" % ", ".join(sorted(unbound)), pointer)
    return expr


def _parameters(data):
    raw, pointer = _field(data, "parameters", "")
    _expect(raw, list, pointer, "parameters")
    if not raw:
        raise SpecError("at least one parameter is required", pointer)
    parameters = []
    for index, entry in enumerate(raw):
        where = "%s/%d" % (pointer, index)
        _expect(entry, dict, where, "a parameter")
        name, name_at = _field(entry, "name", where)
        _expect(name, str, name_at, "a parameter name")
        if name in RESERVED + FUNCTIONS or name in (p.name for p in parameters):
            raise SpecError("parameter name %r is reserved or repeated" % name, name_at)
        bounds, bounds_at = _field(entry, "range", where)
        if not isinstance(bounds, list) or len(bounds) != 2:
            raise SpecError("a range is [lo, hi]", bounds_at)
        lo = _expect(bounds[0], float, bounds_at + "/0", "lo")
        hi = _expect(bounds[1], float, bounds_at + "/1", "hi")
        if not lo < hi:
            raise SpecError("empty range", bounds_at)
        parameters.append(Parameter(name, lo, hi))
    return parameters


def _distributions(data, names, k):
    raw, pointer = _field(data, "distributions", "", {})
    _expect(raw, dict, pointer, "distributions")
    distributions = {}
    for key, vectors in raw.items():
        where = "%s/%s" % (pointer, key)
        _expect(vectors, list, where, "a distribution")
        if not vectors:
            raise SpecError("a distribution needs at least one vector", where)
        rows = []
        for i, vector in enumerate(vectors):
            at = "%s/%d" % (where, i)
            _expect(vector, list, at, "a vector")
            if len(vector) != k:
                raise SpecError("expected %d components, got %d" % (k, len(vector)), at)
            rows.append([_expression(c, "%s/%d" % (at, j), names) for j, c in enumerate(vector)])
        distributions[key] = rows
    return distributions


def _warped(data, parameter_names, constants):
    raw, pointer = _field(data, "warped", "", None)
    if raw is None:
        return None
    _expect(raw, dict, pointer, "warped")
    base, base_at = _field(raw, "base", pointer)
    fiber, fiber_at = _field(raw, "fiber", pointer)
    _expect(base, list, base_at, "base")
    _expect(fiber, list, fiber_at, "fiber")
    warping, warping_at = _field(raw, "warping", pointer)
    expr = _expression(warping, warping_at, list(parameter_names) + list(constants))
    decl = WarpedDecl(base, fiber, expr)
    try:
        decl.validate(parameter_names, constants)
    except ValueError as err:
        raise SpecError(str(err), pointer) from None
    return decl


def _build(data):
    # pylint: disable=too-many-locals
    if not isinstance(data, dict):
        raise SpecError("a spec is a JSON object")
    name, name_at = _field(data, "name", "")
    _expect(name, str, name_at, "name")
    values = []
    for key in ("p", "q"):
        value, at = _field(data, key, "")
        _expect(value, int, at, key)
        if value < 1:
            raise SpecError("%s must be a positive integer" % key, at)
        values.append(value)
    params = MetallicParams(*values)
    signs, signs_at = _field(data, "structure", "")
    _expect(signs, list, signs_at, "structure")
    try:
        ambient = AmbientStructure(signs, params)
    except ValueError as err:
        raise SpecError(str(err), signs_at) from None
    dim, dim_at = _field(data, "ambient_dim", "", ambient.n)
    if dim != ambient.n:
        raise SpecError(
            "ambient_dim %r does not match %d structure entries" % (dim, ambient.n), dim_at
        )
    constants, constants_at = _field(data, "constants", "", {})
    _expect(constants, dict, constants_at, "constants")
    for key, value in constants.items():
        if key in RESERVED + FUNCTIONS:
            raise SpecError("constant name %r is reserved" % key, "%s/%s" % (constants_at, key))
        _expect(value, float, "%s/%s" % (constants_at, key), "a constant")
    parameters = _parameters(data)
    parameter_names = [p.name for p in parameters]
    names = parameter_names + list(constants)
    immersion, immersion_at = _field(data, "immersion", "")
    _expect(immersion, list, immersion_at, "immersion")
    if len(immersion) != ambient.n:
        raise SpecError(
            "expected %d components, got %d" % (ambient.n, len(immersion)), immersion_at
        )
    components = [
        _expression(source, "%s/%d" % (immersion_at, i), names)
        for i, source in enumerate(immersion)
    ]
    distributions = _distributions(data, names, len(parameters))
    grid, grid_at = _field(data, "grid", "", {})
    _expect(grid, dict, grid_at, "grid")
    points, points_at = _field(grid, "points_per_param", grid_at, DEFAULT_GRID)
    _expect(points, int, points_at, "points_per_param")
    if points < 1:
        raise SpecError("points_per_param must be positive", points_at)
    expected, expected_at = _field(data, "expected", "", {})
    _expect(expected, dict, expected_at, "expected")
    angles, angles_at = _field(expected, "angles", expected_at, {})
    _expect(angles, dict, angles_at, "angles")
    expected_angles = {}
    for key, source in angles.items():
        if key not in distributions:
            raise SpecError("undeclared distribution %r" % key, "%s/%s" % (angles_at, key))
        expected_angles[key] = _expression(source, "%s/%s" % (angles_at, key), names)
    return ImmersionSpec(
        name,
        params,
        ambient,
        parameters,
        components,
        distributions,
        warped=_warped(data, parameter_names, constants),
        grid=points,
        constants=constants,
        expected_angles=expected_angles,
    )


def _check_rank(spec):
    for u in spec.grid_points():
        try:
            frame_at(spec, u)
        except DegenerateImmersionError as err:
            raise SpecError(str(err), "/immersion") from None


def _check_orthogonality(spec):
    names = sorted(spec.distributions)
    if len(names) < 2:
        return spec
    u = spec.grid_points()[0]
    frame = frame_at(spec, u)
    worst_cosine = 0.0
    for index, first in enumerate(names):
        for second in names[index + 1 :]:
            A = frame.E @ spec.distribution_at(first, u)
            B = frame.E @ spec.distribution_at(second, u)
            cosines = (A.T @ B) / np.outer(np.linalg.norm(A, axis=0), np.linalg.norm(B, axis=0))
            worst_cosine = max(worst_cosine, float(np.max(np.abs(cosines))))
    if worst_cosine <= TOL_LINEAR:
        return spec
    note = "declared distributions are not orthogonal at the first grid point (%.3g)" % (
        worst_cosine
    )
    logger.warning("%s: %s", spec.name, note)
    return spec.with_diagnostics(note)


def load_spec(source):
    """
    Load and validate a spec.

    :param source: Path to a JSON spec file, or the already decoded JSON object.
    :raises SpecError: with a JSON pointer to the offending value.
    """
    if isinstance(source, dict):
        data = source
    else:
        try:
            with open(source, encoding="utf-8") as spec_file:
                data = json.load(spec_file)
        except OSError as err:
            raise SpecError("cannot read %s: %s" % (source, err.strerror)) from None
        except json.JSONDecodeError as err:
            raise SpecError(
                "invalid JSON at line %d column %d: %s" % (err.lineno, err.colno, err.msg)
            ) from None
    spec = _build(data)
    _check_rank(spec)
    spec = _check_orthogonality(spec)
    logger.debug("loaded %s: k=%d n=%d", spec.name, spec.k, spec.n)
    return spec


def _load_fixture(name):
    return load_spec(os.path.join(FIXTURE_DIR, name + ".json"))


def builtin_examples():
    """The six worked examples, each as a Golden and a metallic variant."""
    return [_load_fixture(name) for name in BUILTIN_NAMES]


def constructed_examples():
    """Fixtures exercising the warped product obstructions."""
    return [_load_fixture(name) for name in CONSTRUCTED_NAMES]


def find_example(name):
    """
    A builtin or constructed fixture by name.

    :param str name: Fixture name, with or without ``.json``.
    """
    name = name[:-5] if name.endswith(".json") else name
    if name not in BUILTIN_NAMES + CONSTRUCTED_NAMES:
        raise ValueError("unknown example %r" % name)
    return _load_fixture(name)


def resolve_spec(argument):
    """A spec from a file path, or from a fixture name when no such file exists."""
    if os.path.exists(argument):
        return load_spec(argument)
    try:
        return find_example(argument)
    except ValueError:
        raise SpecError("no such file or example: %s" % argument) from None


class VerificationReport:
    """
    Everything a full run found about one spec.

    :param ImmersionSpec spec: The spec.
    :param Classification classification: Its classification.
    :param list angles: One :class:`AngleReport` per distribution.
    :param list results: :class:`IdentityResult` objects in catalog order.
    :param list skipped: ``(tag, reason)`` for identities that do not apply.
    :param ObstructionReport obstruction: Warped product verdicts, or ``None``.
    """

    # pylint: disable=too-many-arguments
    def __init__(self, spec, classification, angles, results, skipped, obstruction=None):
        self.spec = spec
        self.classification = classification
        self.angles = angles
        self.results = results
        self.skipped = skipped
        self.obstruction = obstruction
        self.version = __version__

    @property
    def passed(self):
        """PASS iff every applicable identity passed and the spec was classified."""
        return self.classification.label != UNCLASSIFIED and all(r.passed for r in self.results)

    @property
    def overall(self):
        """``"PASS"`` or ``"FAIL"``."""
        return "PASS" if self.passed else "FAIL"

    def result(self, tag):
        """The result with a given tag, or ``None`` when it was skipped."""
        for result in self.results:
            if result.tag == tag:
                return result
        return None

    def to_dict(self):
        """JSON-ready form, in a fixed key order."""
        spec = self.spec
        return {
            "name": spec.name,
            "p": spec.params.p,
            "q": spec.params.q,
            "classification": self.classification.label,
            "angles": [report.to_dict() for report in self.angles],
            "identities": [result.to_dict() for result in self.results],
            "skipped": [{"id": tag, "reason": reason} for tag, reason in self.skipped],
            "warped": self.obstruction.to_dict() if self.obstruction else None,
            "overall": self.overall,
            "version": self.version,
            "grid": {"points_per_param": spec.grid, "points": spec.grid**spec.k},
        }

    def to_json(self):
        """The report as JSON text."""
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self):
        """The report as human readable text."""
        spec = self.spec
        lines = [
            "%s  (p=%d, q=%d, k=%d, n=%d, grid %d^%d)"
            % (spec.name, spec.params.p, spec.params.q, spec.k, spec.n, spec.grid, spec.k),
            "classification: %s" % self.classification.label,
        ]
        lines.extend("  note: %s" % note for note in spec.diagnostics)
        lines.extend("  note: %s" % note for note in self.classification.diagnostics)
        for report in self.angles:
            lines.append(
                "angle %-12s %.12f rad  spread %.3g  %s"
                % (report.name, report.mean, report.max_dev, report.verdict)
            )
        if self.obstruction is not None:
            lines.append(
                "warped product: %s x %s, %s"
                % (self.obstruction.kinds[0], self.obstruction.kinds[1], self.obstruction.verdict)
            )
        for result in self.results:
            lines.append(
                "%-4s %-22s %-12s residual %.3e  tol %.1e"
                % (
                    result.verdict,
                    result.tag,
                    result.numeric_class,
                    result.residual,
                    result.tolerance,
                )
            )
        for tag, reason in self.skipped:
            lines.append("skip %-22s %s" % (tag, reason))
        lines.append("overall: %s" % self.overall)
        return "\n".join(lines)

    def __str__(self):
        return "<%s: %s %s>" % (self.__class__.__name__, self.spec.name, self.overall)


def run_all(spec, tolerances=None, sample=None):
    """
    Classify a spec and evaluate every applicable identity.

    :param ImmersionSpec spec: The spec.
    :param Tolerances tolerances: Defaults to the unscaled ladder.
    :param GridSample sample: Shared grid cache. Defaults to a fresh one.
    """
    sample = sample or GridSample(spec)
    classification = cached_classification(sample)
    angles = [profile.angles for profile in classification.profiles.values()]
    results = []
    skipped = []
    for identity in catalog():
        reason = identity.requirement(sample)
        if reason is not None:
            skipped.append((identity.tag, reason))
            continue
        results.append(identity.evaluate(sample, tolerances))
    obstruction = None
    if spec.warped is not None:
        obstruction = obstruction_report(spec, sample, tolerances)
        results.extend(obstruction.results)
    report = VerificationReport(spec, classification, angles, results, skipped, obstruction)
    logger.info(
        "%s: %s, %d identities, %s",
        spec.name,
        classification.label,
        len(results),
        report.overall,
    )
    return report


def write_angle_csv(spec, stream, sample=None):
    """
    Write the mean slant angle of each distribution at each grid point.

    Columns: point index, parameter values, one angle per distribution.

    :param ImmersionSpec spec: The spec.
    :param stream: A text stream opened with ``newline=""``.
    :param GridSample sample: Shared grid cache. Defaults to a fresh one.
    """
    sample = sample or GridSample(spec)
    names = distribution_names(spec)
    columns = [cached_angle_report(sample, name).point_means for name in names]
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["index"] + list(spec.parameter_names) + list(names))
    for index, u in enumerate(sample.points):
        writer.writerow([index] + [repr(x) for x in u] + [repr(float(c[index])) for c in columns])
