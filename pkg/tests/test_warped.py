# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

import json
import os

import pytest

from metagee import MetageeError
from metagee.checks import NotApplicableError
from metagee.exprlang import parse
from metagee.report import FIXTURE_DIR, load_spec
from metagee.slant import KIND_ANTI_INVARIANT, KIND_INVARIANT, KIND_NON_SLANT, KIND_SLANT
from metagee.warped import (
    WarpedDecl,
    catalog,
    check_identity,
    factor_kinds,
    find_identity,
    obstruction_report,
    theorem_applies,
    verify_warped_metric,
    warping_jet,
)

WARPED_EXAMPLES = (
    "golden_r5_semiinvariant",
    "metallic_r5_semiinvariant",
    "golden_r4_semislant",
    "metallic_r8_semislant",
    "golden_r5_hemislant",
    "metallic_r7_hemislant",
    "constructed_product_semiinvariant",
    "constructed_invariant_pair",
    "constructed_antiinvariant_pair",
)


def _fixture_data(name):
    with open(os.path.join(FIXTURE_DIR, name + ".json"), encoding="utf-8") as spec_file:
        return json.load(spec_file)


@pytest.mark.parametrize(
    "base, fiber, warping, message",
    [
        ([], ["a"], "1", "nonempty"),
        (["f"], ["f", "a"], "f", "share f"),
        (["f"], ["a"], "f", "cover the parameters"),
        (["f"], ["a", "b"], "f*a", "depends on a outside the base"),
    ],
)
def test_warped_declaration_is_validated(base, fiber, warping, message):
    names = sorted(set(base) | set(fiber) | {"b"})
    with pytest.raises(ValueError, match=message):
        WarpedDecl(base, fiber, parse(warping)).validate(names)


def test_warping_may_use_constants():
    decl = WarpedDecl(["f"], ["a"], parse("c*f + sigma"))
    decl.validate(["f", "a"], constants=("c",))
    assert decl.indices(["a", "f"]) == ([1], [0])


def test_warping_jet(examples):
    spec = examples.spec("golden_r5_semiinvariant")
    jet = warping_jet(spec, (1.5, 0.3, 0.4))
    assert jet.value == pytest.approx(1.5)
    assert jet.dlnf == pytest.approx([1 / 1.5, 0.0, 0.0])


def test_warping_must_be_positive():
    data = _fixture_data("golden_r5_semiinvariant")
    data["warped"]["warping"] = "f - 1"
    spec = load_spec(data)
    with pytest.raises(ValueError, match="must be positive"):
        warping_jet(spec, (0.6, 0.5, 0.5))


@pytest.mark.parametrize(
    "name, kinds",
    [
        ("golden_r5_semiinvariant", (KIND_ANTI_INVARIANT, KIND_INVARIANT)),
        ("metallic_r5_semiinvariant", (KIND_ANTI_INVARIANT, KIND_INVARIANT)),
        ("constructed_counter_semiinvariant", (KIND_INVARIANT, KIND_ANTI_INVARIANT)),
        ("constructed_product_semiinvariant", (KIND_INVARIANT, KIND_ANTI_INVARIANT)),
        ("constructed_invariant_pair", (KIND_INVARIANT, KIND_INVARIANT)),
        ("constructed_antiinvariant_pair", (KIND_ANTI_INVARIANT, KIND_ANTI_INVARIANT)),
    ],
)
def test_factor_kinds(examples, name, kinds):
    assert factor_kinds(examples.sample(name)) == kinds


@pytest.mark.parametrize(
    "base, fiber, applies",
    [
        (KIND_INVARIANT, KIND_ANTI_INVARIANT, True),
        (KIND_INVARIANT, KIND_SLANT, True),
        (KIND_ANTI_INVARIANT, KIND_INVARIANT, False),
        (KIND_SLANT, KIND_INVARIANT, False),
        (KIND_INVARIANT, KIND_INVARIANT, False),
        (KIND_ANTI_INVARIANT, KIND_ANTI_INVARIANT, False),
        (KIND_INVARIANT, KIND_NON_SLANT, False),
    ],
)
def test_theorem_applies(base, fiber, applies):
    assert theorem_applies(base, fiber) is applies


@pytest.mark.parametrize("name", WARPED_EXAMPLES)
def test_warped_metric_holds(examples, name):
    result = verify_warped_metric(examples.spec(name), examples.sample(name))
    assert result.passed, result.note
    assert [c.tag for c in result.components] == [
        "warped-metric/blocks",
        "warped-metric/base",
        "warped-metric/fiber",
    ]


def test_counter_example_is_not_a_warped_product(examples):
    name = "constructed_counter_semiinvariant"
    result = verify_warped_metric(examples.spec(name), examples.sample(name))
    assert not result.passed
    failing = [c.tag for c in result.components if not c.passed]
    assert "warped-metric/base" in failing


def test_warped_metric_needs_a_declaration(examples):
    with pytest.raises(NotApplicableError, match="no warped product declared"):
        verify_warped_metric(examples.spec("golden_r4_bislant"))
    with pytest.raises(MetageeError, match="needs a warped product"):
        obstruction_report(examples.spec("golden_r4_bislant"))


def test_proper_warped_product_exists(examples):
    name = "golden_r5_semiinvariant"
    report = obstruction_report(examples.spec(name), examples.sample(name))
    assert not report.applies
    assert report.verdict == "proper warped product exists"
    # d(ln f) = 1/f with f in [0.5, 2]
    assert report.max_log_derivative > 0.5
    assert report.results == []
    assert list(report.to_dict()) == [
        "base",
        "fiber",
        "theorem_applies",
        "max_log_derivative",
        "verdict",
    ]


def test_constant_warping_forced(examples):
    name = "constructed_product_semiinvariant"
    report = obstruction_report(examples.spec(name), examples.sample(name))
    assert report.applies
    assert report.max_log_derivative == 0.0
    assert report.verdict == "constant warping forced"
    assert report.constancy.passed
    assert report.results == [report.constancy]


def test_counter_example_is_a_contradiction(examples, caplog):
    name = "constructed_counter_semiinvariant"
    report = obstruction_report(examples.spec(name), examples.sample(name))
    assert report.applies
    assert report.verdict.startswith("contradiction")
    assert not report.constancy.passed
    assert "contradiction" in caplog.text


def test_invariant_pair_is_proper(examples):
    name = "constructed_invariant_pair"
    report = obstruction_report(examples.spec(name), examples.sample(name))
    assert not report.applies
    assert report.verdict == "proper warped product exists"


def test_log_warp_ratio_on_invariant_pair(examples):
    name = "constructed_invariant_pair"
    result = check_identity(examples.spec(name), "log-warp-inv-inv", examples.sample(name))
    assert result.passed
    assert result.tolerance == pytest.approx(1e-6)


@pytest.mark.parametrize(
    "name, tag",
    [
        ("golden_r5_semiinvariant", "log-warp-anti-inv"),
        ("constructed_antiinvariant_pair", "log-warp-anti-anti"),
        ("constructed_product_semiinvariant", "log-warp-inv-anti"),
        ("golden_r5_hemislant", "hemi-shape"),
        ("metallic_r7_hemislant", "hemi-shape"),
        ("constructed_invariant_pair", "h-invariant-factor"),
        ("golden_r5_semiinvariant", "lc-fiber"),
        ("metallic_r8_semislant", "lc-mixed"),
    ],
)
def test_warped_identities(examples, name, tag):
    result = check_identity(examples.spec(name), tag, examples.sample(name))
    assert result.passed, "%s residual %g" % (tag, result.residual)


@pytest.mark.parametrize(
    "name, tag",
    [
        ("golden_r5_semiinvariant", "log-warp-anti-inv"),
        ("metallic_r5_semiinvariant", "log-warp-anti-inv"),
        ("constructed_antiinvariant_pair", "log-warp-anti-anti"),
        ("constructed_product_semiinvariant", "log-warp-inv-anti"),
        ("constructed_invariant_pair", "log-warp-inv-inv"),
    ],
)
def test_log_warp_identities_ignore_warping_scale(examples, name, tag):
    data = _fixture_data(name)
    data["warped"]["warping"] = "3*(%s)" % data["warped"]["warping"]
    scaled = check_identity(load_spec(data), tag)
    original = check_identity(examples.spec(name), tag, examples.sample(name))
    assert scaled.residual == pytest.approx(original.residual, rel=0, abs=1e-12)
    assert scaled.passed == original.passed


@pytest.mark.parametrize(
    "name, tag, reason",
    [
        ("golden_r5_semiinvariant", "log-warp-inv-inv", "needs base invariant and fiber invariant"),
        ("constructed_invariant_pair", "hemi-shape", "one anti-invariant and one slant"),
        ("golden_r5_semiinvariant", "warping-constancy", "no non-existence theorem"),
        ("golden_r4_bislant", "lc-base", "no warped product declared"),
    ],
)
def test_unmet_factor_requirement(examples, name, tag, reason):
    with pytest.raises(NotApplicableError, match=reason):
        check_identity(examples.spec(name), tag, examples.sample(name))


def test_find_identity():
    assert find_identity("n-quadratic").tag == "n-quadratic"
    assert find_identity("N-quadratic").tag == "N-quadratic"
    assert find_identity("WARPING-CONSTANCY").tag == "warping-constancy"
    assert find_identity("LC-Base").tag == "lc-base"
    with pytest.raises(ValueError, match="ambiguous identity"):
        find_identity("N-QUADRATIC")
    with pytest.raises(ValueError, match="unknown identity"):
        find_identity("no-such-identity")


def test_catalog_tags_are_unique():
    tags = [identity.tag for identity in catalog()]
    assert len(tags) == len(set(tags))
    assert "warping-constancy" not in tags
    assert tags[-1] == "hemi-shape"
