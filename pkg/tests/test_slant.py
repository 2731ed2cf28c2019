# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
Slant angles and classification
"""

import math

import numpy as np
import pytest

from metagee import ANGLE_TOL, SEED_ENV
from metagee.quadring import GOLDEN, MetallicParams
from metagee.slant import (
    ANTI_INVARIANT,
    BI_SLANT,
    CONSTANT,
    HEMI_SLANT,
    INVARIANT,
    KIND_ANTI_INVARIANT,
    KIND_INVARIANT,
    KIND_NON_SLANT,
    KIND_SLANT,
    NON_CONSTANT,
    PROPER_SLANT,
    SEMI_INVARIANT,
    SEMI_SLANT,
    SLANT_IDENTITIES,
    TANGENT_BUNDLE,
    UNCLASSIFIED,
    angle_report,
    classify,
    distribution_names,
    sampling_seed,
    slant_angle_vector,
)
from metagee.submanifold import GridSample

PHI = (1 + math.sqrt(5)) / 2

LABELS = {
    "golden_r4_bislant": BI_SLANT,
    "metallic_r4_bislant": BI_SLANT,
    "golden_r5_semiinvariant": SEMI_INVARIANT,
    "metallic_r5_semiinvariant": SEMI_INVARIANT,
    "golden_r4_semislant": SEMI_SLANT,
    "metallic_r4_semislant": SEMI_SLANT,
    "golden_r8_semislant": SEMI_SLANT,
    "metallic_r8_semislant": SEMI_SLANT,
    "golden_r5_hemislant": HEMI_SLANT,
    "metallic_r5_hemislant": HEMI_SLANT,
    "golden_r7_hemislant": HEMI_SLANT,
    "metallic_r7_hemislant": HEMI_SLANT,
    "constructed_counter_semiinvariant": SEMI_INVARIANT,
    "constructed_product_semiinvariant": SEMI_INVARIANT,
    "constructed_invariant_pair": INVARIANT,
    "constructed_antiinvariant_pair": ANTI_INVARIANT,
}


def _bislant_cos(p, q, t):
    return abs(2 * math.sqrt(q) * math.cos(2 * t)) / math.sqrt(p * p * math.sin(2 * t) ** 2 + 4 * q)


def _semislant_cos(p, q):
    return p / math.sqrt(2 * (p * p + 2 * q))


@pytest.mark.parametrize("name, label", sorted(LABELS.items()))
def test_classification(examples, name, label):
    result = classify(examples.spec(name), examples.sample(name))
    assert result.label == label, result.diagnostics
    assert not result.diagnostics
    assert result.residuals["orthogonality"] <= 1e-9
    assert result.residuals["j-cross"] <= 1e-9


def test_distribution_kinds(examples):
    name = "golden_r5_semiinvariant"
    semi = classify(examples.spec(name), examples.sample(name))
    assert semi.kind("D1") == KIND_ANTI_INVARIANT
    assert semi.kind("D2") == KIND_INVARIANT
    name = "metallic_r7_hemislant"
    hemi = classify(examples.spec(name), examples.sample(name))
    assert hemi.kind("D1") == KIND_SLANT
    assert hemi.kind("D2") == KIND_ANTI_INVARIANT


@pytest.mark.parametrize("p, q", [(1, 1), (2, 1), (1, 2), (3, 2)])
@pytest.mark.parametrize("t", [0.3, 0.7, 1.2])
def test_bislant_angles(examples, p, q, t):
    spec = examples.spec("golden_r4_bislant").with_params(MetallicParams(p, q))
    spec = spec.with_constants(t=t).with_grid(2)
    first = angle_report(spec, "D1")
    second = angle_report(spec, "D2")
    assert first.verdict == CONSTANT and second.verdict == CONSTANT
    assert first.mean == pytest.approx(math.acos(_bislant_cos(p, q, t)), abs=1e-9)
    assert second.mean == pytest.approx(math.acos(_semislant_cos(p, q)), abs=1e-9)


def test_golden_bislant_second_angle(examples):
    name = "golden_r4_bislant"
    report = angle_report(examples.spec(name), "D2", examples.sample(name))
    assert report.mean == pytest.approx(math.acos(1 / math.sqrt(6)), abs=1e-9)
    assert report.mean == pytest.approx(1.150261992, abs=1e-9)


def test_bislant_degenerate_values(examples):
    spec = examples.spec("golden_r4_bislant").with_grid(2)
    assert angle_report(spec.with_constants(t=0.0), "D1").mean <= 1e-9
    assert angle_report(spec.with_constants(t=math.pi / 4), "D1").mean == pytest.approx(
        math.pi / 2, abs=1e-9
    )


@pytest.mark.parametrize("params", [GOLDEN, MetallicParams(3, 2)], ids=repr)
def test_equal_angles_are_proper_slant(examples, params):
    p, q = params.p, params.q
    t = math.acos(p / math.sqrt(p * p + 4 * q)) / 2
    spec = examples.spec("golden_r4_bislant").with_params(params).with_constants(t=t).with_grid(2)
    result = classify(spec)
    assert result.label == PROPER_SLANT
    assert result.whole_slant
    assert result.whole_cos2 == pytest.approx(_semislant_cos(p, q) ** 2, abs=1e-9)
    angles = result.angles
    assert angles["D1"] == pytest.approx(angles["D2"], abs=ANGLE_TOL)


def test_tangent_bundle_as_single_distribution(make_spec):
    t = math.acos(1 / math.sqrt(5)) / 2
    c, s = math.cos(t), math.sin(t)
    spec = make_spec(
        ["%r*f1" % c, "sigma*%r*f1" % s, "f2", "f2"],
        ["sigma", "sigbar", "sigma", "sigbar"],
        [("f1", 0.5, 2.0), ("f2", 0.5, 2.0)],
    )
    assert distribution_names(spec) == (TANGENT_BUNDLE,)
    result = classify(spec)
    assert result.label == PROPER_SLANT
    assert result.angles[TANGENT_BUNDLE] == pytest.approx(math.acos(1 / math.sqrt(6)), abs=1e-9)


def test_r7_hemislant_angle(examples):
    result = classify(examples.spec("golden_r7_hemislant"), examples.sample("golden_r7_hemislant"))
    expected = math.acos(1 / math.sqrt((PHI + 4) * (PHI + 5)))
    assert result.angles["D1"] == pytest.approx(expected, abs=1e-9)
    assert result.angles["D1"] == pytest.approx(1.4060523, abs=ANGLE_TOL)
    assert result.angles["D2"] == pytest.approx(math.pi / 2, abs=1e-9)


@pytest.mark.parametrize("name", ["golden_r8_semislant", "metallic_r8_semislant"])
def test_r8_semislant_angle(examples, name):
    spec = examples.spec(name)
    result = classify(spec, examples.sample(name))
    expected = math.acos(_semislant_cos(spec.params.p, spec.params.q))
    assert result.angles["D1"] == pytest.approx(expected, abs=1e-9)
    assert result.angles["D2"] <= 1e-9


def test_non_constant_angle(make_spec):
    spec = make_spec(
        ["u", "v", "u*v", "0"],
        ["sigma", "sigbar", "sigma", "sigbar"],
        [("u", 0.2, 1.0), ("v", 0.2, 1.0)],
    )
    report = angle_report(spec, TANGENT_BUNDLE)
    assert report.verdict == NON_CONSTANT
    assert report.max_dev > 1e-4
    result = classify(spec)
    assert result.label == UNCLASSIFIED
    assert result.kind(TANGENT_BUNDLE) == KIND_NON_SLANT
    assert any("not slant" in note for note in result.diagnostics)


def test_small_angle_off_the_distribution_is_not_invariant(make_spec):
    # J x' leaves the curve's tangent line by sqrt(5)*eps/sigma, under ANGLE_TOL
    spec = make_spec(["x", "x/50000000"], ["sigma", "sigbar"], [("x", 0.0, 1.0)])
    profile = classify(spec).profiles[TANGENT_BUNDLE]
    expected = math.sqrt(5) * 2e-8 / GOLDEN.sigma_float()
    assert profile.angles.mean <= ANGLE_TOL
    assert profile.invariance_residual == pytest.approx(expected, rel=1e-6)
    assert profile.kind == KIND_SLANT


def test_non_orthogonal_distributions(make_spec):
    spec = make_spec(
        ["f*sin(alpha)", "f*cos(alpha)", "f*sin(beta)", "f*cos(beta)"],
        ["sigma", "sigma", "sigbar", "sigbar"],
        [("f", 0.5, 2.0), ("alpha", 0.2, 1.3), ("beta", 0.2, 1.3)],
        distributions={"D1": [["1", "0", "0"]], "D2": [["1", "1", "0"], ["0", "0", "1"]]},
    )
    result = classify(spec)
    assert result.label == UNCLASSIFIED
    assert any("not orthogonal" in note for note in result.diagnostics)


def test_single_distribution_must_span(make_spec):
    spec = make_spec(
        ["f*sin(alpha)", "f*cos(alpha)", "f*sin(beta)", "f*cos(beta)"],
        ["sigma", "sigma", "sigbar", "sigbar"],
        [("f", 0.5, 2.0), ("alpha", 0.2, 1.3), ("beta", 0.2, 1.3)],
        distributions={"D1": [["1", "0", "0"]]},
    )
    result = classify(spec)
    assert result.label == UNCLASSIFIED
    assert "a single distribution must span TM" in result.diagnostics


def test_slant_angle_vector_range(examples):
    sample = examples.sample("golden_r4_bislant")
    frame, parts = sample.frame(0), sample.decomposition(0)
    rng = np.random.default_rng(3)
    for X in rng.standard_normal((20, 2)):
        theta = slant_angle_vector(frame, parts, X)
        assert 0.0 <= theta <= math.pi / 2
    with pytest.raises(ValueError, match="zero vector"):
        slant_angle_vector(frame, parts, np.zeros(2))


def test_undeclared_distribution(examples):
    with pytest.raises(ValueError, match="undeclared"):
        angle_report(examples.spec("golden_r4_bislant"), "D3")


def test_sampling_seed(monkeypatch):
    first = sampling_seed("golden_r4_bislant")
    assert first == sampling_seed("golden_r4_bislant")
    assert first != sampling_seed("metallic_r4_bislant")
    assert 0 <= first < 2**64
    monkeypatch.setenv(SEED_ENV, "42")
    assert sampling_seed("golden_r4_bislant") == 42
    monkeypatch.setenv(SEED_ENV, "forty-two")
    with pytest.raises(ValueError, match=SEED_ENV):
        sampling_seed("golden_r4_bislant")


def test_seed_does_not_move_constant_angles(examples, monkeypatch):
    spec = examples.spec("golden_r5_hemislant").with_grid(2)
    before = angle_report(spec, "D2")
    monkeypatch.setenv(SEED_ENV, "7")
    after = angle_report(spec, "D2")
    assert after.mean == pytest.approx(before.mean, abs=1e-12)


@pytest.mark.parametrize("identity", SLANT_IDENTITIES, ids=lambda i: i.tag)
@pytest.mark.parametrize(
    "name",
    ["metallic_r4_bislant", "golden_r4_semislant", "golden_r5_hemislant", "metallic_r7_hemislant"],
)
def test_slant_identities(examples, identity, name):
    sample = examples.sample(name)
    assert identity.requirement(sample) is None
    result = identity.evaluate(sample)
    assert result.passed, (result.tag, result.residual)


def test_slant_identities_need_a_slant_distribution(examples):
    sample = examples.sample("golden_r5_semiinvariant")
    for identity in SLANT_IDENTITIES[:3]:
        assert identity.requirement(sample) == "no slant distribution"


def test_angle_report_shape(examples):
    spec = examples.spec("golden_r5_hemislant")
    report = angle_report(spec, "D1", GridSample(spec))
    assert report.samples.shape == (25, 1 + 8)
    assert report.point_means.shape == (25,)
    assert report.to_dict()["dist"] == "D1"
