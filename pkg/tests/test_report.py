# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

import copy
import io
import json
import logging
import os

import pytest

from metagee.report import (
    BUILTIN_NAMES,
    CONSTRUCTED_NAMES,
    FIXTURE_DIR,
    SpecError,
    builtin_examples,
    constructed_examples,
    find_example,
    load_spec,
    resolve_spec,
    run_all,
    write_angle_csv,
)
from metagee.slant import HEMI_SLANT, SEMI_INVARIANT, SEMI_SLANT

with open(
    os.path.join(FIXTURE_DIR, "constructed_product_semiinvariant.json"), encoding="utf-8"
) as _spec_file:
    PRODUCT = json.load(_spec_file)


def _edited(**changes):
    data = copy.deepcopy(PRODUCT)
    data.update(changes)
    return data


def test_load_spec_from_dict():
    spec = load_spec(PRODUCT)
    assert spec.name == "constructed_product_semiinvariant"
    assert (spec.k, spec.n, spec.grid) == (3, 4, 3)
    assert spec.parameter_names == ("x", "y", "s")
    assert spec.warped.base == ("x", "y")


@pytest.mark.parametrize(
    "changes, path, message",
    [
        ({"immersion": ["x", "y", "s"]}, "/immersion", "expected 4 components, got 3"),
        ({"immersion": ["x*y", "x*y", "s", "s"]}, "/immersion", "degenerate immersion"),
        ({"immersion": ["x", "y", "s", "z"]}, "/immersion/3", "unbound name z"),
        ({"immersion": ["x", "y", "s", "s +"]}, "/immersion/3", "expected"),
        ({"p": 0}, "/p", "positive integer"),
        ({"q": 1.5}, "/q", "must be an int"),
        (
            {"structure": ["sigma", "sigma", "tau", "sigbar"]},
            "/structure",
            "axis 2: only diagonal sigma/sigbar structures are supported, got .tau.",
        ),
        ({"ambient_dim": 5}, "/ambient_dim", "does not match"),
        ({"constants": {"sigma": 1.0}}, "/constants/sigma", "reserved"),
        (
            {"parameters": [{"name": "p", "range": [0.0, 1.0]}]},
            "/parameters/0/name",
            "reserved or repeated",
        ),
        (
            {"parameters": [{"name": "x", "range": [1.0, 1.0]}]},
            "/parameters/0/range",
            "empty range",
        ),
        ({"distributions": {"DT": [["1", "0"]]}}, "/distributions/DT/0", "expected 3 components"),
        ({"grid": {"points_per_param": 0}}, "/grid/points_per_param", "must be positive"),
        ({"expected": {"angles": {"D9": "1"}}}, "/expected/angles/D9", "undeclared"),
        (
            {"warped": {"base": ["x"], "fiber": ["s"], "warping": "1"}},
            "/warped",
            "cover the parameters",
        ),
    ],
)
def test_load_spec_errors(changes, path, message):
    with pytest.raises(SpecError, match=message) as info:
        load_spec(_edited(**changes))
    assert info.value.path == path


def test_missing_key_is_reported():
    data = copy.deepcopy(PRODUCT)
    del data["name"]
    with pytest.raises(SpecError, match="missing key 'name'") as info:
        load_spec(data)
    assert info.value.path == "/name"


def test_orthogonal_distributions_load_cleanly(caplog):
    with caplog.at_level(logging.WARNING, logger="metagee.report"):
        spec = load_spec(PRODUCT)
    assert spec.diagnostics == ()
    assert "not orthogonal" not in caplog.text


def test_non_orthogonal_distributions_are_noted(caplog):
    data = _edited(
        distributions={"DT": [["1", "0", "0"], ["0", "1", "0"]], "DP": [["1", "0", "1"]]}
    )
    with caplog.at_level(logging.WARNING, logger="metagee.report"):
        spec = load_spec(data)
    assert len(spec.diagnostics) == 1
    assert "not orthogonal" in spec.diagnostics[0]
    assert "not orthogonal" in caplog.text
    assert spec.diagnostics[0] in run_all(spec).to_text()


def test_spec_file_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"name": "broken",\n  "p": }', encoding="utf-8")
    with pytest.raises(SpecError, match="invalid JSON at line 2"):
        load_spec(str(broken))
    with pytest.raises(SpecError, match="cannot read"):
        load_spec(str(tmp_path / "absent.json"))


def test_examples_are_listed():
    assert len(BUILTIN_NAMES) == 12
    assert [spec.name for spec in builtin_examples()] == list(BUILTIN_NAMES)
    assert [spec.name for spec in constructed_examples()] == list(CONSTRUCTED_NAMES)


def test_find_and_resolve(tmp_path):
    assert find_example("golden_r4_bislant.json").name == "golden_r4_bislant"
    with pytest.raises(ValueError, match="unknown example"):
        find_example("golden_r9")
    path = tmp_path / "product.json"
    path.write_text(json.dumps(_edited(name="from_file")), encoding="utf-8")
    assert resolve_spec(str(path)).name == "from_file"
    assert resolve_spec("metallic_r5_hemislant").params.p == 3
    with pytest.raises(SpecError, match="no such file or example"):
        resolve_spec(str(tmp_path / "missing.json"))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_examples_pass(examples, name):
    report = examples.report(name)
    failed = [r.tag for r in report.results if not r.passed]
    assert report.overall == "PASS", failed


@pytest.mark.parametrize(
    "name, label",
    [
        ("constructed_product_semiinvariant", SEMI_INVARIANT),
        ("constructed_invariant_pair", "INVARIANT"),
        ("constructed_antiinvariant_pair", "ANTI-INVARIANT"),
        ("golden_r4_semislant", SEMI_SLANT),
        ("golden_r7_hemislant", HEMI_SLANT),
    ],
)
def test_classification_in_report(examples, name, label):
    assert examples.report(name).classification.label == label


def test_counter_example_never_passes(examples):
    report = examples.report("constructed_counter_semiinvariant")
    assert report.overall == "FAIL"
    assert report.obstruction.verdict.startswith("contradiction")
    assert not report.result("warped-metric").passed
    assert not report.result("warping-constancy").passed


def test_witnessed_warping(examples):
    report = examples.report("golden_r5_semiinvariant")
    assert report.overall == "PASS"
    assert report.obstruction.verdict == "proper warped product exists"
    assert report.result("warping-constancy") is None


def test_skipped_identities_carry_reasons(examples):
    report = examples.report("golden_r4_bislant")
    skipped = dict(report.skipped)
    assert skipped["warped-metric"] == "no warped product declared"
    assert report.obstruction is None
    assert report.result("warped-metric") is None


def test_json_report(examples):
    name = "metallic_r4_bislant"
    text = examples.report(name).to_json()
    again = run_all(find_example(name)).to_json()
    assert text == again
    data = json.loads(text)
    assert list(data) == [
        "name",
        "p",
        "q",
        "classification",
        "angles",
        "identities",
        "skipped",
        "warped",
        "overall",
        "version",
        "grid",
    ]
    assert data["grid"] == {"points_per_param": 5, "points": 25}
    assert data["warped"] is None


def test_text_report(examples):
    text = examples.report("golden_r5_semiinvariant").to_text()
    lines = text.splitlines()
    assert lines[0].startswith("golden_r5_semiinvariant  (p=1, q=1, k=3, n=5")
    assert lines[1] == "classification: SEMI-INVARIANT"
    assert "warped product: anti-invariant x invariant, proper warped product exists" in lines
    assert lines[-1] == "overall: PASS"


def test_angle_csv(examples):
    name = "golden_r5_semiinvariant"
    out = io.StringIO()
    write_angle_csv(examples.spec(name), out, examples.sample(name))
    rows = out.getvalue().splitlines()
    assert rows[0] == "index,f,alpha,beta,D1,D2"
    assert len(rows) == 1 + 5**3
    assert rows[1].startswith("0,")
    assert all(len(row.split(",")) == 6 for row in rows)
