# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
Shared fixtures: loaded examples and their grid samples, built once per session.
"""

import pytest

from metagee import SEED_ENV
from metagee.ambient import AmbientStructure
from metagee.exprlang import parse
from metagee.quadring import GOLDEN
from metagee.report import find_example, run_all
from metagee.submanifold import GridSample, ImmersionSpec, Parameter


@pytest.fixture(autouse=True)
def _default_seed(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


class _Examples:
    def __init__(self):
        self._specs = {}
        self._samples = {}
        self._reports = {}

    def spec(self, name):
        if name not in self._specs:
            self._specs[name] = find_example(name)
        return self._specs[name]

    def sample(self, name):
        if name not in self._samples:
            self._samples[name] = GridSample(self.spec(name))
        return self._samples[name]

    def report(self, name):
        if name not in self._reports:
            self._reports[name] = run_all(self.spec(name), sample=self.sample(name))
        return self._reports[name]


@pytest.fixture(scope="session")
def examples():
    """Fixture specs, samples and full reports, cached by name."""
    return _Examples()


@pytest.fixture
def make_spec():
    """Build an :class:`ImmersionSpec` from expression strings."""

    def build(
        immersion, structure, parameters, distributions=None, params=None, grid=3, name="adhoc"
    ):
        params = params or GOLDEN
        return ImmersionSpec(
            name,
            params,
            AmbientStructure(structure, params),
            [Parameter(*entry) for entry in parameters],
            [parse(source) for source in immersion],
            {
                key: [[parse(c) for c in vector] for vector in vectors]
                for key, vectors in (distributions or {}).items()
            },
            grid=grid,
        )

    return build
