# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
Exact arithmetic in Q[sigma]
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from metagee.quadring import (
    GOLDEN,
    MetallicParams,
    RingElem,
    RingMismatchError,
    ZeroNormError,
    ring_add,
    ring_conj,
    ring_mul,
    ring_to_float,
)

PARAMS = [MetallicParams(p, q) for p, q in ((1, 1), (2, 1), (1, 2), (3, 2), (3, 4), (5, 7))]


def _random_elements(rng, params, count):
    for _ in range(count):
        a = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 9)))
        b = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 9)))
        yield params.element(a, b)


@pytest.mark.parametrize("params", PARAMS, ids=repr)
def test_minimal_polynomial(params):
    sigma, sigbar = params.sigma, params.sigbar
    assert sigma * sigma == params.p * sigma + params.q
    assert sigbar * sigbar == params.p * sigbar + params.q
    assert sigma * sigbar == -params.q
    assert sigma + sigbar == params.p


@pytest.mark.parametrize("params", PARAMS, ids=repr)
def test_field_axioms(params):
    rng = np.random.default_rng(params.p * 100 + params.q)
    elements = list(_random_elements(rng, params, 200))
    for x, y, z in zip(elements, elements[1:], elements[2:]):
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        assert ring_conj(ring_mul(x, y)) == ring_mul(ring_conj(x), ring_conj(y))
        assert x.conj().conj() == x
        if x.norm() != 0:
            assert x * x.inverse() == 1
            assert (y / x) * x == y


@pytest.mark.parametrize("params", PARAMS, ids=repr)
def test_norm_is_product_with_conjugate(params):
    rng = np.random.default_rng(7)
    for x in _random_elements(rng, params, 20):
        product = x * x.conj()
        assert product.is_rational
        assert product == x.norm()


def test_zero_norm_divisor():
    # p^2 + 4q = 25, so sigma = 4 and sigma - 4 is a zero divisor
    params = MetallicParams(3, 4)
    assert params.sigma_is_rational
    x = params.element(-4, 1)
    assert x.norm() == 0
    with pytest.raises(ZeroNormError):
        x.inverse()
    with pytest.raises(ZeroNormError):
        params.element(1) / x
    assert params.sigma.to_float() == 4.0
    assert params.sigbar.to_float() == -1.0


def test_zero_element_has_no_inverse():
    with pytest.raises(ZeroNormError):
        GOLDEN.element(0).inverse()


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        ring_add(GOLDEN.sigma, MetallicParams(2, 1).sigma)
    with pytest.raises(RingMismatchError):
        GOLDEN.sigma * MetallicParams(2, 1).sigma


@pytest.mark.parametrize("p, q", [(0, 1), (1, 0), (-1, 2), (1.5, 1), (True, 1)])
def test_invalid_params(p, q):
    with pytest.raises(ValueError):
        MetallicParams(p, q)


def test_golden_values():
    phi = (1 + math.sqrt(5)) / 2
    assert GOLDEN.is_golden
    assert ring_to_float(GOLDEN.sigma) == pytest.approx(phi, abs=1e-15)
    assert ring_to_float(GOLDEN.sigbar) == pytest.approx(1 - phi, abs=1e-15)
    assert float(GOLDEN.sigma**5) == pytest.approx(phi**5, rel=1e-14)
    assert GOLDEN.sigma**-1 == GOLDEN.sigma - 1


@pytest.mark.parametrize("params", PARAMS, ids=repr)
def test_to_float_matches_direct_evaluation(params):
    sigma = params.sigma_float()
    rng = np.random.default_rng(11)
    for x in _random_elements(rng, params, 25):
        direct = float(x.a) + float(x.b) * sigma
        assert x.to_float() == pytest.approx(direct, rel=1e-12, abs=1e-12)


def test_to_float_avoids_cancellation():
    # coefficients are large Fibonacci numbers of opposite sign
    params = MetallicParams(1, 1)
    x = params.element(-1, 1) ** 40
    expected = ((math.sqrt(5) - 1) / 2) ** 40
    assert x.to_float() == pytest.approx(expected, rel=1e-12)


def test_rational_coefficients_only():
    with pytest.raises(TypeError):
        RingElem(0.5, 0, GOLDEN)
    assert RingElem("1/3", "2/3", GOLDEN) == GOLDEN.element(Fraction(1, 3), Fraction(2, 3))


def test_str_and_hash():
    x = GOLDEN.element(2, -3)
    assert str(x) == "2 - 3*sigma"
    assert hash(GOLDEN.element(4)) == hash(4)
    assert len({x, GOLDEN.element(2, -3), GOLDEN.element(4)}) == 2


def _mixed_element(rng, params):
    choice = int(rng.integers(3))
    if choice == 0:
        return next(_random_elements(rng, params, 1))
    if choice == 1:
        return params.sigbar ** int(rng.integers(1, 9))
    # a + b*sigma with a close to -b*sigma
    b = Fraction(int(rng.integers(1, 6)))
    a = -(b * Fraction(params.sigma_float())).limit_denominator(int(rng.integers(10, 10**6)))
    return params.element(a, b)


def test_to_float_is_multiplicative():
    rng = np.random.default_rng(1000)
    for _ in range(1200):
        params = MetallicParams(int(rng.integers(1, 21)), int(rng.integers(1, 21)))
        x = _mixed_element(rng, params)
        y = _mixed_element(rng, params)
        expected = x.to_float() * y.to_float()
        assert abs((x * y).to_float() - expected) <= 1e-12 * (1 + abs(expected)), (params, x, y)
