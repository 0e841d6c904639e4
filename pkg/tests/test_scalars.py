import random
from fractions import Fraction

import pytest

from logvertex.errors import NonUnit, Unsupported
from logvertex.scalars import (
    EPS,
    GAUSS_ZERO,
    I,
    MINUS_ONE,
    ONE,
    ZERO,
    DualScalar,
    GaussScalar,
    arith,
    binomial,
    dual,
    gauss,
    int_binomial,
    minus_one_pow,
    scalar_from_json,
    scalar_to_json,
)


def test_inv_one_plus_eps():
    # (1+e)(1-e) = 1 mod e^2
    x = ONE + EPS
    assert x.inv() == ONE - EPS
    assert arith("inv", x) == ONE - EPS
    assert x * x.inv() == ONE


def test_i_squared():
    assert I * I == MINUS_ONE
    assert arith("mul", I, I) == MINUS_ONE


def test_eps_squared_is_zero():
    assert EPS * EPS == ZERO


def test_inv_non_unit_raises():
    with pytest.raises(NonUnit):
        EPS.inv()
    with pytest.raises(NonUnit):
        ZERO.inv()


def test_binomial_minus_one():
    # binom(-1, j) = (-1)^j
    assert binomial(dual(-1), 3) == MINUS_ONE
    assert binomial(dual(-1), 4) == ONE


def test_binomial_nilpotent():
    # binom(-e, 2) = (-e)(-e-1)/2 = e/2 mod e^2
    assert binomial(-EPS, 2) == dual(0, Fraction(1, 2))


def test_binomial_one():
    assert binomial(ONE, 0) == ONE
    assert binomial(ONE, 1) == ONE
    for j in range(2, 8):
        assert binomial(ONE, j) == ZERO


def test_binomial_matches_integer_table():
    for n in range(0, 9):
        for j in range(0, 12):
            assert binomial(dual(n), j) == dual(int_binomial(n, j))


def test_binomial_minus_eps_closed_form():
    # binom(-e, j) = e*(-1)^j/j for 1 <= j <= 10
    for j in range(1, 11):
        expected = dual(0, Fraction((-1) ** j, j))
        assert binomial(-EPS, j) == expected


def _sample_scalar(rng) -> DualScalar:
    def frac():
        return Fraction(rng.randint(-6, 6), rng.randint(1, 5))

    return DualScalar(GaussScalar(frac(), frac()), GaussScalar(frac(), frac()))


def test_ring_axioms_randomized():
    rng = random.Random(20240612)
    for _ in range(1100):
        x, y, z = (_sample_scalar(rng) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert x + y == y + x
        assert x * ONE == x and x + ZERO == x


def test_field_axioms_on_units_randomized():
    rng = random.Random(991)
    checked = 0
    while checked < 400:
        x = _sample_scalar(rng)
        if x.value.is_zero():
            continue
        assert x * x.inv() == ONE
        assert (x.inv()).inv() == x
        checked += 1


def test_pascal_identity_including_nilpotent():
    rng = random.Random(7)
    samples = [dual(n) for n in range(-4, 5)]
    samples += [dual(n) + EPS for n in range(-3, 4)]
    samples += [DualScalar(GaussScalar(Fraction(1, 2), 1), GaussScalar(2, 0))]
    samples += [_sample_scalar(rng) for _ in range(25)]
    for c in samples:
        for j in range(1, 13):
            assert binomial(c, j) == binomial(c - ONE, j) + binomial(c - ONE, j - 1)


def test_minus_one_pow():
    assert minus_one_pow(gauss(2)) == ONE
    assert minus_one_pow(gauss(-3)) == MINUS_ONE
    with pytest.raises(Unsupported):
        minus_one_pow(gauss(Fraction(1, 2)))
    with pytest.raises(Unsupported):
        minus_one_pow(GaussScalar(0, 1))


def test_json_roundtrip():
    x = DualScalar(GaussScalar(Fraction(-3, 7), 2), GaussScalar(0, Fraction(1, 2)))
    blob = scalar_to_json(x)
    assert blob["re"] == ["-3", "7"]
    assert scalar_from_json(blob) == x
    assert x.eps == GaussScalar(0, Fraction(1, 2)) and x.value.re == Fraction(-3, 7)
    assert GAUSS_ZERO == GaussScalar(0)
