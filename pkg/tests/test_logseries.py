import random
from fractions import Fraction

import pytest

from logvertex.errors import Unsupported
from logvertex.logseries import (
    ZDIR_12,
    ZDIR_21,
    IotaTerm,
    LogSeries,
    coset_key,
    delta_coeff,
    dz_total,
    iota_expand,
)
from logvertex.scalars import (
    EPS,
    MINUS_ONE,
    ONE,
    ZERO,
    binomial,
    dual,
    gauss,
    minus_one_pow,
)


def series(*terms):
    s = LogSeries()
    for alpha, j, c in terms:
        s.add_term(gauss(alpha) if not hasattr(alpha, "re") else alpha, j, c)
    return s


def test_dz_power_of_z():
    # z^alpha -> alpha z^(alpha-1)
    alpha = gauss(Fraction(3, 2), 1)
    s = series((alpha, 0, ONE))
    expect = LogSeries({(alpha - gauss(1), 0): dual(Fraction(3, 2)) + dual(0) * ONE})
    got = dz_total(s)
    assert got.coefficient(alpha - gauss(1), 0).value == alpha
    assert len(got.terms) == 1


def test_dz_zeta():
    # zeta -> z^{-1}
    s = series((0, 1, ONE))
    got = dz_total(s)
    assert got == series((-1, 0, ONE))


def test_dz_product_rule_example():
    # z^{-1} zeta -> -z^{-2} zeta + z^{-2}
    s = series((-1, 1, ONE))
    got = dz_total(s)
    assert got.coefficient(gauss(-2), 1) == MINUS_ONE
    assert got.coefficient(gauss(-2), 0) == ONE
    assert len(got.terms) == 2


def test_dz_iterated_matches_composition():
    s = series((2, 2, dual(3)), (-1, 1, ONE), (Fraction(1, 2), 0, dual(5)))
    assert dz_total(s, 3) == dz_total(dz_total(dz_total(s)))


def test_dz_leibniz_on_products():
    rng = random.Random(11)
    for _ in range(40):
        def rand_series():
            s = LogSeries()
            for _ in range(rng.randint(1, 3)):
                alpha = gauss(Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2])))
                s.add_term(alpha, rng.randint(0, 2), dual(rng.randint(-3, 3)))
            return s

        a, b = rand_series(), rand_series()
        lhs = dz_total(a * b)
        rhs = dz_total(a) * b + a * dz_total(b)
        assert lhs == rhs


def test_iota_geometric_series():
    # (z1-then-z2, n=0, d=-1): sum_j z1^{-1-j} z2^j
    exp = iota_expand(ZDIR_12, 0, dual(-1), 1, 3)
    assert len(exp.terms) == 4
    for term in exp.terms:
        assert term.coeff == ONE
        assert term.z1_exp == gauss(-1 - term.j)
        assert term.z2_exp == gauss(term.j)
        assert term.zeta_power == 0


def test_iota_finite_binomial():
    # (z1-then-z2, n=2, d=0): z1^2 - 2 z1 z2 + z2^2, all higher terms vanish
    exp = iota_expand(ZDIR_12, 2, dual(0), 1, 5)
    coeffs = {(t.z1_exp.re, t.z2_exp.re): t.coeff for t in exp.terms}
    assert coeffs == {
        (Fraction(2), Fraction(0)): ONE,
        (Fraction(1), Fraction(1)): dual(-2),
        (Fraction(0), Fraction(2)): ONE,
    }


def test_iota_reproduces_z1_minus_z2_power():
    # For n >= 0, d = 0 the expansion is the exact binomial expansion of (z1-z2)^n.
    from logvertex.scalars import int_binomial

    for n in range(0, 6):
        exp = iota_expand(ZDIR_12, n, dual(0), 1, n + 4)
        got = {(t.z1_exp.re, t.z2_exp.re): t.coeff for t in exp.terms}
        expect = {
            (Fraction(n - j), Fraction(j)): dual((-1) ** j * int_binomial(n, j))
            for j in range(n + 1)
        }
        assert got == expect


def test_iota_other_direction_example():
    # (z2-then-z1, n=0, d=-1, J=2) -> -(z2^{-1} + z1 z2^{-2} + z1^2 z2^{-3})
    exp = iota_expand(ZDIR_21, 0, dual(-1), 1, 2)
    got = {(t.z1_exp.re, t.z2_exp.re): t.coeff for t in exp.terms}
    assert got == {
        (Fraction(0), Fraction(-1)): MINUS_ONE,
        (Fraction(1), Fraction(-2)): MINUS_ONE,
        (Fraction(2), Fraction(-3)): MINUS_ONE,
    }


def test_iota_direction_sign_consistency():
    # Per j, the two directions' coefficients differ by (-1)^{n+j+d} * (-1)^{-j}.
    for n in (-2, -1, 0, 1, 3):
        for dv in (-2, -1, 0, 2):
            e12 = iota_expand(ZDIR_12, n, dual(dv), 1, 6)
            e21 = iota_expand(ZDIR_21, n, dual(dv), 1, 6)
            c12 = {t.j: t.coeff for t in e12.terms}
            c21 = {t.j: t.coeff for t in e21.terms}
            for j in set(c12) | set(c21):
                factor = minus_one_pow(gauss(n + j + dv)) * (
                    MINUS_ONE if j % 2 else ONE
                )
                lhs = c21.get(j, ZERO)
                rhs = factor * c12.get(j, ZERO)
                assert lhs == rhs


def test_iota_nilpotent_carries_zeta():
    # d = -eps: binomials pick up eps-derivative terms and e^{zeta S^n} adds a
    # zeta-linear layer; eps^2 = 0 keeps it to one layer.
    exp = iota_expand(ZDIR_12, 0, -EPS, 2, 3)
    flat = {(t.j, t.zeta_power): t.coeff for t in exp.terms}
    assert flat[(0, 0)] == ONE
    assert flat[(0, 1)] == -EPS
    # j >= 1: (-1)^j binom(-eps, j) = eps/j, no zeta layer (eps * eps = 0)
    for j in (1, 2, 3):
        assert flat[(j, 0)] == dual(0, Fraction(1, j))
        assert (j, 1) not in flat


def test_iota_21_non_integer_unsupported():
    with pytest.raises(Unsupported):
        iota_expand(ZDIR_21, 0, dual(Fraction(1, 2)), 1, 2)


def test_delta_coeff_examples():
    e1, e2, c = delta_coeff(0, 0, dual(0))
    assert (e1.re, e2.re, c) == (Fraction(-1), Fraction(0), ONE)
    e1, e2, c = delta_coeff(2, 3, dual(0))
    assert (e1.re, e2.re, c) == (Fraction(-4), Fraction(1), dual(3))
    e1, e2, c = delta_coeff(1, 0, dual(-1))
    assert (e1.re, e2.re, c) == (Fraction(0), Fraction(-2), MINUS_ONE)


def test_delta_matches_binomial():
    for j in range(5):
        for n in range(-3, 4):
            _, _, c = delta_coeff(j, n, dual(-1) + EPS)
            assert c == binomial(dual(n - 1) + EPS, j)


def test_render_and_floors():
    s = series((-1, 1, ONE), (0, 0, dual(2)), (Fraction(1, 2), 0, dual(3)))
    text = s.render()
    assert "zeta^1" in text and "z^(1/2)" in text
    s.floors[coset_key(gauss(-1))] = Fraction(-1)
    s.check_floors()
    s.add_term(gauss(-2), 0, ONE)
    with pytest.raises(ValueError):
        s.check_floors()
    blob = s.to_json()
    assert all("exp" in item and "coeff" in item for item in blob)
