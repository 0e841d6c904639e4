from fractions import Fraction

import pytest

from logvertex import commutative, engine, nls
from logvertex.engine import (
    Gen,
    Ident,
    NProd,
    binom_op,
    check_borcherds,
    check_hexagon,
    check_locality,
    check_translation_covariance,
    check_vacuum,
    gva_extract,
    nth_product_modes,
    theta_reconstruct,
    translate,
    y_action,
)
from logvertex.errors import NonSymmetric, TranslationMismatch, Unsupported
from logvertex.logseries import dz_total
from logvertex.scalars import EPS, GaussScalar, MINUS_ONE, ONE, binomial, dual, gauss
from logvertex.states import add, is_zero, scale, sub, unit

W, WB = nls.W, nls.WB
INSTANCES = [nls.nls_instance(), nls.nls_eps_instance(), commutative.commutative_instance()]
NLS_BOTH = INSTANCES[:2]


def gens(inst):
    return sorted(inst.generator_states().items())


def targets(inst, degree):
    return [unit(k) for d in range(degree + 1) for k in inst.basis(d)]


# -- binom_op ----------------------------------------------------------------


def test_binom_op_identity_at_j_zero():
    v = {("k1", "k2"): dual(5)}
    out = binom_op(3, 0, dual(-2), lambda s: {}, 1, v)
    assert out == v


def test_binom_op_scalar_case():
    v = {("a", "b"): ONE}
    out = binom_op(0, 2, dual(-1), lambda s: {}, 1, v)
    assert out == scale(binomial(dual(-1), 2), v)  # = +1 * v


def test_binom_op_nilpotent_first_derivative():
    # d = 0, N of order 2, n = 0, j = 1: (d/dx binom(x,1))|_0 N v = N v
    v = {("a", "b"): ONE}
    nil = lambda s: scale(dual(7), s)
    out = binom_op(0, 1, dual(0), nil, 2, v)
    assert out == scale(dual(7), v)


def test_binom_op_matches_dual_binomial():
    # scalar-nilpotent action: binom_op == binomial(n + d + eps*e, j)
    v = {("a", "b"): ONE}
    for n in range(-3, 3):
        for j in range(0, 5):
            for d0 in (-2, 0, 1):
                for e in (1, -2):
                    nil = lambda s, e=e: scale(dual(0, e), s)
                    lhs = binom_op(n, j, dual(d0), nil, 2, v)
                    rhs = scale(binomial(dual(n + d0, e), j), v)
                    assert lhs == rhs, (n, j, d0, e)


# -- vacuum and translation ----------------------------------------------------


def test_vacuum_sweep_all_instances():
    for inst in INSTANCES:
        assert check_vacuum(inst, 3) == []


def test_translate_agrees_with_declared():
    for inst in INSTANCES:
        for _n, g in gens(inst):
            t = translate(inst, g)
            assert t == inst.translate_state(g)


def test_translate_nls_anchor():
    inst = nls.nls_instance()
    w = unit(((W, -1),))
    assert translate(inst, w) == unit(((W, -2),))
    assert translate(inst, inst.vacuum()) == {}


def test_translate_mismatch_raises():
    inst = nls.nls_instance()

    class Broken(nls.NLSInstance):
        def translate_state(self, a):
            return scale(dual(2), super().translate_state(a))

    broken = Broken(False)
    with pytest.raises(TranslationMismatch):
        translate(broken, unit(((W, -1),)))


# -- state-field map -----------------------------------------------------------


def test_y_vacuum_is_identity():
    for inst in NLS_BOTH:
        for key in inst.basis(2):
            b = unit(key)
            series = y_action(inst, inst.vacuum(), b, (-4, 4))
            assert series.terms == {(gauss(0), 0): b}


def test_y_on_vacuum_regular_and_constant_term():
    for inst in NLS_BOTH:
        for _n, a in gens(inst):
            series = y_action(inst, a, inst.vacuum(), (-6, 6))
            for (alpha, _j), _c in series.terms.items():
                assert alpha.re >= 0  # Y(a,z)|0> in V[[z]]
            assert series.coefficient(gauss(0), 0) == a  # z = 0 value


def test_y_charge_bookkeeping():
    # Y(w, z) applied to a charge -1 target has exponents -n-2
    inst = nls.nls_instance()
    w, wb = unit(((W, -1),)), unit(((WB, -1),))
    series = y_action(inst, w, wb, (-5, 5))
    for (alpha, j), _c in series.terms.items():
        assert j == 0
        assert alpha.im == 0 and alpha.re.denominator == 1
    # exponent -n-2 on a charge -1 target: z^1 carries mu_{-3}
    assert series.coefficient(gauss(1), 0) == inst.mu(w, -3, wb)


def test_y_dichotomy_zeta_structure():
    # semisimple braiding: no zeta; nilpotent: integer exponents, eps-zeta layer
    w = unit(((W, -1),))
    wb = unit(((WB, -1),))
    plain = y_action(nls.nls_instance(), w, wb, (-4, 4))
    assert all(j == 0 for (_a, j) in plain.terms)
    deformed = y_action(nls.nls_eps_instance(), w, wb, (-4, 4))
    zetas = {j for (_a, j) in deformed.terms}
    assert zetas == {0, 1}
    for (alpha, j), c in deformed.terms.items():
        assert alpha.re.denominator == 1 and alpha.im == 0
        if j == 1:
            for coeff in c.values():
                assert coeff.value.is_zero()  # eps coefficients only


def test_y_of_translated_state_is_derivative():
    # Y(Ta, z) = D_z Y(a, z)
    for inst in NLS_BOTH:
        for _n, a in gens(inst):
            for key in inst.basis(1) + inst.basis(2):
                b = unit(key)
                lhs = y_action(inst, inst.translate_state(a), b, (-4, 3))
                rhs = dz_total(y_action(inst, a, b, (-4, 4)))
                diff = lhs - rhs
                for (alpha, j), c in diff.terms.items():
                    if -4 <= alpha.re <= 3:
                        assert is_zero(c), (inst.name, key, alpha, j)


# -- translation covariance ------------------------------------------------------


def test_translation_covariance_sweep():
    for inst in INSTANCES:
        tg = targets(inst, 2)
        for _n, a in gens(inst):
            assert check_translation_covariance(inst, a, tg, (-5, 5)) == []


# -- Borcherds, modes, hexagon ---------------------------------------------------


def test_borcherds_commutative_collapses():
    inst = commutative.commutative_instance()
    x = unit((("x", 0),))
    x1 = unit((("x", 1),))
    for m in range(-2, 3):
        for n in range(-2, 3):
            for k in range(-2, 3):
                for c in (inst.vacuum(), x, inst.mu(x, -1, x1)):
                    assert is_zero(check_borcherds(inst, x, x1, c, m, n, k))


def test_borcherds_nls_window():
    for inst in NLS_BOTH:
        gs = [g for _n, g in gens(inst)]
        tg = targets(inst, 2)
        for a in gs:
            for b in gs:
                for c in tg:
                    for m in range(-2, 3):
                        for n in range(-2, 3):
                            for k in range(-2, 3):
                                d = check_borcherds(inst, a, b, c, m, n, k)
                                assert is_zero(d), (inst.name, m, n, k)


def test_borcherds_reproduces_first_relation():
    # n = 0 on (w, w, |0>) collapses to the first relation of the mode algebra
    inst = nls.nls_instance()
    w = unit(((W, -1),))
    for m in range(-3, 4):
        for k in range(-3, 4):
            assert is_zero(check_borcherds(inst, w, w, inst.vacuum(), m, 0, k))


def test_nth_product_identity():
    # modes of a_{(n+S)}b agree with direct products of the formed state
    for inst in NLS_BOTH:
        gs = [g for _n, g in gens(inst)]
        tg = targets(inst, 3)
        for a in gs:
            for b in gs:
                for n in range(-3, 4):
                    prod = inst.mu(a, n, b)
                    for k in range(-3, 4):
                        for c in tg:
                            lhs = nth_product_modes(inst, a, n, b, k, c)
                            rhs = inst.mu(prod, k, c)
                            assert lhs == rhs, (inst.name, n, k)


def test_nth_product_vacuum_recovers_modes():
    # a_{(-1+S)}|0> = a: its modes are the modes of a
    inst = nls.nls_instance()
    w = unit(((W, -1),))
    for k in range(-3, 3):
        for key in inst.basis(2):
            c = unit(key)
            assert nth_product_modes(inst, w, -1, inst.vacuum(), k, c) == inst.mu(
                w, k, c
            )


def test_hexagon_sweep():
    for inst in NLS_BOTH:
        gs = [g for _n, g in gens(inst)]
        tg = targets(inst, 2)
        for a in gs:
            for b in gs:
                for c in tg:
                    for n in range(-2, 2):
                        assert check_hexagon(inst, a, b, c, n) == {}


def test_hexagon_with_vacuum_trivial():
    inst = nls.nls_instance()
    w = unit(((W, -1),))
    assert check_hexagon(inst, w, w, inst.vacuum(), -1) == {}


# -- locality ---------------------------------------------------------------------


def test_locality_vacuum_pair():
    for inst in NLS_BOTH:
        assert (
            check_locality(
                inst, inst.vacuum(), inst.vacuum(), 0, targets(inst, 2), (-4, 3, -4, 3)
            )
            == []
        )


def test_locality_generators_n_zero():
    for inst in NLS_BOTH:
        gs = [g for _n, g in gens(inst)]
        tg = targets(inst, 2)
        for a in gs:
            for b in gs:
                assert check_locality(inst, a, b, 0, tg, (-6, 4, -6, 4)) == []


# -- theta reconstruction -----------------------------------------------------------


def test_theta_examples():
    inst = nls.nls_instance()
    assert theta_reconstruct(inst, Ident()) == inst.vacuum()
    assert theta_reconstruct(inst, Gen("w")) == unit(((W, -1),))
    # Theta(a_{(n+S)}b-field) = a_{(n+S)} Theta(b-field)
    for n in range(-3, 2):
        expr = NProd(Gen("w"), n, Gen("wb"))
        lhs = theta_reconstruct(inst, expr)
        rhs = inst.mu(unit(((W, -1),)), n, theta_reconstruct(inst, Gen("wb")))
        assert lhs == rhs
    # nested: w_{(-2+S)}(wb_{(-1+S)} w)
    expr = NProd(Gen("w"), -2, NProd(Gen("wb"), -1, Gen("w")))
    got = theta_reconstruct(inst, expr)
    want = inst.mu(
        unit(((W, -1),)), -2, inst.mu(unit(((WB, -1),)), -1, unit(((W, -1),)))
    )
    assert got == want


def test_theta_homomorphism_via_modes():
    # the reconstructed state's field has the recursion's modes
    inst = nls.nls_instance()
    w, wb = unit(((W, -1),)), unit(((WB, -1),))
    for n in (-2, -1, 0):
        state_prod = theta_reconstruct(inst, NProd(Gen("w"), n, Gen("wb")))
        for k in range(-2, 2):
            for key in inst.basis(1):
                c = unit(key)
                assert inst.mu(state_prod, k, c) == nth_product_modes(
                    inst, w, n, wb, k, c
                )


# -- GVA extraction ------------------------------------------------------------------


def test_gva_nls_matrix():
    data = gva_extract(
        ["w", "wb"],
        [[GaussScalar(-1), GaussScalar(1)], [GaussScalar(1), GaussScalar(-1)]],
    )
    assert data.classes == [(0, 1)]
    assert data.delta[(0, 0)] == GaussScalar(0)
    assert data.group_table[(0, 0)] == 0
    assert data.neutral == 0
    assert data.partial == []
    assert data.eta(0, 0) == ONE


def test_gva_half_matrix():
    half = GaussScalar(Fraction(1, 2))
    data = gva_extract(["a", "b"], [[half, half], [half, half]])
    assert data.classes == [(0, 1)]
    assert data.delta[(0, 0)] == half
    # 2 * (1/2) = 1 is integral but s_kl - s_il - s_jl = -1/2 for all k: empty
    assert data.group_table[(0, 0)] is None
    assert {"op": "add", "classes": (0, 0)} in data.partial


def test_gva_two_classes_group_law():
    # rank-one lattice shape: s_mn = m*n/2 on points {0, 1, 2}
    def s(m, n):
        return GaussScalar(Fraction(m * n, 2))

    matrix = [[s(m, n) for n in range(3)] for m in range(3)]
    data = gva_extract(["e0", "e1", "e2"], matrix)
    assert data.classes == [(0, 2), (1,)]
    c0, c1 = data.class_of[0], data.class_of[1]
    assert data.group_table[(c0, c0)] == c0
    assert data.group_table[(c0, c1)] == c1
    assert data.group_table[(c1, c1)] == c0  # 1/2 + 1/2 = 0 mod Z
    assert data.delta[(c1, c1)] == GaussScalar(Fraction(1, 2))
    # Delta symmetric, and additive where the law is defined:
    # Delta(c1+c1, c1) = Delta(c0, c1) = 0 = 2 * Delta(c1, c1) mod Z
    assert data.delta[(c0, c1)] == data.delta[(c1, c0)] == GaussScalar(0)


def test_gva_rejects_asymmetric():
    with pytest.raises(NonSymmetric):
        gva_extract(["a", "b"], [[GaussScalar(0), GaussScalar(1)], [GaussScalar(0), GaussScalar(0)]])
