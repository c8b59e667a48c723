"""Structure constants, brackets, adjoint exponentials, the Cartan DGLA."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartankit.lie import CartanDgla, LieAlgebra, abelian, cartan_dgla, heisenberg3, sl2, su2
from cartankit.linalg import EXACT, FLOAT, ModeError, max_abs


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def test_fixture_algebras_satisfy_jacobi(algebras):
    for name, g in algebras.items():
        assert g.check_jacobi() == 0, name


def test_antisymmetry_violation_reported():
    g = abelian(2)
    g.c[0, 1, 0] = Fraction(1)
    g.c[1, 0, 0] = Fraction(1)          # deliberately symmetric entry
    assert g.check_jacobi() > 0


def test_jacobi_violation_reported():
    # antisymmetric but non-Jacobi constants on dimension 3
    g = LieAlgebra(3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    assert g.check_jacobi() > 0


def test_bracket_abelian_vanishes():
    g = abelian(3)
    x = g.vector([1, 2, 3])
    y = g.vector([4, 5, 6])
    assert max_abs(g.bracket(x, y)) == 0.0


def test_bracket_sl2_table():
    g = sl2()
    e, f, h = (g.basis_vector(i) for i in range(3))
    assert np.array_equal(g.bracket(h, e), 2 * e)
    assert np.array_equal(g.bracket(h, f), -2 * f)
    assert np.array_equal(g.bracket(e, f), h)


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=3, max_size=3))
def test_bracket_self_is_zero(coords):
    g = sl2()
    x = g.vector(coords)
    assert max_abs(g.bracket(x, x)) == 0.0


def test_ad_matrix_matches_bracket(algebras):
    for g in algebras.values():
        for i in range(g.n):
            for j in range(g.n):
                x, y = g.basis_vector(i), g.basis_vector(j)
                assert np.array_equal(g.ad(x).dot(y), g.bracket(x, y))


def test_ad_h_diagonal_and_traceless():
    g = sl2()
    ad_h = g.ad(g.basis_vector(2))
    assert [ad_h[i, i] for i in range(3)] == [2, -2, 0]
    assert sum(ad_h[i, i] for i in range(3)) == 0
    for i in range(3):
        assert sum(g.ad(g.basis_vector(i))[j, j] for j in range(3)) == 0


def test_ad_exp_identity_cases():
    g = heisenberg3()
    x = g.basis_vector(0)
    assert max_abs(g.ad_exp(x, 0) - np.eye(3)) == 0.0
    ab = abelian(3)
    assert max_abs(ab.ad_exp(ab.vector([1, 2, 3]), 7) - np.eye(3)) == 0.0


def test_ad_exp_heisenberg_two_terms():
    g = heisenberg3()
    x, y, z = (g.basis_vector(i) for i in range(3))
    assert np.array_equal(g.ad_exp(x, 1).dot(y), y + z)


def test_ad_exp_group_law_float():
    g = su2()
    x = g.vector([0.3, -0.7, 0.5], FLOAT)
    lhs = g.ad_exp(x, 0.4).dot(g.ad_exp(x, 0.35))
    rhs = g.ad_exp(x, 0.75)
    assert max_abs(lhs - rhs) < 1e-12


def test_ad_exp_exact_requires_nilpotent():
    g = sl2()
    with pytest.raises(ModeError):
        g.ad_exp(g.basis_vector(2), 1)


def test_cartan_dgla_shape_and_tables():
    g = sl2()
    dgla = cartan_dgla(g)          # construction runs the self checks
    assert dgla.dim == 2 * g.n
    assert dgla.degrees == [-1] * 3 + [0] * 3
    n = g.n
    for a in range(n):
        for b in range(n):
            assert max_abs(dgla.bracket_table(a, b)) == 0.0       # [I, I] = 0
    # d(I_j) = L_j, d(L_j) = 0
    for j in range(n):
        d = dgla.differential_table(j)
        assert d[n + j] == 1 and max_abs(d) == 1.0
        assert max_abs(dgla.differential_table(n + j)) == 0.0
    # [L_i, L_j] realizes the structure constants, [L_i, I_j] the contraction copy
    for i in range(n):
        for j in range(n):
            ll = dgla.bracket_table(n + i, n + j)
            li = dgla.bracket_table(n + i, j)
            assert np.array_equal(ll[n:], g.c[i, j])
            assert np.array_equal(li[:n], g.c[i, j])


def test_cartan_dgla_rejects_invalid_constants():
    g = LieAlgebra(3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    with pytest.raises(ValueError):
        CartanDgla(g)


def test_vector_mode_and_length_checks():
    g = sl2()
    with pytest.raises(ValueError):
        g.vector([1, 2])
    with pytest.raises(ModeError):
        g.bracket(g.basis_vector(0, EXACT), g.basis_vector(1, FLOAT))
