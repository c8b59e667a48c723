"""Graded operators, Koszul signs, tensor complexes."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartankit.graded import (CochainComplex, GradedOperator, GradedVectorSpace,
                              compose, dual_complex, graded_commutator,
                              nat_apply, tensor_basis_index, tensor_complex,
                              tensor_operator, tensor_space)
from cartankit.linalg import EXACT, FLOAT, ModeError


def _space(dims):
    return GradedVectorSpace(dims)


def _op(space, degree, blocks):
    return GradedOperator(space, space, degree,
                          {k: np.asarray(b, dtype=float) for k, b in blocks.items()})


@pytest.fixture
def two_degree_space():
    return _space({-1: 2, 0: 2})


def _random_op(space, degree, rng):
    blocks = {}
    for k in space.degrees:
        rows, cols = space.dim(k + degree), space.dim(k)
        if rows and cols:
            blocks[k] = rng.uniform(-1, 1, size=(rows, cols))
    return GradedOperator(space, space, degree, blocks, mode=FLOAT)


def test_identity_compose(two_degree_space):
    rng = np.random.default_rng(0)
    f = _random_op(two_degree_space, -1, rng)
    ident = GradedOperator.identity(two_degree_space, FLOAT)
    assert (compose(ident, f) - f).norm() == 0.0
    assert (compose(f, ident) - f).norm() == 0.0


def test_compose_degree_addition(two_degree_space):
    rng = np.random.default_rng(1)
    f = _random_op(two_degree_space, -1, rng)
    g = _random_op(two_degree_space, -1, rng)
    assert compose(f, g).degree == -2


def test_differential_squares_to_zero_enforced(two_degree_space):
    good = _op(two_degree_space, 1, {-1: [[0.0, 1.0], [0.0, 0.0]]})
    complex_ = CochainComplex(two_degree_space, good)
    sq = compose(complex_.differential, complex_.differential)
    assert sq.norm() == 0.0
    bad_space = _space({-1: 1, 0: 1, 1: 1})
    bad = GradedOperator(bad_space, bad_space, 1,
                         {-1: np.array([[1.0]]), 0: np.array([[1.0]])})
    with pytest.raises(ValueError):
        CochainComplex(bad_space, bad)


def test_commutator_even_and_odd_signs(two_degree_space):
    rng = np.random.default_rng(2)
    a = _random_op(two_degree_space, 0, rng)
    b = _random_op(two_degree_space, 0, rng)
    plain = compose(a, b) - compose(b, a)
    assert (graded_commutator(a, b) - plain).norm() == 0.0
    f = _random_op(two_degree_space, -1, rng)
    g = _random_op(two_degree_space, -1, rng)
    anti = compose(f, g) + compose(g, f)
    assert (graded_commutator(f, g) - anti).norm() == 0.0
    self_bracket = graded_commutator(f, f)
    assert (self_bracket - 2 * compose(f, f)).norm() == 0.0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.sampled_from([-1, 0, 1]), st.sampled_from([-1, 0, 1]))
def test_commutator_graded_antisymmetry(seed, da, db):
    space = _space({-1: 2, 0: 2, 1: 2})
    rng = np.random.default_rng(seed)
    f = _random_op(space, da, rng)
    g = _random_op(space, db, rng)
    sign = -1 if (da % 2) and (db % 2) else 1
    lhs = graded_commutator(f, g)
    rhs = (-sign) * graded_commutator(g, f)
    assert (lhs - rhs).norm() < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 31 - 1),
       st.sampled_from([-1, 0, 1]), st.sampled_from([-1, 0, 1]), st.sampled_from([-1, 0, 1]))
def test_commutator_graded_jacobi(seed, da, db, dc):
    space = _space({-1: 2, 0: 2, 1: 2})
    rng = np.random.default_rng(seed)
    a = _random_op(space, da, rng)
    b = _random_op(space, db, rng)
    c = _random_op(space, dc, rng)
    sign = -1 if (da % 2) and (db % 2) else 1
    lhs = graded_commutator(a, graded_commutator(b, c))
    rhs = graded_commutator(graded_commutator(a, b), c) + sign * graded_commutator(b, graded_commutator(a, c))
    assert (lhs - rhs).norm() < 1e-10


def test_tensor_with_unit_is_identity(two_degree_space):
    diff = _op(two_degree_space, 1, {-1: [[0.0, 1.0], [0.0, 0.0]]})
    v = CochainComplex(two_degree_space, diff)
    unit = CochainComplex.concentrated(1, 0, FLOAT)
    prod = tensor_complex(v, unit)
    assert prod.space.dims == v.space.dims
    for k in v.space.degrees:
        assert np.allclose(prod.differential.block(k), v.differential.block(k))


def test_tensor_dims_graded_convolution():
    v = _space({0: 2})
    w = _space({-1: 1, 0: 1})
    assert tensor_space(v, w).dims == {-1: 2, 0: 2}


def _koszul_apply_differential(vec, v, w):
    """Independent expansion of d(x (x) y) = dx (x) y + (-1)^p x (x) dy on
    pure tensors of basis vectors, bypassing the assembled matrices."""
    out = {}
    for (p, i, q, j), coeff in vec.items():
        dv = v.differential.block(p)
        for r in range(v.space.dim(p + 1)):
            if dv.size and dv[r, i]:
                key = (p + 1, r, q, j)
                out[key] = out.get(key, 0.0) + coeff * dv[r, i]
        dw = w.differential.block(q)
        sign = -1.0 if p % 2 else 1.0
        for r in range(w.space.dim(q + 1)):
            if dw.size and dw[r, j]:
                key = (p, i, q + 1, r)
                out[key] = out.get(key, 0.0) + sign * coeff * dw[r, j]
    return out


def test_tensor_differential_squares_to_zero_oracle():
    # two 2-term complexes; double expansion of the sign rule must cancel
    space = _space({0: 1, 1: 1})
    d = _op(space, 1, {0: [[1.0]]})
    v = CochainComplex(space, d)
    w = CochainComplex(space, d)
    for start in [(0, 0, 0, 0), (0, 0, 1, 0), (1, 0, 0, 0)]:
        once = _koszul_apply_differential({start: 1.0}, v, w)
        twice = _koszul_apply_differential(once, v, w)
        assert all(abs(c) < 1e-15 for c in twice.values())
    prod = tensor_complex(v, w)
    assert compose(prod.differential, prod.differential).norm() == 0.0


def test_tensor_leibniz_sign_matches_matrix():
    # assembled tensor differential agrees with the basis-level sign rule
    space = _space({0: 2, 1: 1})
    d = _op(space, 1, {0: [[1.0, -2.0]]})
    v = CochainComplex(space, d)
    w = CochainComplex(space, d)
    prod = tensor_complex(v, w)
    for p in v.space.degrees:
        for q in w.space.degrees:
            for i in range(v.space.dim(p)):
                for j in range(w.space.dim(q)):
                    deg, col = tensor_basis_index(v.space, w.space, p, i, q, j)
                    vec = np.zeros(prod.space.dim(deg))
                    vec[col] = 1.0
                    image = prod.differential.apply({deg: vec})
                    expect = _koszul_apply_differential({(p, i, q, j): 1.0}, v, w)
                    got = image.get(deg + 1, np.zeros(prod.space.dim(deg + 1)))
                    want = np.zeros_like(got)
                    for (pp, ii, qq, jj), c in expect.items():
                        _, idx = tensor_basis_index(v.space, w.space, pp, ii, qq, jj)
                        want[idx] += c
                    assert np.allclose(got, want)


def test_nat_apply_signs():
    space = _space({-1: 1, 0: 1})
    ident = GradedOperator.identity(space, FLOAT)
    b = _op(space, -1, {0: [[1.0]]})
    # identity (x) identity acts as the identity
    both = tensor_operator(ident, ident)
    assert (both - GradedOperator.identity(tensor_space(space, space), FLOAT)).norm() == 0.0
    # degree-0 second factor introduces no sign
    l = _op(space, 0, {-1: [[2.0]], 0: [[3.0]]})
    no_sign = tensor_operator(ident, l)
    for p in (-1, 0):
        for q in (-1, 0):
            deg, col = tensor_basis_index(space, space, p, 0, q, 0)
            out = no_sign.apply({deg: _unit(no_sign.source.dim(deg), col)})
            _, idx = tensor_basis_index(space, space, p, 0, q, 0)
            expect = l.block(q)[0, 0]
            assert abs(out[deg][idx] - expect) < 1e-15
    # odd-degree second factor picks up (-1)^{|v|} on the first slot
    ts = tensor_space(space, space)
    deg, col_even = tensor_basis_index(space, space, 0, 0, 0, 0)
    out_even = nat_apply(ident, b, {deg: _unit(ts.dim(deg), col_even)})
    _, tgt = tensor_basis_index(space, space, 0, 0, -1, 0)
    assert abs(out_even[deg - 1][tgt] - 1.0) < 1e-15          # (+1) for |v| = 0
    deg_o, col_odd = tensor_basis_index(space, space, -1, 0, 0, 0)
    out_odd = nat_apply(ident, b, {deg_o: _unit(ts.dim(deg_o), col_odd)})
    _, tgt_o = tensor_basis_index(space, space, -1, 0, -1, 0)
    assert abs(out_odd[deg_o - 1][tgt_o] - (-1.0)) < 1e-15    # (-1) for |v| = -1


def _unit(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def test_mixed_mode_rejected(two_degree_space):
    exact_block = np.empty((2, 2), dtype=object)
    exact_block[...] = Fraction(1)
    f = GradedOperator(two_degree_space, two_degree_space, 0, {0: exact_block}, mode=EXACT)
    g = _op(two_degree_space, 0, {0: [[1.0, 0.0], [0.0, 1.0]]})
    with pytest.raises(ModeError):
        compose(f, g)
    with pytest.raises(ModeError):
        f + g
    with pytest.raises(ModeError):
        0.5 * f


def test_dual_complex_squares_and_dims(two_degree_space):
    diff = _op(two_degree_space, 1, {-1: [[0.0, 1.0], [0.0, 0.0]]})
    v = CochainComplex(two_degree_space, diff)
    d = dual_complex(v)
    assert d.space.dims == {1: 2, 0: 2}
    assert compose(d.differential, d.differential).norm() == 0.0
