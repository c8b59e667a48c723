"""Integration of representation forms over simplices and cubes.

The degree-k component of the representation form attached to a
representation evaluates, at a word point, to the operator value of the
group element composed with one degree-(-1) action per left-translated
tangent.  Integrating that density over the parameter domain gives the
chain-level module structure; this module provides three independent
routes to those integrals (nested Gauss-Legendre quadrature, the
explicit coefficient series for words, and terminating polynomial
integration in exact mode) together with the law checks built on them.
"""

from fractions import Fraction
from itertools import product as iter_product
from math import factorial

import numpy as np

from . import linalg
from .evaluators import (ChainCombination, Evaluator, FlatRep,
                         PointEvaluator, WordEvaluator, boundary, ez_product)
from .graded import (GradedOperator, compose, exp_operator, flatten_operator,
                     graded_commutator, space_offsets, tensor_operator,
                     unflatten_matrix)
from .linalg import EXACT, FLOAT

DEFAULT_ORDER = 16
DEFAULT_SERIES_TOL = 1e-14
DEFAULT_SERIES_CAP = 60


# ---------------------------------------------------------------------------
# quadrature rules
# ---------------------------------------------------------------------------

def gauss_01(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def simplex_nodes(k: int, order: int):
    """Nested rule on 1 >= t_1 >= ... >= t_k >= 0: t_j = u_j t_{j-1}."""
    x, w = gauss_01(order)
    idx = np.stack(np.meshgrid(*([np.arange(order)] * k), indexing="ij"),
                   axis=-1).reshape(-1, k)
    u = x[idx]
    t = np.cumprod(u, axis=1)
    weights = np.prod(w[idx], axis=1)
    if k > 1:
        weights = weights * np.prod(t[:, :-1], axis=1)
    return t, weights


def cube_nodes(k: int, order: int):
    x, w = gauss_01(order)
    idx = np.stack(np.meshgrid(*([np.arange(order)] * k), indexing="ij"),
                   axis=-1).reshape(-1, k)
    return x[idx], np.prod(w[idx], axis=1)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def density_batch(flat: FlatRep, data) -> np.ndarray:
    """rho(t) o B(xi_1) o ... o B(xi_k) at every point of a batch."""
    out = data.rho
    for j in range(data.xi.shape[1]):
        out = np.matmul(out, flat.contraction_of(data.xi[:, j, :]))
    return out


def eval_form(flat: FlatRep, ev: Evaluator, point) -> GradedOperator:
    """Pullback density of the representation form at one parameter point."""
    data = ev.at(point)
    return flat.unflatten(density_batch(flat, data)[0], -ev.k)


def pullback_word_closed(rep, letters, point) -> GradedOperator:
    """Closed form of the word pullback: B_1 e^{t_1 A_1} ... B_k e^{t_k A_k}."""
    out = None
    for x, t in zip(letters, point):
        factor = compose(rep.B_of(x), exp_operator(rep.L_of(x), t))
        out = factor if out is None else compose(out, factor)
    if out is None:
        return GradedOperator.identity(rep.complex.space, rep.mode)
    return out


# ---------------------------------------------------------------------------
# the integrals
# ---------------------------------------------------------------------------

def integrate_quadrature(flat: FlatRep, ev: Evaluator, order: int = DEFAULT_ORDER,
                         domain: str = None) -> GradedOperator:
    """Iterated Gauss-Legendre integral of the pullback density."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if ev.k == 0:
        return flat.unflatten(ev.eval(np.zeros((1, 0))).rho[0], 0)
    domain = domain or ev.domain
    nodes, weights = (simplex_nodes if domain == "simplex" else cube_nodes)(ev.k, order)
    data = ev.eval(nodes)
    dens = density_batch(flat, data)
    return flat.unflatten(np.einsum("p,pab->ab", weights, dens), -ev.k)


def integrate_chain(flat: FlatRep, chain: ChainCombination, order: int = DEFAULT_ORDER) -> GradedOperator:
    out = None
    for coef, ev in chain.terms:
        piece = float(coef) * integrate_quadrature(flat, ev, order)
        out = piece if out is None else out + piece
    if out is None:
        raise ValueError("cannot integrate an empty chain")
    return out


def compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def series_coefficient(js, exact: bool):
    """1 / (j_1! ... j_k! (j_k+1)(j_k+j_{k-1}+2) ... (j_k+...+j_1+k))."""
    denom = 1
    for j in js:
        denom *= factorial(j)
    suffix = 0
    for l, j in enumerate(reversed(js), start=1):
        suffix += j
        denom *= suffix + l
    return Fraction(1, denom) if exact else 1.0 / denom


def integrate_series(rep, letters, tol: float = DEFAULT_SERIES_TOL,
                     max_degree: int = DEFAULT_SERIES_CAP) -> GradedOperator:
    """Sum of B_1 A_1^{j_1} ... B_k A_k^{j_k} with the simplex moment
    coefficients; terminates exactly on nilpotent exact inputs."""
    k = len(letters)
    space = rep.complex.space
    mode = rep.mode
    if k == 0:
        return GradedOperator.identity(space, mode)
    offsets, total = space_offsets(space)
    A = [flatten_operator(rep.L_of(x)) for x in letters]
    B = [flatten_operator(rep.B_of(x)) for x in letters]
    if mode == EXACT:
        caps = []
        for a in A:
            nil = linalg.nilpotency_index(a)
            if nil is None:
                raise linalg.ModeError("series does not terminate: action not nilpotent")
            caps.append(nil - 1)
        top = sum(caps)
    else:
        caps = [max_degree] * k
        top = max_degree
    powers = []
    for i in range(k):
        ps = [B[i]]
        for m in range(1, caps[i] + 1):
            ps.append(ps[-1].dot(A[i]))
        powers.append(ps)        # powers[i][j] = B_i A_i^j
    acc = linalg.zeros((total, total), mode)
    for layer in range(0, top + 1):
        layer_sum = linalg.zeros((total, total), mode)
        hit = False
        for js in compositions(layer, k):
            if any(j > caps[i] for i, j in enumerate(js)):
                continue
            hit = True
            term = powers[0][js[0]]
            for i in range(1, k):
                term = term.dot(powers[i][js[i]])
            layer_sum = layer_sum + series_coefficient(js, mode == EXACT) * term
        acc = acc + layer_sum
        if mode == FLOAT:
            if linalg.max_abs(layer_sum) < tol * (1.0 + linalg.max_abs(acc)) and layer >= 1:
                return unflatten_matrix(space, acc, -k, mode)
            if not hit:
                break
        elif not hit:
            break
    if mode == FLOAT and top >= max_degree:
        raise RuntimeError(f"series did not converge within total degree {max_degree}")
    return unflatten_matrix(space, acc, -k, mode)


# ---------------------------------------------------------------------------
# exact polynomial route (nilpotent case)
# ---------------------------------------------------------------------------

class MatPoly:
    """Polynomial in one variable with matrix coefficients."""

    def __init__(self, coeffs):
        self.coeffs = [np.asarray(c) for c in coeffs]

    @classmethod
    def constant(cls, mat):
        return cls([mat])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for m in range(n):
            a = self.coeffs[m] if m < len(self.coeffs) else None
            b = other.coeffs[m] if m < len(other.coeffs) else None
            out.append(b if a is None else a if b is None else a + b)
        return MatPoly(out)

    def dot(self, other):
        shape = (self.coeffs[0].shape[0], other.coeffs[0].shape[1])
        out = [linalg.zeros(shape, EXACT)
               for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a.dot(b)
        return MatPoly(out)

    def integrate_01(self):
        total = linalg.zeros(self.coeffs[0].shape, EXACT)
        for m, c in enumerate(self.coeffs):
            total = total + Fraction(1, m + 1) * c
        return total

    def antiderivative(self):
        """s -> integral from 0 to s, as a polynomial."""
        out = [linalg.zeros(self.coeffs[0].shape, EXACT)]
        for m, c in enumerate(self.coeffs):
            out.append(Fraction(1, m + 1) * c)
        return MatPoly(out)


def exp_poly(a, scale=Fraction(1)) -> MatPoly:
    """exp(scale * s * a) as a terminating matrix polynomial in s."""
    a = np.asarray(a)
    n = a.shape[0]
    coeffs = [linalg.eye(n, EXACT)]
    term = linalg.eye(n, EXACT)
    for m in range(1, 2 * n + 2):
        term = term.dot(a) * Fraction(scale, m)
        if linalg.is_zero(term):
            return MatPoly(coeffs)
        coeffs.append(term)
    raise linalg.ModeError("polynomial exponential does not terminate")


def merged_pair_integral_exact(rep, x, y) -> GradedOperator:
    """Exact integral over [0,1] of the pullback along s -> exp(sx) exp(sy)."""
    mode = rep.mode
    if mode != EXACT:
        raise linalg.ModeError("exact route requires exact mode")
    space = rep.complex.space
    ax = flatten_operator(rep.L_of(x))
    ay = flatten_operator(rep.L_of(y))
    n = rep.algebra.n
    offsets, total = space_offsets(space)
    rho = exp_poly(ax).dot(exp_poly(ay))
    ad_neg_y = exp_poly(rep.algebra.ad(rep.algebra.vector(list(y))), Fraction(-1))
    # xi(s) = Ad_{exp(-s y)} x + y, coefficientwise through the B action
    b_flat = [flatten_operator(op) for op in rep.B]
    bxi_coeffs = []
    for m, c in enumerate(ad_neg_y.coeffs):
        vec = c.dot(np.asarray(x))
        if m == 0:
            vec = vec + np.asarray(y)
        mat = linalg.zeros((total, total), EXACT)
        for i in range(n):
            if vec[i] != 0:
                mat = mat + vec[i] * b_flat[i]
        bxi_coeffs.append(mat)
    density = rho.dot(MatPoly(bxi_coeffs))
    return unflatten_matrix(space, density.integrate_01(), -1, EXACT)


def point_value(rep, prefix) -> GradedOperator:
    """Operator value of the group element exp(x_1) ... exp(x_m)."""
    out = GradedOperator.identity(rep.complex.space, rep.mode)
    for x in prefix:
        out = compose(out, exp_operator(rep.L_of(x)))
    return out


def word_integral_polynomial_exact(rep, letters) -> GradedOperator:
    """Exact word integral by iterated polynomial antiderivatives.

    Independent of the coefficient series: integrates the terminating
    polynomial density one nested variable at a time.  Exact mode
    (nilpotent actions) only.
    """
    if rep.mode != EXACT:
        raise linalg.ModeError("polynomial route requires exact mode")
    space = rep.complex.space
    k = len(letters)
    if k == 0:
        return GradedOperator.identity(space, EXACT)
    _, total = space_offsets(space)
    inner = None
    for x in reversed(letters):
        factor = exp_poly(flatten_operator(rep.L_of(x))).dot(
            MatPoly.constant(flatten_operator(rep.B_of(x))))
        inner = factor if inner is None else factor.dot(inner)
        inner = inner.antiderivative()
    total_mat = linalg.zeros((total, total), EXACT)
    for c in inner.coeffs:
        total_mat = total_mat + c
    return unflatten_matrix(space, total_mat, -k, EXACT)


def dg_module_exact(rep, letters):
    """Exact boundary-vs-commutator residual for words of length 1 or 2."""
    k = len(letters)
    if k not in (1, 2):
        raise ValueError("exact route implemented for words of length 1 and 2")
    action = integrate_series(rep, letters)
    rhs = graded_commutator(rep.complex.differential, action)
    if k == 1:
        lhs = point_value(rep, [letters[0]]) - point_value(rep, [])
    else:
        x, y = letters
        front = compose(point_value(rep, [x]), integrate_series(rep, [y]))
        merged = merged_pair_integral_exact(rep, x, y)
        back = integrate_series(rep, [x])
        lhs = front - merged + back
    return (lhs - rhs).norm()


# ---------------------------------------------------------------------------
# law checks
# ---------------------------------------------------------------------------

def dg_module_residual(flat: FlatRep, letters, order: int = DEFAULT_ORDER) -> float:
    """|| integral over the boundary - [d, integral] || for a word."""
    ev = WordEvaluator(flat, letters)
    action = integrate_quadrature(flat, ev, order)
    bd = integrate_chain(flat, boundary(ev), order)
    rhs = graded_commutator(flat.rep.complex.differential, action)
    return (bd - rhs).norm()


def multiplicativity_residual(flat: FlatRep, left_letters, right_letters,
                              order: int = DEFAULT_ORDER) -> float:
    """Shuffle product of two words must act as the composition."""
    lev = WordEvaluator(flat, left_letters)
    rev = WordEvaluator(flat, right_letters)
    chain = ez_product(lev, rev)
    lhs = integrate_chain(flat, chain, order)
    rhs = compose(integrate_quadrature(flat, lev, order),
                         integrate_quadrature(flat, rev, order))
    return (lhs - rhs).norm()


def vanishing_norm(flat: FlatRep, ev: Evaluator, order: int = DEFAULT_ORDER) -> float:
    return integrate_quadrature(flat, ev, order).norm()


def equivariance_residual(flat: FlatRep, letters, prefix, samples=None) -> float:
    """Density after left translation minus the translated density."""
    from .evaluators import interior_points
    base = WordEvaluator(flat, letters)
    moved = WordEvaluator(flat, letters, prefix=prefix)
    pts = samples if samples is not None else interior_points(len(letters))
    d0 = density_batch(flat, base.eval(pts))
    d1 = density_batch(flat, moved.eval(pts))
    rho_g = PointEvaluator(flat, prefix=prefix).value()
    return float(np.max(np.abs(d1 - np.matmul(rho_g, d0))))


def mu_p_residual(flat: FlatRep, factors, tangents, base_points=None) -> float:
    """Pullback along p-fold multiplication versus the signed sum of
    blockwise products, evaluated on generic tangents of the product.

    ``factors``: list of letter lists (one word per factor).
    ``tangents``: array (k, p, n) of left tangent coordinates.
    """
    tangents = np.asarray(tangents, dtype=float)
    k, p, n = tangents.shape
    if base_points is None:
        base_points = [np.full(len(w), 0.4 + 0.11 * l)[: len(w)] for l, w in enumerate(factors)]
    evs = [WordEvaluator(flat, w) for w in factors]
    datas = [ev.eval(np.asarray(pt, dtype=float).reshape(1, -1)) for ev, pt in zip(evs, base_points)]
    rhos = [d.rho[0] for d in datas]
    ad_invs = [d.ad_inv[0] for d in datas]
    # suffix conjugators: Ad of the inverse of the product of later factors
    conj = [None] * p
    suffix = np.eye(n)
    for l in range(p - 1, -1, -1):
        conj[l] = suffix
        suffix = suffix.dot(ad_invs[l])
    # left side: everything pushed to the product point
    eta = np.einsum("lab,klb->ka", np.stack(conj), tangents)
    lhs = rhos[0]
    for l in range(1, p):
        lhs = lhs.dot(rhos[l])
    for m in range(k):
        lhs = lhs.dot(flat.contraction_of(eta[m]))
    # right side: sum over assignments of tangent slots to factors
    rhs = np.zeros_like(lhs)
    for labels in iter_product(range(p), repeat=k):
        blocks = [[m for m in range(k) if labels[m] == l] for l in range(p)]
        seq = [m for block in blocks for m in block]
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if seq[a] > seq[b])
        term = None
        for l in range(p):
            piece = rhos[l]
            for m in blocks[l]:
                piece = piece.dot(flat.contraction_of(tangents[m, l]))
            term = piece if term is None else term.dot(piece)
        rhs = rhs + ((-1) ** inv) * term
    return float(np.max(np.abs(lhs - rhs)))


# ---------------------------------------------------------------------------
# the induced chain module and its differentiation
# ---------------------------------------------------------------------------

class ChainModule:
    """Module over group chains induced by integrating a representation."""

    def __init__(self, rep, order: int = DEFAULT_ORDER,
                 series_tol: float = DEFAULT_SERIES_TOL, use_series: bool = True):
        self.rep = rep
        self.order = order
        self.series_tol = series_tol
        self.use_series = use_series
        self.flat = FlatRep(rep) if rep.mode == FLOAT else None

    @property
    def complex(self):
        return self.rep.complex

    @property
    def algebra(self):
        return self.rep.algebra

    def act_word(self, letters) -> GradedOperator:
        if self.use_series or self.flat is None:
            return integrate_series(self.rep, letters, self.series_tol)
        return integrate_quadrature(self.flat, WordEvaluator(self.flat, letters), self.order)

    def act_point(self, prefix) -> GradedOperator:
        if self.flat is None:
            return point_value(self.rep, prefix)
        return self.flat.unflatten(PointEvaluator(self.flat, prefix=prefix).value(), 0)

    def act(self, target) -> GradedOperator:
        if isinstance(target, ChainCombination):
            return integrate_chain(self.flat, target, self.order)
        return integrate_quadrature(self.flat, target, self.order)


def differentiate_module(module, h: float, richardson: bool = False):
    """Recover the infinitesimal operators from a chain module by central
    differences on one-parameter words and points."""
    from .reps import CartanRep
    algebra = module.algebra
    n = algebra.n

    def central(act, i, step):
        e = algebra.basis_vector(i, FLOAT)
        return (1.0 / (2.0 * step)) * (act([step * e]) - act([-step * e]))

    def at_step(step):
        L = [central(module.act_point, i, step) for i in range(n)]
        B = [central(module.act_word, i, step) for i in range(n)]
        return L, B

    L, B = at_step(h)
    if richardson:
        L2, B2 = at_step(h / 2.0)
        L = [(1.0 / 3.0) * (4.0 * a2 - a) for a, a2 in zip(L, L2)]
        B = [(1.0 / 3.0) * (4.0 * b2 - b) for b, b2 in zip(B, B2)]
    return CartanRep(algebra, module.complex, L, B)



def roundtrip_errors(rep, h: float, series_tol: float = DEFAULT_SERIES_TOL):
    """Max entrywise recovery error of differentiation after integration,
    at steps h and h/2."""
    module = ChainModule(rep, series_tol=series_tol)

    def err(step):
        rec = differentiate_module(module, step)
        worst = 0.0
        for a, b in zip(rec.L, rep.L):
            worst = max(worst, (a - b).norm())
        for a, b in zip(rec.B, rep.B):
            worst = max(worst, (a - b).norm())
        return worst

    e1 = err(h)
    e2 = err(h / 2.0)
    return e1, e2, (e1 / e2 if e2 > 0 else float("inf"))


# ---------------------------------------------------------------------------
# front/back coproduct compatibility on tensor products
# ---------------------------------------------------------------------------

class AWTensorModule:
    """Chain module on a tensor product assembled through front/back word
    splits of the coproduct (one integrated factor per side)."""

    def __init__(self, rep_a, rep_b, series_tol: float = DEFAULT_SERIES_TOL):
        from .reps import tensor_rep
        self.rep_a = rep_a
        self.rep_b = rep_b
        self.series_tol = series_tol
        self.tensor = tensor_rep(rep_a, rep_b)
        self.algebra = rep_a.algebra

    @property
    def complex(self):
        return self.tensor.complex

    def act_word(self, letters) -> GradedOperator:
        from .evaluators import aw_coproduct_word
        out = None
        for front, back, prefix in aw_coproduct_word(letters):
            op_a = integrate_series(self.rep_a, front, self.series_tol)
            op_b = integrate_series(self.rep_b, back, self.series_tol)
            if prefix:
                op_b = compose(point_value(self.rep_b, prefix), op_b)
            piece = tensor_operator(op_a, op_b)
            out = piece if out is None else out + piece
        return out

    def act_point(self, prefix) -> GradedOperator:
        return tensor_operator(point_value(self.rep_a, prefix),
                               point_value(self.rep_b, prefix))


def aw_monoidality_residual(rep_a, rep_b, h: float = 1e-3) -> float:
    """Differentiating the front/back coproduct action recovers the tensor
    representation; max recovery error over all generators."""
    module = AWTensorModule(rep_a, rep_b)
    recovered = differentiate_module(module, h, richardson=True)
    worst = 0.0
    for a, b in zip(recovered.L, module.tensor.L):
        worst = max(worst, (a - b).norm())
    for a, b in zip(recovered.B, module.tensor.B):
        worst = max(worst, (a - b).norm())
    return worst


def aw_tensor_residual(rep_a, rep_b, letters, series_tol: float = DEFAULT_SERIES_TOL) -> float:
    """Action of a word on a tensor product through front/back splits
    versus the direct action of the tensor representation.

    The two sides agree to first order (differentiation recovers the same
    tensor representation; see ``aw_monoidality_residual``) but differ at
    higher order whenever the degree-0 actions are nonzero: the coproduct
    route is a chain-level module that is not subdivision invariant, so
    it is not the integral of the tensor representation form."""
    module = AWTensorModule(rep_a, rep_b, series_tol)
    direct = integrate_series(module.tensor, letters, series_tol)
    return (module.act_word(letters) - direct).norm()

