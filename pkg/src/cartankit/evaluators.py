"""Simplex and cube evaluators for group words and their derived chains.

An evaluator represents a smooth map from the standard simplex
{1 >= t_1 >= ... >= t_k >= 0} (or the unit cube) into the group, seen
through a representation: at each parameter point it produces the
operator value of the group element, the adjoint matrix of that element,
and the left-translated partial derivatives.  Word evaluators realize
t -> exp(t_1 x_1) ... exp(t_k x_k); everything else (faces, shuffles,
coordinate permutations, axis splits, the cube-to-simplex collapse) is
built compositionally from them.

Evaluation is batched: ``eval(T)`` takes an array of points of shape
(P, k) and returns stacked arrays.  Float mode only; exact-mode
integration goes through the series and polynomial routes instead.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .graded import GradedOperator
from .linalg import FLOAT


def as_points(points, k: int) -> np.ndarray:
    """Normalize to shape (P, k); handles the k = 0 corner."""
    arr = np.asarray(points, dtype=float)
    if k == 0:
        p = arr.shape[0] if arr.ndim == 2 else 1
        return np.zeros((p, 0))
    return arr.reshape(-1, k)


@dataclass
class PointData:
    """Batched evaluator output."""

    rho: np.ndarray       # (P, N, N) operator values
    ad: np.ndarray        # (P, n, n) adjoint matrices
    ad_inv: np.ndarray    # (P, n, n)
    xi: np.ndarray        # (P, k, n) left-translated tangents


class FlatRep:
    """A representation of the Cartan DG Lie algebra flattened to total
    matrices over the direct sum of all degrees, for fast batch work."""

    def __init__(self, rep):
        if rep.mode != FLOAT:
            raise linalg.ModeError("flat representations are float-mode only")
        self.rep = rep
        self.algebra = rep.algebra
        space = rep.complex.space
        self.space = space
        self.degrees = space.degrees
        self.offsets = {}
        pos = 0
        for k in self.degrees:
            self.offsets[k] = pos
            pos += space.dim(k)
        self.total_dim = pos
        self.delta = self._flatten(rep.complex.differential)
        self.L = [self._flatten(op) for op in rep.L]
        self.B = np.stack([self._flatten(op) for op in rep.B]) if rep.B else None
        self._exp_cache = {}

    def _flatten(self, op: GradedOperator) -> np.ndarray:
        out = np.zeros((self.total_dim, self.total_dim))
        for k, b in op.blocks.items():
            if not b.size:
                continue
            r = self.offsets.get(k + op.degree)
            c = self.offsets.get(k)
            if r is None or c is None:
                continue
            out[r:r + b.shape[0], c:c + b.shape[1]] = b
        return out

    def unflatten(self, mat: np.ndarray, degree: int) -> GradedOperator:
        blocks = {}
        for k in self.degrees:
            kk = k + degree
            if kk not in self.offsets:
                continue
            r, c = self.offsets[kk], self.offsets[k]
            blocks[k] = np.array(mat[r:r + self.space.dim(kk), c:c + self.space.dim(k)])
        return GradedOperator(self.space, self.space, degree, blocks, mode=FLOAT)

    def operator_of(self, x) -> np.ndarray:
        """Total matrix of the degree-0 action of the algebra element x."""
        out = np.zeros((self.total_dim, self.total_dim))
        for i, xi in enumerate(np.asarray(x, dtype=float)):
            if xi:
                out = out + xi * self.L[i]
        return out

    def contraction_of(self, xs) -> np.ndarray:
        """Batched degree-(-1) action: xs has shape (..., n)."""
        return np.einsum("...i,ijk->...jk", np.asarray(xs, dtype=float), self.B)

    def exp_factors(self, x):
        """Taylor data for t -> exp(t * action(x)), cached per letter."""
        key = tuple(np.asarray(x, dtype=float))
        if key not in self._exp_cache:
            self._exp_cache[key] = _TaylorExp(self.operator_of(x))
        return self._exp_cache[key]


class _TaylorExp:
    """exp(t A) over batches of t, by scaled Taylor polynomial + squaring."""

    def __init__(self, a: np.ndarray):
        norm = linalg.max_abs(a) * a.shape[0]
        self.squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 1 else 0
        scaled = a / (2.0 ** self.squarings)
        terms = [np.eye(a.shape[0])]
        m = 1
        while True:
            terms.append(terms[-1].dot(scaled) / m)
            if linalg.max_abs(terms[-1]) < 1e-20 or m > 60:
                break
            m += 1
        self.coeffs = np.stack(terms)          # (M, N, N)

    def at(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        powers = np.power.outer(t, np.arange(self.coeffs.shape[0]))
        out = np.einsum("pm,mij->pij", powers, self.coeffs)
        for _ in range(self.squarings):
            out = np.matmul(out, out)
        return out


def _ad_exp_factors(algebra, x):
    return _TaylorExp(linalg.as_float(algebra.ad(algebra.vector(list(x), FLOAT))))


class Evaluator:
    """Base class; subclasses fill in ``eval``."""

    k = 0
    domain = "simplex"

    def eval(self, points: np.ndarray) -> PointData:
        raise NotImplementedError

    def at(self, point) -> PointData:
        return self.eval(np.asarray([point], dtype=float).reshape(1, self.k))


class WordEvaluator(Evaluator):
    """t -> prefix * exp(t_1 x_1) ... exp(t_k x_k)."""

    def __init__(self, flat: FlatRep, letters, prefix=(), domain="simplex"):
        self.flat = flat
        self.letters = [np.asarray(x, dtype=float) for x in letters]
        self.prefix = [np.asarray(x, dtype=float) for x in prefix]
        self.k = len(self.letters)
        self.domain = domain
        self._exp = [flat.exp_factors(x) for x in self.letters]
        self._ad = [_ad_exp_factors(flat.algebra, x) for x in self.letters]
        rho0 = np.eye(flat.total_dim)
        n = flat.algebra.n
        ad0, ad0i = np.eye(n), np.eye(n)
        for x in self.prefix:
            rho0 = rho0.dot(flat.exp_factors(x).at(np.ones(1))[0])
            ad_fac = _ad_exp_factors(flat.algebra, x)
            ad0 = ad0.dot(ad_fac.at(np.ones(1))[0])
            ad0i = ad_fac.at(-np.ones(1))[0].dot(ad0i)
        self._rho0, self._ad0, self._ad0i = rho0, ad0, ad0i

    def eval(self, points: np.ndarray) -> PointData:
        points = as_points(points, self.k)
        p = points.shape[0]
        n = self.flat.algebra.n
        rho = np.broadcast_to(self._rho0, (p,) + self._rho0.shape).copy()
        ad = np.broadcast_to(self._ad0, (p, n, n)).copy()
        ad_inv = np.broadcast_to(self._ad0i, (p, n, n)).copy()
        neg_ads = []
        for j in range(self.k):
            t = points[:, j]
            rho = np.matmul(rho, self._exp[j].at(t))
            ad = np.matmul(ad, self._ad[j].at(t))
            neg_ads.append(self._ad[j].at(-t))
        # adjoint inverse: negative factors in reverse order, then the prefix
        ad_inv = np.broadcast_to(np.eye(n), (p, n, n)).copy()
        for j in range(self.k - 1, -1, -1):
            ad_inv = np.matmul(ad_inv, neg_ads[j])
        ad_inv = np.matmul(ad_inv, np.broadcast_to(self._ad0i, (p, n, n)))
        xi = np.zeros((p, self.k, n))
        tail = np.broadcast_to(np.eye(n), (p, n, n)).copy()
        for j in range(self.k - 1, -1, -1):
            xi[:, j, :] = np.einsum("pab,b->pa", tail, self.letters[j])
            tail = np.matmul(tail, neg_ads[j])
        return PointData(rho, ad, ad_inv, xi)


class PointEvaluator(Evaluator):
    """A zero-dimensional chain: the group element of a fixed word."""

    def __init__(self, flat: FlatRep, prefix=(), domain="simplex"):
        self._word = WordEvaluator(flat, [], prefix=prefix, domain=domain)
        self.flat = flat
        self.k = 0
        self.domain = domain

    def eval(self, points: np.ndarray) -> PointData:
        arr = np.asarray(points, dtype=float)
        p = arr.shape[0] if arr.ndim == 2 else 1
        return self._word.eval(np.zeros((p, 0)))

    def value(self) -> np.ndarray:
        return self._word.eval(np.zeros((1, 0))).rho[0]


class AffineReparam(Evaluator):
    """base o phi with phi(t) = matrix @ t + offset (componentwise affine)."""

    def __init__(self, base: Evaluator, matrix, offset, domain=None):
        self.base = base
        self.matrix = np.asarray(matrix, dtype=float)   # (base.k, k_new)
        self.offset = np.asarray(offset, dtype=float)   # (base.k,)
        self.k = self.matrix.shape[1]
        self.domain = domain or base.domain

    def eval(self, points: np.ndarray) -> PointData:
        points = as_points(points, self.k)
        up = points.dot(self.matrix.T) + self.offset
        data = self.base.eval(up)
        xi = np.einsum("jm,pjd->pmd", self.matrix, data.xi)
        return PointData(data.rho, data.ad, data.ad_inv, xi)


class PermReparam(Evaluator):
    """base o chi_* with chi_*(t)_j = t_{chi(j)}; pure index shuffling."""

    def __init__(self, base: Evaluator, perm):
        self.base = base
        self.perm = tuple(perm)
        self.k = base.k
        self.domain = base.domain

    def eval(self, points: np.ndarray) -> PointData:
        points = as_points(points, self.k)
        up = points[:, list(self.perm)]
        data = self.base.eval(up)
        xi = np.zeros_like(data.xi)
        for j, pj in enumerate(self.perm):
            xi[:, pj, :] += data.xi[:, j, :]
        return PointData(data.rho, data.ad, data.ad_inv, xi)


class MaxCollapseReparam(Evaluator):
    """base o P with P(t)_i = max(t_i, ..., t_k): cube onto the simplex."""

    def __init__(self, base: Evaluator):
        self.base = base
        self.k = base.k
        self.domain = "cube"

    def eval(self, points: np.ndarray) -> PointData:
        points = as_points(points, self.k)
        k = self.k
        up = np.maximum.accumulate(points[:, ::-1], axis=1)[:, ::-1]
        data = self.base.eval(up)
        # d y_i / d t_m = 1 exactly when m is the argmax of t_i..t_k
        xi = np.zeros_like(data.xi)
        rev = points[:, ::-1]
        argmax_rev = np.zeros((points.shape[0], k), dtype=int)
        best = np.full(points.shape[0], -np.inf)
        best_idx = np.zeros(points.shape[0], dtype=int)
        for pos in range(k):
            better = rev[:, pos] >= best
            best = np.where(better, rev[:, pos], best)
            best_idx = np.where(better, pos, best_idx)
            argmax_rev[:, pos] = best_idx
        argmax = (k - 1) - argmax_rev[:, ::-1]     # (P, k): argmax of t_i..t_k
        rows = np.arange(points.shape[0])[:, None]
        np.add.at(xi, (rows, argmax), data.xi)
        return PointData(data.rho, data.ad, data.ad_inv, xi)


class ProductEvaluator(Evaluator):
    """Pointwise group product of two evaluators along a shuffle split.

    Coordinates listed in ``left_slots`` feed the left factor (in order),
    the rest feed the right factor; tangents of the left factor are
    conjugated by the inverse adjoint of the right factor's value.
    """

    def __init__(self, left: Evaluator, right: Evaluator, left_slots):
        self.left = left
        self.right = right
        self.left_slots = tuple(left_slots)
        self.k = left.k + right.k
        self.right_slots = tuple(m for m in range(self.k) if m not in self.left_slots)
        if len(self.left_slots) != left.k:
            raise ValueError("slot count mismatch")
        self.domain = left.domain

    def eval(self, points: np.ndarray) -> PointData:
        points = as_points(points, self.k)
        lp = self.left.eval(points[:, list(self.left_slots)] if self.left.k else np.zeros((points.shape[0], 0)))
        rp = self.right.eval(points[:, list(self.right_slots)] if self.right.k else np.zeros((points.shape[0], 0)))
        rho = np.matmul(lp.rho, rp.rho)
        ad = np.matmul(lp.ad, rp.ad)
        ad_inv = np.matmul(rp.ad_inv, lp.ad_inv)
        xi = np.zeros((points.shape[0], self.k, lp.xi.shape[2] if lp.xi.size else rp.xi.shape[2]))
        if self.left.k:
            conj = np.einsum("pab,pjb->pja", rp.ad_inv, lp.xi)
            for a, m in enumerate(self.left_slots):
                xi[:, m, :] = conj[:, a, :]
        for b, m in enumerate(self.right_slots):
            xi[:, m, :] = rp.xi[:, b, :]
        return PointData(rho, ad, ad_inv, xi)


class TranslatedEvaluator(Evaluator):
    """Left translation by a fixed group word."""

    def __init__(self, base: Evaluator, flat: FlatRep, prefix):
        self.base = base
        self.k = base.k
        self.domain = base.domain
        point = WordEvaluator(flat, [], prefix=prefix).eval(np.zeros((1, 0)))
        self._rho = point.rho[0]
        self._ad = point.ad[0]
        self._ad_inv = point.ad_inv[0]

    def eval(self, points: np.ndarray) -> PointData:
        data = self.base.eval(points)
        return PointData(np.matmul(self._rho, data.rho),
                         np.matmul(self._ad, data.ad),
                         np.matmul(data.ad_inv, self._ad_inv),
                         data.xi)


@dataclass
class ChainCombination:
    """Formal combination of same-dimension evaluators."""

    terms: list = field(default_factory=list)

    def __post_init__(self):
        dims = {ev.k for _, ev in self.terms}
        if len(dims) > 1:
            raise ValueError("all terms must share one dimension")

    @property
    def k(self):
        return self.terms[0][1].k if self.terms else 0

    def __add__(self, other):
        return ChainCombination(self.terms + other.terms)

    def scaled(self, c):
        return ChainCombination([(c * coef, ev) for coef, ev in self.terms])


# ---------------------------------------------------------------------------
# chain-level operations
# ---------------------------------------------------------------------------

def face_map(k: int, i: int):
    """Affine data (matrix, offset) of the i-th face inclusion into the
    simplex with coordinates 1 >= t_1 >= ... >= t_k >= 0."""
    mat = np.zeros((k, k - 1))
    off = np.zeros(k)
    if i == 0:
        off[0] = 1.0
        for j in range(k - 1):
            mat[j + 1, j] = 1.0
    elif i == k:
        for j in range(k - 1):
            mat[j, j] = 1.0
    else:
        for j in range(k - 1):
            mat[j if j < i else j + 1, j] = 1.0
        mat[i, i - 1] = 1.0
    return mat, off


def boundary(ev: Evaluator) -> ChainCombination:
    """Alternating sum of the k+1 face evaluators."""
    if ev.k == 0:
        return ChainCombination([])
    terms = []
    for i in range(ev.k + 1):
        mat, off = face_map(ev.k, i)
        terms.append(((-1.0) ** i, AffineReparam(ev, mat, off)))
    return ChainCombination(terms)


def shuffles(r: int, s: int):
    """(permutation, sign) pairs for all (r, s)-shuffle splits."""
    from itertools import combinations
    out = []
    for left in combinations(range(r + s), r):
        right = tuple(m for m in range(r + s) if m not in left)
        perm = left + right
        inv = sum(1 for a in range(r + s) for b in range(a + 1, r + s)
                  if perm[a] > perm[b])
        out.append((perm, (-1) ** inv))
    return out


def ez_product(a, b) -> ChainCombination:
    """Shuffle product of chains: signed sum of pointwise products over
    all shuffle splits of the coordinates."""
    a = a if isinstance(a, ChainCombination) else ChainCombination([(1.0, a)])
    b = b if isinstance(b, ChainCombination) else ChainCombination([(1.0, b)])
    terms = []
    for ca, eva in a.terms:
        for cb, evb in b.terms:
            for perm, sign in shuffles(eva.k, evb.k):
                left_slots = perm[:eva.k]
                terms.append((ca * cb * sign, ProductEvaluator(eva, evb, left_slots)))
    return ChainCombination(terms)


def word_evaluator(flat: FlatRep, letters, prefix=(), domain="simplex") -> WordEvaluator:
    return WordEvaluator(flat, letters, prefix=prefix, domain=domain)


def aw_coproduct_word(letters):
    """Front/back splits of a word: [(front letters, back letters, prefix)]."""
    k = len(letters)
    return [(list(letters[:i]), list(letters[i:]), list(letters[:i])) for i in range(k + 1)]


def thinness_check(ev: Evaluator, samples=None, tol=1e-8) -> bool:
    """True when the tangent frame is rank deficient at every sample."""
    if ev.k == 0:
        return False
    pts = samples if samples is not None else interior_points(ev.k, ev.domain)
    data = ev.eval(np.asarray(pts, dtype=float))
    for xi in data.xi:
        s = np.linalg.svd(xi, compute_uv=False)
        smax = s[0] if s.size else 0.0
        rank = int(np.sum(s > tol * max(smax, 1.0)))
        if rank >= ev.k:
            return False
    return True


def interior_points(k: int, domain: str = "simplex"):
    """Small deterministic set of interior sample points."""
    seeds = [0.21, 0.47, 0.63, 0.82, 0.35]
    pts = []
    for shift in range(5):
        raw = [seeds[(shift + j) % len(seeds)] for j in range(k)]
        if domain == "simplex":
            raw = sorted(raw, reverse=True)
            raw = [v * (1 - 0.01 * j) for j, v in enumerate(raw)]
        pts.append(raw)
    return np.asarray(pts, dtype=float).reshape(-1, k)
