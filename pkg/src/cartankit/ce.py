"""Chevalley-Eilenberg cochain and chain complexes with coefficients.

Basis elements are pairs (index subset, coefficient basis vector); the
subsets are ordered lexicographically.  One shared insertion-sign
routine drives the hat-omission bookkeeping of both flavors.  Chain
degrees are re-indexed so that every differential raises degree by one:
exterior degree m sits in cochain degree -m (plus coefficient degree).
"""

from fractions import Fraction
from itertools import combinations

from . import linalg
from .graded import CochainComplex, GradedOperator, GradedVectorSpace
from .linalg import EXACT


def insert_element(subset, r):
    """Wedge e_r into sorted ``subset``: (sign, new subset) or None."""
    if r in subset:
        return None
    pos = sum(1 for s in subset if s < r)
    return (-1) ** pos, tuple(sorted(subset + (r,)))


def remove_element(subset, r):
    """Contract e_r out of sorted ``subset``: (sign, new subset) or None."""
    if r not in subset:
        return None
    pos = subset.index(r)
    return (-1) ** pos, tuple(s for s in subset if s != r)


def merge_sign(left, right):
    """Sign of sorting the concatenation of two disjoint sorted subsets."""
    if set(left) & set(right):
        return None
    inv = sum(1 for s in left for t in right if s > t)
    return (-1) ** inv, tuple(sorted(left + right))


class CEBasis:
    """Enumerates (subset, coeff degree, coeff index) by total degree."""

    def __init__(self, n, coeff_space, flavor):
        if flavor not in ("cochain", "chain"):
            raise ValueError("flavor must be 'cochain' or 'chain'")
        self.n = n
        self.flavor = flavor
        sign = 1 if flavor == "cochain" else -1
        table = {}
        for m in range(n + 1):
            for subset in combinations(range(n), m):
                for q in sorted(coeff_space.dims):
                    for i in range(coeff_space.dim(q)):
                        table.setdefault(sign * m + q, []).append((subset, q, i))
        self.elements = {deg: sorted(items, key=lambda e: (len(e[0]), e[0], e[1], e[2]))
                         for deg, items in table.items()}
        self.index = {deg: {e: pos for pos, e in enumerate(items)}
                      for deg, items in self.elements.items()}
        self.space = GradedVectorSpace({deg: len(items) for deg, items in self.elements.items()})

    def degree_of(self, element):
        subset, q, _ = element
        m = len(subset)
        return (m if self.flavor == "cochain" else -m) + q


class CEComplex:
    """Assembled complex plus its basis labeling."""

    def __init__(self, flavor, algebra, coefficients, complex_, basis):
        self.flavor = flavor
        self.algebra = algebra
        self.coefficients = coefficients
        self.complex = complex_
        self.basis = basis

    @property
    def differential(self):
        return self.complex.differential


def _coefficient_columns(block, i):
    """Expand column i of a degree-0 or degree +1 block into [(row, coeff)]."""
    if block is None or block.size == 0:
        return []
    col = block[:, i]
    return [(j, col[j]) for j in range(len(col)) if col[j] != 0]


def _assemble(basis, image_of, mode):
    """Build the degree +1 differential from a basis-element image map."""
    blocks = {}
    for deg, elements in basis.elements.items():
        tgt = basis.elements.get(deg + 1, [])
        if not elements or not tgt:
            continue
        block = linalg.zeros((len(tgt), len(elements)), mode)
        tgt_index = basis.index[deg + 1]
        for col, element in enumerate(elements):
            for target, coeff in image_of(element).items():
                block[tgt_index[target], col] += coeff
        blocks[deg] = block
    return GradedOperator(basis.space, basis.space, 1, blocks, mode=mode)


def ce_chain(algebra, rep) -> CEComplex:
    """Homological complex on the exterior algebra tensor the coefficients."""
    n = algebra.n
    mode = rep.mode
    c = algebra.constants(mode)
    basis = CEBasis(n, rep.complex.space, "chain")

    def image_of(element):
        subset, q, i = element
        m = len(subset)
        out = {}

        def add(key, coeff):
            if coeff != 0:
                out[key] = out.get(key, 0) + coeff

        for a in range(m):          # positions are 1-based in the sign rules
            for b in range(a + 1, m):
                sa, sb = subset[a], subset[b]
                rest = tuple(s for s in subset if s not in (sa, sb))
                for r in range(n):
                    if c[sa, sb, r] == 0:
                        continue
                    ins = insert_element(rest, r)
                    if ins is None:
                        continue
                    sgn, tgt = ins
                    add((tgt, q, i), (-1) ** (a + b + 1) * sgn * c[sa, sb, r])
        for a in range(m):
            rest = tuple(s for s in subset if s != subset[a])
            for j, coeff in _coefficient_columns(rep.action(subset[a]).blocks.get(q), i):
                add((rest, q, j), (-1) ** a * coeff)
        for j, coeff in _coefficient_columns(rep.complex.differential.blocks.get(q), i):
            add((subset, q + 1, j), (-1) ** m * coeff)
        return out

    diff = _assemble(basis, image_of, mode)
    return CEComplex("chain", algebra, rep, CochainComplex(basis.space, diff), basis)


def ce_cochain(algebra, rep) -> CEComplex:
    """Cochain complex of alternating forms with values in the coefficients."""
    n = algebra.n
    mode = rep.mode
    c = algebra.constants(mode)
    basis = CEBasis(n, rep.complex.space, "cochain")

    def image_of(element):
        subset, q, i = element
        m = len(subset)
        out = {}

        def add(key, coeff):
            if coeff != 0:
                out[key] = out.get(key, 0) + coeff

        for tgt_subset in combinations(range(n), m + 1):
            for a in range(m + 1):
                for b in range(a + 1, m + 1):
                    ta, tb = tgt_subset[a], tgt_subset[b]
                    rest = tuple(s for s in tgt_subset if s not in (ta, tb))
                    for r in range(n):
                        if c[ta, tb, r] == 0:
                            continue
                        ins = insert_element(rest, r)
                        if ins is None or ins[1] != subset:
                            continue
                        add((tgt_subset, q, i), (-1) ** (a + b) * ins[0] * c[ta, tb, r])
            for a in range(m + 1):
                if tuple(s for s in tgt_subset if s != tgt_subset[a]) != subset:
                    continue
                for j, coeff in _coefficient_columns(rep.action(tgt_subset[a]).blocks.get(q), i):
                    add((tgt_subset, q, j), (-1) ** a * coeff)
        for j, coeff in _coefficient_columns(rep.complex.differential.blocks.get(q), i):
            add((subset, q + 1, j), (-1) ** m * coeff)
        return out

    diff = _assemble(basis, image_of, mode)
    return CEComplex("cochain", algebra, rep, CochainComplex(basis.space, diff), basis)


def cohomology_dims(complex_: CochainComplex, tol=linalg.DEFAULT_TOL):
    """dim ker - dim im per degree, by exact or SVD rank."""
    diff = complex_.differential
    ranks = {k: linalg.rank(b, tol) for k, b in diff.blocks.items() if b.size}
    out = {}
    for k in complex_.space.degrees:
        out[k] = complex_.space.dim(k) - ranks.get(k, 0) - ranks.get(k - 1, 0)
    return out


def wedge(left_vec, right_vec):
    """Wedge of basis-dicts {(subset,q,i): coeff}; left factor is scalar-valued."""
    out = {}
    for (s, _, _), cl in left_vec.items():
        for (t, q, i), cr in right_vec.items():
            merged = merge_sign(s, t)
            if merged is None:
                continue
            sgn, u = merged
            key = (u, q, i)
            out[key] = out.get(key, 0) + sgn * cl * cr
    return {k: v for k, v in out.items() if v != 0}


def _apply_diff(ce, vec):
    """Differential of a basis-dict, via the assembled matrix."""
    out = {}
    for element, coeff in vec.items():
        deg = ce.basis.degree_of(element)
        col = ce.basis.index[deg][element]
        block = ce.differential.blocks.get(deg)
        if block is None or block.size == 0:
            continue
        for row, target in enumerate(ce.basis.elements[deg + 1]):
            v = block[row, col]
            if v != 0:
                out[target] = out.get(target, 0) + coeff * v
    return {k: v for k, v in out.items() if v != 0}


def leibniz_check(algebra, rep, max_total_degree=3):
    """Max residual of d(a b) = (da) b + (-1)^|a| a (db) over basis pairs."""
    from .reps import trivial_lie_rep
    scalar = ce_cochain(algebra, trivial_lie_rep(algebra, mode=rep.mode))
    full = ce_cochain(algebra, rep)
    worst = Fraction(0) if rep.mode == EXACT else 0.0
    for p in range(algebra.n + 1):
        for eta in scalar.basis.elements.get(p, []):
            d_eta = _apply_diff(scalar, {eta: 1})
            for q_deg, omegas in full.basis.elements.items():
                if p + q_deg > max_total_degree:
                    continue
                for omega in omegas:
                    d_omega = _apply_diff(full, {omega: 1})
                    lhs = _apply_diff(full, wedge({eta: 1}, {omega: 1}))
                    rhs = wedge(d_eta, {omega: 1})
                    for key, val in wedge({eta: 1}, d_omega).items():
                        rhs[key] = rhs.get(key, 0) + (-1) ** p * val
                    keys = set(lhs) | set(rhs)
                    for key in keys:
                        worst = max(worst, abs(lhs.get(key, 0) - rhs.get(key, 0)))
    return worst
