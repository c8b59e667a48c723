"""Representations of a Lie algebra and of its Cartan DG Lie algebra.

A ``LieRep`` is a cochain complex with commuting degree-0 operators, one
per basis vector of the algebra.  A ``CartanRep`` adds one degree-(-1)
operator per basis vector; ``cartan_residuals`` measures how far the
family is from satisfying the Cartan relations.  ``chain_rep`` and
``cochain_rep`` realize the two standard constructions on the
Chevalley-Eilenberg chain and cochain complexes (the first is left
adjoint to ``restrict``), and ``dual_rep``/``tensor_rep`` give the
monoidal structure.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import ce, linalg
from .graded import (CochainComplex, GradedOperator, GradedVectorSpace,
                     compose, dual_complex, graded_commutator, tensor_complex,
                     tensor_operator)
from .linalg import EXACT


class LieRep:
    """Representation of a Lie algebra on a cochain complex."""

    def __init__(self, algebra, complex_: CochainComplex, operators):
        self.algebra = algebra
        self.complex = complex_
        self.operators = list(operators)
        if len(self.operators) != algebra.n:
            raise ValueError("need one operator per basis vector")
        for op in self.operators:
            if op.degree != 0:
                raise ValueError("Lie algebra actions must have degree 0")

    @property
    def mode(self):
        return self.complex.mode

    def action(self, i: int) -> GradedOperator:
        return self.operators[i]

    def action_of(self, x) -> GradedOperator:
        out = GradedOperator.zero(self.complex.space, self.complex.space, 0, self.mode)
        for i, op in enumerate(self.operators):
            if x[i] != 0:
                out = out + x[i] * op
        return out

    def residuals(self):
        """Homomorphism + chain-map defects: max norms, keyed by family."""
        c = self.algebra.constants(self.mode)
        n = self.algebra.n
        worst_hom = 0.0
        for i in range(n):
            for j in range(n):
                lhs = graded_commutator(self.operators[i], self.operators[j])
                for k in range(n):
                    if c[i, j, k] != 0:
                        lhs = lhs - c[i, j, k] * self.operators[k]
                worst_hom = max(worst_hom, lhs.norm())
        worst_chain = max((graded_commutator(self.complex.differential, op).norm()
                           for op in self.operators), default=0.0)
        return {"bracket": worst_hom, "chain_map": worst_chain}


class CartanRep:
    """Representation of the Cartan DG Lie algebra: L_i degree 0, B_i degree -1."""

    def __init__(self, algebra, complex_: CochainComplex, L, B):
        self.algebra = algebra
        self.complex = complex_
        self.L = list(L)
        self.B = list(B)
        if len(self.L) != algebra.n or len(self.B) != algebra.n:
            raise ValueError("need one L and one B per basis vector")
        for op in self.L:
            if op.degree != 0:
                raise ValueError("L operators must have degree 0")
        for op in self.B:
            if op.degree != -1:
                raise ValueError("B operators must have degree -1")

    @property
    def mode(self):
        return self.complex.mode

    @property
    def differential(self):
        return self.complex.differential

    def L_of(self, x) -> GradedOperator:
        out = GradedOperator.zero(self.complex.space, self.complex.space, 0, self.mode)
        for i, op in enumerate(self.L):
            if x[i] != 0:
                out = out + x[i] * op
        return out

    def B_of(self, x) -> GradedOperator:
        out = GradedOperator.zero(self.complex.space, self.complex.space, -1, self.mode)
        for i, op in enumerate(self.B):
            if x[i] != 0:
                out = out + x[i] * op
        return out


@dataclass
class CartanReport:
    """Residuals of the four Cartan relation families."""

    LL: float
    LB: float
    BB: float
    dB: float

    @property
    def worst(self) -> float:
        return max(self.LL, self.LB, self.BB, self.dB)

    def passes(self, tol: float) -> bool:
        return self.worst <= tol


def cartan_residuals(rep: CartanRep) -> CartanReport:
    """Residuals of [L,L]=L, [L,B]=B, [B,B]=0 and [d,B]=L, as max norms."""
    c = rep.algebra.constants(rep.mode)
    n = rep.algebra.n
    r_ll = r_lb = r_bb = r_db = 0.0
    for i in range(n):
        for j in range(n):
            ll = graded_commutator(rep.L[i], rep.L[j])
            lb = graded_commutator(rep.L[i], rep.B[j])
            for k in range(n):
                if c[i, j, k] != 0:
                    ll = ll - c[i, j, k] * rep.L[k]
                    lb = lb - c[i, j, k] * rep.B[k]
            r_ll = max(r_ll, ll.norm())
            r_lb = max(r_lb, lb.norm())
            r_bb = max(r_bb, graded_commutator(rep.B[i], rep.B[j]).norm())
        db = graded_commutator(rep.differential, rep.B[i]) - rep.L[i]
        r_db = max(r_db, db.norm())
    return CartanReport(r_ll, r_lb, r_bb, r_db)


# ---------------------------------------------------------------------------
# basic constructions
# ---------------------------------------------------------------------------

def trivial_lie_rep(algebra, dim=1, degree=0, mode=EXACT) -> LieRep:
    complex_ = CochainComplex.concentrated(dim, degree, mode)
    zero = GradedOperator.zero(complex_.space, complex_.space, 0, mode)
    return LieRep(algebra, complex_, [zero] * algebra.n)


def trivial_cartan_rep(algebra, dim=1, degree=0, mode=EXACT) -> CartanRep:
    complex_ = CochainComplex.concentrated(dim, degree, mode)
    z0 = GradedOperator.zero(complex_.space, complex_.space, 0, mode)
    z1 = GradedOperator.zero(complex_.space, complex_.space, -1, mode)
    return CartanRep(algebra, complex_, [z0] * algebra.n, [z1] * algebra.n)


def adjoint_rep(algebra, mode=EXACT) -> LieRep:
    complex_ = CochainComplex.concentrated(algebra.n, 0, mode)
    space = complex_.space
    ops = []
    for i in range(algebra.n):
        ad = algebra.ad(algebra.basis_vector(i, mode))
        ops.append(GradedOperator(space, space, 0, {0: ad}, mode=mode))
    return LieRep(algebra, complex_, ops)


def restrict(rep: CartanRep) -> LieRep:
    """Forget the degree-(-1) operators."""
    return LieRep(rep.algebra, rep.complex, rep.L)


# ---------------------------------------------------------------------------
# the chain and cochain representations
# ---------------------------------------------------------------------------

def _wedge_operator(basis, n_target_shift, image_of, space, mode):
    blocks = {}
    for deg, elements in basis.elements.items():
        tgt = basis.elements.get(deg + n_target_shift, [])
        if not elements or not tgt:
            continue
        block = linalg.zeros((len(tgt), len(elements)), mode)
        tgt_index = basis.index[deg + n_target_shift]
        for col, element in enumerate(elements):
            for target, coeff in image_of(element).items():
                block[tgt_index[target], col] += coeff
        blocks[deg] = block
    return GradedOperator(space, space, n_target_shift, blocks, mode=mode)


def chain_rep(algebra, coefficients: LieRep) -> CartanRep:
    """Action on the CE chain complex: B wedges a generator at the front,
    L acts by the bracket on each slot plus the coefficient action."""
    cec = ce.ce_chain(algebra, coefficients)
    basis, space, mode = cec.basis, cec.complex.space, coefficients.mode
    n = algebra.n
    c = algebra.constants(mode)

    def b_image(idx):
        def image_of(element):
            subset, q, i = element
            ins = ce.insert_element(subset, idx)
            if ins is None:
                return {}
            sgn, tgt = ins
            return {(tgt, q, i): sgn * _one(mode)}
        return image_of

    def l_image(idx):
        def image_of(element):
            subset, q, i = element
            out = {}
            for pos, s in enumerate(subset):
                rest = tuple(x for x in subset if x != s)
                for r in range(n):
                    if c[idx, s, r] == 0:
                        continue
                    ins = ce.insert_element(rest, r)
                    if ins is None:
                        continue
                    sgn, tgt = ins
                    # replace slot ``pos`` by [e_idx, e_s], resorted
                    base = (-1) ** pos
                    key = (tgt, q, i)
                    out[key] = out.get(key, 0) + base * sgn * c[idx, s, r]
            block = coefficients.action(idx).blocks.get(q)
            if block is not None and block.size:
                for j in range(block.shape[0]):
                    if block[j, i] != 0:
                        key = (subset, q, j)
                        out[key] = out.get(key, 0) + block[j, i]
            return out
        return image_of

    B = [_wedge_operator(basis, -1, b_image(i), space, mode) for i in range(n)]
    L = [_wedge_operator(basis, 0, l_image(i), space, mode) for i in range(n)]
    return CartanRep(algebra, cec.complex, L, B)


def cochain_rep(algebra, coefficients: LieRep) -> CartanRep:
    """Action on the CE cochain complex: B contracts the form part only,
    L is the coadjoint action on forms plus the coefficient action."""
    cec = ce.ce_cochain(algebra, coefficients)
    basis, space, mode = cec.basis, cec.complex.space, coefficients.mode
    n = algebra.n
    c = algebra.constants(mode)

    def b_image(idx):
        def image_of(element):
            subset, q, i = element
            rem = ce.remove_element(subset, idx)
            if rem is None:
                return {}
            sgn, tgt = rem
            return {(tgt, q, i): sgn * _one(mode)}
        return image_of

    def l_image(idx):
        def image_of(element):
            subset, q, i = element
            out = {}
            # coadjoint: (L_x xi)(v_1..v_m) = -sum_j xi(v_1,..,[x,v_j],..,v_m)
            for s in subset:
                rest = tuple(x for x in subset if x != s)
                pos_sign, _ = ce.remove_element(subset, s)
                for r in range(n):
                    if r in rest:
                        continue
                    coeff = c[idx, r, s]
                    if coeff == 0:
                        continue
                    ins_sign, tgt = ce.insert_element(rest, r)
                    key = (tgt, q, i)
                    out[key] = out.get(key, 0) - pos_sign * ins_sign * coeff
            block = coefficients.action(idx).blocks.get(q)
            if block is not None and block.size:
                for j in range(block.shape[0]):
                    if block[j, i] != 0:
                        key = (subset, q, j)
                        out[key] = out.get(key, 0) + block[j, i]
            return out
        return image_of

    B = [_wedge_operator(basis, -1, b_image(i), space, mode) for i in range(n)]
    L = [_wedge_operator(basis, 0, l_image(i), space, mode) for i in range(n)]
    return CartanRep(algebra, cec.complex, L, B)


def _one(mode):
    return Fraction(1) if mode == EXACT else 1.0


# ---------------------------------------------------------------------------
# tensor and dual
# ---------------------------------------------------------------------------

def tensor_rep(a: CartanRep, b: CartanRep) -> CartanRep:
    """Tensor product action: L by the Leibniz rule, B with the Koszul sign."""
    ida = GradedOperator.identity(a.complex.space, a.mode)
    idb = GradedOperator.identity(b.complex.space, b.mode)
    complex_ = tensor_complex(a.complex, b.complex)
    L = [tensor_operator(a.L[i], idb) + tensor_operator(ida, b.L[i])
         for i in range(a.algebra.n)]
    B = [tensor_operator(a.B[i], idb) + tensor_operator(ida, b.B[i])
         for i in range(a.algebra.n)]
    return CartanRep(a.algebra, complex_, L, B)


def dual_rep(rep: CartanRep) -> CartanRep:
    """Dual action, signs fixed by requiring the evaluation pairing
    V ox V* -> R (trivial module) to be a map of representations:
    L* = -L^T blockwise, B* and the dual differential pick up (-1)^q."""
    vc = rep.complex
    dc = dual_complex(vc)
    space = dc.space
    mode = rep.mode
    L, B = [], []
    for i in range(rep.algebra.n):
        lb, bb = {}, {}
        for q in space.degrees:
            bl = rep.L[i].blocks.get(-q)
            if bl is not None and bl.size:
                lb[q] = -1 * bl.T
            bbk = rep.B[i].blocks.get(-q + 1)
            if bbk is not None and bbk.size:
                bb[q] = ((-1) ** q) * bbk.T
        L.append(GradedOperator(space, space, 0, lb, mode=mode))
        B.append(GradedOperator(space, space, -1, bb, mode=mode))
    return CartanRep(rep.algebra, dc, L, B)


def evaluation_pairing_residual(rep: CartanRep) -> float:
    """How far V ox V* -> trivial is from intertwining all generators."""
    dual = dual_rep(rep)
    tensor = tensor_rep(rep, dual)
    pair = _pairing_functional(rep)
    worst = compose(pair, tensor.complex.differential).norm()
    for i in range(rep.algebra.n):
        worst = max(worst, compose(pair, tensor.L[i]).norm())
        worst = max(worst, compose(pair, tensor.B[i]).norm())
    return worst


def _pairing_functional(rep: CartanRep) -> GradedOperator:
    """ev: (V ox V*)^0 -> R, v ox phi -> phi(v)."""
    from .graded import tensor_basis_index, tensor_space, dual_space
    vs = rep.complex.space
    ds = dual_space(vs)
    ts = tensor_space(vs, ds)
    target = GradedVectorSpace({0: 1})
    mode = rep.mode
    block = linalg.zeros((1, ts.dim(0)), mode)
    for p in vs.degrees:
        for i in range(vs.dim(p)):
            _, col = tensor_basis_index(vs, ds, p, i, -p, i)
            block[0, col] = _one(mode)
    return GradedOperator(ts, target, 0, {0: block}, mode=mode)


# ---------------------------------------------------------------------------
# morphism spaces and the adjunction
# ---------------------------------------------------------------------------

def _intertwiner_system(source, target, pairs, mode):
    """Rows of the linear system phi T = T' phi over blocks of phi."""
    degrees = [k for k in source.degrees if target.dim(k)]
    offsets = {}
    pos = 0
    for k in degrees:
        offsets[k] = pos
        pos += target.dim(k) * source.dim(k)
    rows = []
    for op_s, op_t in pairs:
        d = op_s.degree
        for k in source.degrees:
            rt = target.dim(k + d)
            cs = source.dim(k)
            if rt == 0 and not (target.dim(k) and source.dim(k + d)):
                continue
            n_rows = target.dim(k + d) * source.dim(k)
            if n_rows == 0:
                continue
            block = [dict() for _ in range(n_rows)]
            # phi_{k+d} o T_k  (unknown phi at degree k+d)
            ts = op_s.blocks.get(k)
            if ts is not None and ts.size and (k + d) in offsets:
                base = offsets[k + d]
                for r in range(target.dim(k + d)):
                    for c in range(cs):
                        for m in range(source.dim(k + d)):
                            v = ts[m, c]
                            if v != 0:
                                col = base + r * source.dim(k + d) + m
                                row = r * cs + c
                                block[row][col] = block[row].get(col, 0) + v
            # minus T'_k o phi_k  (unknown phi at degree k)
            tt = op_t.blocks.get(k)
            if tt is not None and tt.size and k in offsets:
                base = offsets[k]
                for r in range(target.dim(k + d)):
                    for c in range(cs):
                        for m in range(target.dim(k)):
                            v = tt[r, m]
                            if v != 0:
                                col = base + m * cs + c
                                row = r * cs + c
                                block[row][col] = block[row].get(col, 0) - v
            rows.extend(block)
    mat = linalg.zeros((len(rows), pos), mode)
    for r, entries in enumerate(rows):
        for c, v in entries.items():
            mat[r, c] = v
    return mat, offsets, pos


def _vec_to_operator(vec, offsets, source, target, mode):
    blocks = {}
    for k, base in offsets.items():
        rt, cs = target.dim(k), source.dim(k)
        block = linalg.zeros((rt, cs), mode)
        for r in range(rt):
            for c in range(cs):
                block[r, c] = vec[base + r * cs + c]
        blocks[k] = block
    return GradedOperator(source, target, 0, blocks, mode=mode)


def hom_space(a, b, tol=linalg.DEFAULT_TOL):
    """Basis of degree-0 chain maps commuting with every generator.

    Works for two CartanReps (conditions d, L, B) or two LieReps
    (conditions d, action).
    """
    mode = a.mode
    if mode != b.mode:
        raise linalg.ModeError("hom_space: mixed modes")
    pairs = [(a.complex.differential, b.complex.differential)]
    if isinstance(a, CartanRep):
        pairs += list(zip(a.L, b.L)) + list(zip(a.B, b.B))
    else:
        pairs += list(zip(a.operators, b.operators))
    mat, offsets, n_unknowns = _intertwiner_system(a.complex.space, b.complex.space, pairs, mode)
    if n_unknowns == 0:
        return []
    basis = linalg.nullspace(mat, tol)
    return [_vec_to_operator(v, offsets, a.complex.space, b.complex.space, mode) for v in basis]


def induced_map(v_rep: LieRep, w_rep: CartanRep, phi0: GradedOperator) -> GradedOperator:
    """Extend a degree-0 map V -> W to the chain complex of V by letting
    each subset act through the degree-(-1) operators of W."""
    cec = ce.ce_chain(v_rep.algebra, v_rep)
    basis = cec.basis
    source = cec.complex.space
    target = w_rep.complex.space
    mode = w_rep.mode
    blocks = {}
    for deg, elements in basis.elements.items():
        cols = []
        for subset, q, i in elements:
            vec = {q: linalg.unit_vector(v_rep.complex.space.dim(q), i, mode)}
            img = phi0.apply(vec)
            op = None
            for idx in reversed(subset):
                op = w_rep.B[idx] if op is None else compose(w_rep.B[idx], op)
            if op is not None:
                img = op.apply(img)
            col = linalg.zeros(target.dim(deg), mode)
            for kk, vv in img.items():
                if kk == deg and len(vv):
                    col = col + vv
            cols.append(col)
        if cols and target.dim(deg):
            block = linalg.zeros((target.dim(deg), len(cols)), mode)
            for c, col in enumerate(cols):
                block[:, c] = col
            blocks[deg] = block
    return GradedOperator(source, target, 0, blocks, mode=mode)


def intertwiner_residual(op: GradedOperator, a: CartanRep, b: CartanRep) -> float:
    worst = (compose(op, a.complex.differential) - compose(b.complex.differential, op)).norm()
    for i in range(a.algebra.n):
        worst = max(worst, (compose(op, a.L[i]) - compose(b.L[i], op)).norm())
        worst = max(worst, (compose(op, a.B[i]) - compose(b.B[i], op)).norm())
    return worst


@dataclass
class AdjunctionReport:
    dim_cartan_side: int
    dim_lie_side: int
    reconstruction_residual: float
    precondition_residual: float
    ok: bool


def adjunction_check(v_rep: LieRep, w_rep: CartanRep, tol=linalg.DEFAULT_TOL) -> AdjunctionReport:
    """Restriction to the degree-0 piece is a bijection between maps out of
    the chain representation of V and equivariant maps V -> W."""
    pre = cartan_residuals(w_rep).worst
    bound = 0.0 if w_rep.mode == EXACT else tol
    if pre > bound:
        return AdjunctionReport(-1, -1, float("inf"), float(pre), False)
    uv = chain_rep(v_rep.algebra, v_rep)
    d1 = len(hom_space(uv, w_rep, tol))
    d2 = len(hom_space(v_rep, restrict(w_rep), tol))
    worst = 0.0
    for phi0 in hom_space(v_rep, restrict(w_rep), tol):
        phi = induced_map(v_rep, w_rep, phi0)
        worst = max(worst, intertwiner_residual(phi, uv, w_rep))
        # restriction back to the degree-0 subsets must return phi0
        for k, b in phi0.blocks.items():
            diff = phi.blocks.get(k)
            sub = diff[:, :b.shape[1]] if diff is not None else None
            if sub is None and linalg.max_abs(b) != 0:
                worst = max(worst, linalg.max_abs(b))
            elif sub is not None:
                worst = max(worst, linalg.max_abs(sub - b))
    ok = (d1 == d2) and worst <= bound
    return AdjunctionReport(d1, d2, float(worst), float(pre), ok)
