"""Balanced tensor products and the tensor square A (x)_B A.

:class:`BalancedTensor` builds M (x)_K N for a right K-module M and a left
K-module N.  Rather than quotienting the full M (x) N, M is presented as a
quotient of a free module K^k (k generators found greedily among the
standard basis vectors of M); then M (x)_K N = N^k / (syzygies (x) N).
Every class has a representative m_i (x) e_n with m_i a generator, which
makes maps out of the quotient easy to write down on representatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algebra import Extension
from .exactlin import (ONE, ZERO, Echelon, Mat, Subspace, _axpy, inverse, kernel, rref,
                       to_dense, to_sparse)


class SelfCheckError(RuntimeError):
    """An identity the theory guarantees failed on concrete data."""


class BalancedTensor:
    def __init__(self, right_act, left_act, dim_m: int, dim_n: int):
        if len(right_act) != len(left_act):
            raise ValueError("ring basis size differs between the two modules")
        self.ring_dim = d = len(right_act)
        self.dim_m = dim_m
        self.dim_n = dim_n
        self.right_act = right_act
        self.left_act = left_act
        rcols = [m.columns_sparse() for m in right_act]
        self._lcols = [m.columns_sparse() for m in left_act]

        # generators of M as a right module, and a basis of M among the m_i.k_j
        span = Echelon(dim_m)
        gens, basis_cols, basis_keys = [], [], []
        for m in range(dim_m):
            if span.contains({m: ONE}):
                continue
            gens.append(m)
            for j in range(d):
                v = rcols[j][m]
                if span.add(v):
                    basis_cols.append(v)
                    basis_keys.append((len(gens) - 1) * d + j)
        if span.rank != dim_m:
            raise SelfCheckError("module generators do not span M (unit not acting as identity?)")
        self.gens = gens
        k = len(gens)
        # section M -> K^k through the invertible square block of basis columns
        if dim_m:
            pinv = inverse(Mat.from_columns(basis_cols, dim_m))
            self._G = Mat(k * d, dim_m, _scatter_rows(pinv, basis_keys, k * d))
        else:
            self._G = Mat(k * d, 0)
        F = Mat.from_columns([rcols[j][gens[i]] for i in range(k) for j in range(d)], dim_m)
        syz = kernel(F) if k * d else Subspace(0)

        amb = k * dim_n
        rel = Echelon(amb)
        lcols = self._lcols
        for s in syz.basis_sparse:
            for nn in range(dim_n):
                w: dict = {}
                for key, c in s.items():
                    i, j = divmod(key, d)
                    off = i * dim_n
                    for t, x in lcols[j][nn].items():
                        _axpy(w, c, {off + t: x})
                if w:
                    rel.add(w)
        self._rel = rel
        self.ambient_dim = amb
        self.free = [c for c in range(amb) if c not in rel.rows]
        self._qidx = {c: q for q, c in enumerate(self.free)}
        self.dim = len(self.free)
        self.reps = [(gens[c // dim_n], c % dim_n) for c in self.free]

    # -- projection -----------------------------------------------------------
    def project_ambient(self, w: dict) -> dict:
        r = self._rel.reduce(w)
        q = self._qidx
        return {q[c]: x for c, x in r.items()}

    def pair(self, m, n) -> dict:
        """Class of m (x) n as a sparse quotient vector."""
        m = to_sparse(m)
        n = to_sparse(n)
        if not m or not n:
            return {}
        g = self._G.apply_sparse(m)
        d, dn = self.ring_dim, self.dim_n
        lacts = self.left_act
        w: dict = {}
        cache = {}
        for key, c in g.items():
            i, j = divmod(key, d)
            kn = cache.get(j)
            if kn is None:
                kn = cache[j] = lacts[j].apply_sparse(n)
            off = i * dn
            for t, x in kn.items():
                y = w.get(off + t)
                y = c * x if y is None else y + c * x
                if y:
                    w[off + t] = y
                else:
                    del w[off + t]
        return self.project_ambient(w)

    def induced(self, f, out_dim: int) -> Mat:
        """Matrix of the map defined on representatives by f(m, n) -> sparse vector."""
        cols = [f({m: ONE}, {n: ONE}) for (m, n) in self.reps]
        return Mat.from_columns(cols, out_dim)

    def left_factor_map(self, X: Mat) -> Mat:
        """Action of an M-endomorphism commuting with the ring action."""
        xc = X.columns_sparse()
        return Mat.from_columns([self.pair(xc[m], {n: ONE}) for (m, n) in self.reps], self.dim)

    def right_factor_map(self, Y: Mat) -> Mat:
        yc = Y.columns_sparse()
        return Mat.from_columns([self.pair({m: ONE}, yc[n]) for (m, n) in self.reps], self.dim)

    def balanced_defect(self, f):
        """First (m, j, n) where f(m.k_j, n) != f(m, k_j.n), else None."""
        rcols = [m.columns_sparse() for m in self.right_act]
        for m in range(self.dim_m):
            for j in range(self.ring_dim):
                for n in range(self.dim_n):
                    if _norm(f(rcols[j][m], {n: ONE})) != _norm(f({m: ONE}, self._lcols[j][n])):
                        return (m, j, n)
        return None

    def relation_span_check(self) -> bool:
        """Classes of all m.k (x) n - m (x) k.n vanish (basis m, k, n)."""
        rcols = [m.columns_sparse() for m in self.right_act]
        for m in range(self.dim_m):
            for j in range(self.ring_dim):
                for n in range(self.dim_n):
                    if self.pair(rcols[j][m], {n: ONE}) != self.pair({m: ONE}, self._lcols[j][n]):
                        return False
        return True


def _norm(v):
    return {k: x for k, x in to_sparse(v).items() if x}


def _scatter_rows(pinv: Mat, keys, total: int):
    data = [{} for _ in range(total)]
    for r, key in enumerate(keys):
        data[key] = dict(pinv.row_sparse(r))
    return data


# ---------------------------------------------------------------------------

class TensorSquare:
    """A (x)_B A for an extension, with its A-bimodule structure."""

    def __init__(self, ext: Extension):
        self.ext = ext
        A = ext.A
        n = self.n = A.dim
        self.bt = BalancedTensor([A.right_of(b) for b in ext.b_images],
                                 [A.left_of(b) for b in ext.b_images], n, n)
        self.dim = self.bt.dim

    def simple(self, a, b) -> dict:
        """Class of a (x) b."""
        return self.bt.pair(a, b)

    @cached_property
    def project(self) -> Mat:
        """A (x) A (index i*n + j) -> quotient coordinates."""
        n = self.n
        return Mat.from_columns([self.bt.pair({i: ONE}, {j: ONE}) for i in range(n) for j in range(n)],
                                self.dim)

    @cached_property
    def section(self) -> Mat:
        n = self.n
        return Mat.from_columns([{m * n + k: ONE} for (m, k) in self.bt.reps], n * n)

    def rep(self, w) -> dict:
        """A representative of the class w in A (x) A."""
        return self.section.apply_sparse(to_sparse(w))

    @cached_property
    def one(self) -> dict:
        u = to_sparse(self.ext.A.unit)
        return self.simple(u, u)

    @cached_property
    def _left(self):
        A = self.ext.A
        return [self.bt.left_factor_map(A.left(i)) for i in range(self.n)]

    @cached_property
    def _right(self):
        A = self.ext.A
        return [self.bt.right_factor_map(A.right(i)) for i in range(self.n)]

    def left(self, i: int) -> Mat:
        """Class of x_i w."""
        return self._left[i]

    def right(self, i: int) -> Mat:
        """Class of w x_i."""
        return self._right[i]

    def left_of(self, a) -> Mat:
        return _comb(self._left, to_sparse(a), self.dim)

    def right_of(self, a) -> Mat:
        return _comb(self._right, to_sparse(a), self.dim)

    def lmul(self, a, w) -> dict:
        acc: dict = {}
        w = to_sparse(w)
        for i, x in to_sparse(a).items():
            _axpy(acc, x, self._left[i].apply_sparse(w))
        return acc

    def rmul(self, w, a) -> dict:
        acc: dict = {}
        w = to_sparse(w)
        for i, x in to_sparse(a).items():
            _axpy(acc, x, self._right[i].apply_sparse(w))
        return acc

    def sandwich(self, t, w) -> dict:
        """w^1 t w^2 for w in A (x) A given by a representative, t a class."""
        acc: dict = {}
        n = self.n
        t = to_sparse(t)
        for key, c in to_sparse(w).items():
            i, j = divmod(key, n)
            _axpy(acc, c, self._right[j].apply_sparse(self._left[i].apply_sparse(t)))
        return acc

    @cached_property
    def mu(self) -> Mat:
        """Multiplication A (x)_B A -> A on quotient coordinates."""
        A = self.ext.A
        return Mat.from_columns([A.sc(m, k) for (m, k) in self.bt.reps], self.n)

    def mu_well_defined(self) -> bool:
        A = self.ext.A
        n = self.n
        amb = Mat.from_columns([A.sc(i, j) for i in range(n) for j in range(n)], n)
        return self.mu @ self.project == amb

    def relation_span(self) -> Subspace:
        """Span of x_i b (x) x_j - x_i (x) b x_j in A (x) A."""
        A = self.ext.A
        n = self.n
        vecs = []
        for b in self.ext.b_images:
            Rb, Lb = A.right_of(b).columns_sparse(), A.left_of(b).columns_sparse()
            for i in range(n):
                for j in range(n):
                    w: dict = {}
                    for p, x in Rb[i].items():
                        _axpy(w, x, {p * n + j: ONE})
                    for q, y in Lb[j].items():
                        _axpy(w, -y, {i * n + q: ONE})
                    vecs.append(w)
        return Subspace.span(vecs, n * n)


def _comb(mats, coeffs: dict, dim: int) -> Mat:
    acc = Mat(dim, dim)
    for i, c in coeffs.items():
        acc = acc + mats[i].scale(c)
    return acc


def build_tensor_square(ext: Extension) -> TensorSquare:
    return TensorSquare(ext)


def centralized_part(ts: TensorSquare, by: str = "B") -> Subspace:
    """Classes commuting with the basis of B (by='B') or of A (by='A')."""
    if by == "B":
        elems = ts.ext.b_images
    elif by == "A":
        elems = [{i: ONE} for i in range(ts.n)]
    else:
        raise ValueError("by must be 'A' or 'B'")
    blocks = [ts.left_of(e) - ts.right_of(e) for e in elems]
    if not blocks or ts.dim == 0:
        return Subspace.full(ts.dim)
    return kernel(Mat.vstack(blocks))


# ---------------------------------------------------------------------------

class TRing:
    """T = (A (x)_B A)^B with tt' = t'^1 t^1 (x) t^2 t'^2 and 1_T = 1 (x) 1."""

    def __init__(self, ts: TensorSquare):
        self.ts = ts
        self.carrier = centralized_part(ts, "B")
        self.dim = self.carrier.dim

    def to_q(self, c) -> dict:
        return self.carrier.from_coords(to_dense(c, self.dim) if isinstance(c, dict) else c)

    def coords(self, w) -> list:
        c = self.carrier.coords(w)
        if c is None:
            raise SelfCheckError("element is not B-central: left T")
        return c

    def basis_q(self, e: int) -> dict:
        return self.carrier.basis_sparse[e]

    def mul_q(self, t, w) -> dict:
        """t w by the ring formula: w^1 t^1 (x) t^2 w^2 (w may be any class)."""
        return self.ts.sandwich(t, self.ts.rep(w))

    def mul(self, s, t) -> list:
        """Product in T-coordinates."""
        return self.coords(self.mul_q(self.to_q(s), self.to_q(t)))

    @cached_property
    def one(self) -> list:
        return self.coords(self.ts.one)

    @cached_property
    def algebra(self):
        from .algebra import Algebra
        d = self.dim
        prods = {}
        basis = self.carrier.basis_sparse
        for i in range(d):
            for j in range(d):
                c = self.coords(self.mul_q(basis[i], basis[j]))
                c = {k: x for k, x in enumerate(c) if x}
                if c:
                    prods[(i, j)] = c
        return Algebra(d, prods, self.one, "T")


def t_ring(ts: TensorSquare) -> TRing:
    return TRing(ts)


def mu(ts: TensorSquare) -> Mat:
    return ts.mu


# ---------------------------------------------------------------------------
# the right T-module R (Miyashita-Ulbrich action) and the ternary map

def mu_action(tring: TRing, r, t) -> list:
    """r . t = t^1 r t^2 for r in R (A-coordinates) and t in T-coordinates."""
    ext = tring.ts.ext
    if not ext.R.contains(r):
        raise ValueError("mu_action needs r in the centralizer R")
    out = _sandwich_in_A(ext, to_sparse(r), tring.ts.rep(tring.to_q(t)))
    if not ext.R.contains(out):
        raise SelfCheckError("Miyashita-Ulbrich action left R")
    return to_dense(out, ext.n)


def _sandwich_in_A(ext: Extension, r: dict, w: dict) -> dict:
    A = ext.A
    n = A.dim
    acc: dict = {}
    for key, c in w.items():
        i, j = divmod(key, n)
        _axpy(acc, c, A.mul_sparse(A.mul_sparse({i: ONE}, r), {j: ONE}))
    return acc


def mu_action_matrices(tring: TRing) -> list:
    """For each T basis element, the matrix of r -> r.t on R-coordinates."""
    ext = tring.ts.ext
    R = ext.R
    mats = []
    for e in range(tring.dim):
        w = tring.ts.rep(tring.basis_q(e))
        cols = []
        for r in R.basis_sparse:
            c = R.coords(_sandwich_in_A(ext, r, w))
            if c is None:
                raise SelfCheckError("Miyashita-Ulbrich action left R")
            cols.append(c)
        mats.append(Mat.from_columns(cols, R.dim))
    return mats


@dataclass
class MapReport:
    matrix: Mat
    domain_dim: int
    codomain_dim: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.domain_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.codomain_dim

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def map_report(m: Mat) -> MapReport:
    return MapReport(m, m.cols, m.rows, rref(m)[2])


def gamma_map(tring: TRing):
    """gamma: R (x)_T (A (x)_B A) -> A, r (x) a (x) a' -> a r a'.

    Returns ``(report, tensor)`` where tensor is the balanced quotient.
    """
    ts = tring.ts
    ext = ts.ext
    R = ext.R
    right_act = mu_action_matrices(tring)
    left_act = [Mat.from_columns([tring.mul_q(tring.basis_q(e), {q: ONE}) for q in range(ts.dim)],
                                 ts.dim) for e in range(tring.dim)]
    bt = BalancedTensor(right_act, left_act, R.dim, ts.dim)

    def f(rc, w):
        r = R.from_coords(to_dense(rc, R.dim))
        return _sandwich_in_A(ext, r, ts.rep(w))

    return map_report(bt.induced(f, ext.n)), bt
