"""Finite-dimensional unital algebras by structure constants, and extensions.

An :class:`Algebra` with basis x_0..x_{n-1} stores x_i x_j = sum_k c[i][j][k] x_k
as sparse vectors.  Elements are dense coordinate lists (or sparse dicts
where noted).  An :class:`Extension` is an injective unital morphism
iota: B -> A together with cached data every later construction needs:
the image of B, the centraliser R = C_A(B), and the regular
representations of A.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .exactlin import (ONE, ZERO, Mat, Q, Subspace, _axpy, intersect, kernel, rref,
                       to_dense, to_sparse)


class AlgebraError(ValueError):
    """Invalid input data (structure constants, morphisms, ideals)."""


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


class Algebra:
    def __init__(self, dim: int, products: dict, unit, name: str = ""):
        self.dim = dim
        self.name = name
        # (i, j) -> sparse product vector; missing pairs multiply to zero
        self._p = {k: to_sparse(v) for k, v in products.items() if to_sparse(v)}
        self.unit = [Q(x) for x in unit]
        if len(self.unit) != dim:
            raise AlgebraError(f"unit has length {len(self.unit)}, expected {dim}")

    @classmethod
    def from_structure_constants(cls, c, unit, name: str = "") -> "Algebra":
        n = len(c)
        prods = {}
        for i in range(n):
            for j in range(n):
                v = {k: Q(x) for k, x in enumerate(c[i][j]) if Q(x)}
                if v:
                    prods[(i, j)] = v
        return cls(n, prods, unit, name)

    @classmethod
    def from_matrix_basis(cls, mats, name: str = "") -> "Algebra":
        """Algebra spanned by linearly independent square matrices closed under product."""
        if not mats:
            raise AlgebraError("empty matrix basis")
        d = mats[0].rows
        span = Subspace.span((m.vec() for m in mats), d * d)
        if span.dim != len(mats):
            raise AlgebraError("matrix basis is linearly dependent")
        coords = _CoordSolver(mats, d)
        prods = {}
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                c = coords(a @ b)
                if c is None:
                    raise AlgebraError(f"matrix span not closed: product of basis {i},{j}")
                if c:
                    prods[(i, j)] = c
        u = coords(Mat.identity(d))
        if u is None:
            raise AlgebraError("identity matrix not in the span")
        return cls(len(mats), prods, to_dense(u, len(mats)), name)

    # -- structure ----------------------------------------------------------
    def sc(self, i: int, j: int) -> dict:
        return self._p.get((i, j), {})

    def structure_constants(self) -> list:
        n = self.dim
        return [[to_dense(self.sc(i, j), n) for j in range(n)] for i in range(n)]

    @property
    def one(self) -> list:
        return list(self.unit)

    def basis_vector(self, i: int) -> list:
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def mul_sparse(self, u: dict, v: dict) -> dict:
        acc: dict = {}
        p = self._p
        for i, x in u.items():
            for j, y in v.items():
                w = p.get((i, j))
                if w:
                    _axpy(acc, x * y, w)
        return acc

    def mul(self, u, v) -> list:
        return to_dense(self.mul_sparse(to_sparse(u), to_sparse(v)), self.dim)

    @cached_property
    def _left(self) -> list:
        n = self.dim
        out = []
        for i in range(n):
            data = [{} for _ in range(n)]
            for j in range(n):
                for k, x in self.sc(i, j).items():
                    data[k][j] = x
            out.append(Mat(n, n, data))
        return out

    @cached_property
    def _right(self) -> list:
        n = self.dim
        out = []
        for j in range(n):
            data = [{} for _ in range(n)]
            for i in range(n):
                for k, x in self.sc(i, j).items():
                    data[k][i] = x
            out.append(Mat(n, n, data))
        return out

    def left(self, i: int) -> Mat:
        """Matrix of y -> x_i y."""
        return self._left[i]

    def right(self, j: int) -> Mat:
        """Matrix of y -> y x_j."""
        return self._right[j]

    def left_of(self, u) -> Mat:
        return _lincomb(self._left, to_sparse(u), self.dim)

    def right_of(self, u) -> Mat:
        return _lincomb(self._right, to_sparse(u), self.dim)

    def is_commutative(self) -> bool:
        return all(self.sc(i, j) == self.sc(j, i) for i in range(self.dim) for j in range(i))

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim})"


def _lincomb(mats, coeffs: dict, n: int) -> Mat:
    data = [{} for _ in range(n)]
    for i, c in coeffs.items():
        for r, row in zip(data, mats[i]._r):
            _axpy(r, c, row)
    return Mat(n, n, data)


class _CoordSolver:
    """Coordinates of a matrix in the span of a fixed matrix basis."""

    def __init__(self, mats, d):
        self.sub = Subspace.span((m.vec() for m in mats), d * d)
        # express each RREF basis vector back in terms of the given matrices
        n = len(mats)
        aug = Subspace.span(
            ({**m.vec(), **{d * d + i: ONE}} for i, m in enumerate(mats)), d * d + n)
        self._back = {}
        for p, r in zip(aug.pivots, aug.basis_sparse):
            if p < d * d:
                self._back[p] = {k - d * d: x for k, x in r.items() if k >= d * d}
        self.d = d

    def __call__(self, m: Mat):
        c = self.sub.coords(m.vec())
        if c is None:
            return None
        acc: dict = {}
        for x, p in zip(c, self.sub.pivots):
            if x:
                _axpy(acc, x, self._back[p])
        return acc


def validate_algebra(a: Algebra) -> ValidationReport:
    """Check associativity on all basis triples and the two unit laws."""
    rep = ValidationReport()
    n = a.dim
    for i in range(n):
        for j in range(n):
            ij = a.sc(i, j)
            for k in range(n):
                lhs = a.mul_sparse(ij, {k: ONE})
                rhs = a.mul_sparse({i: ONE}, a.sc(j, k))
                if lhs != rhs:
                    rep.violations.append(("associativity", i, j, k))
    u = to_sparse(a.unit)
    for i in range(n):
        e = {i: ONE}
        if a.mul_sparse(u, e) != e:
            rep.violations.append(("left unit", i))
        if a.mul_sparse(e, u) != e:
            rep.violations.append(("right unit", i))
    return rep


# ---------------------------------------------------------------------------

class Morphism:
    """Linear map source -> target given by a target.dim x source.dim matrix."""

    def __init__(self, source: Algebra, target: Algebra, matrix: Mat):
        if matrix.shape != (target.dim, source.dim):
            raise AlgebraError(f"morphism matrix has shape {matrix.shape}, "
                               f"expected {(target.dim, source.dim)}")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __call__(self, v):
        if isinstance(v, dict):
            return self.matrix.apply_sparse(v)
        return self.matrix @ list(v)

    def images(self) -> list:
        """Sparse images of the source basis vectors."""
        return self.matrix.columns_sparse()

    def problems(self) -> list:
        out = []
        s, t = self.source, self.target
        if self(to_sparse(s.unit)) != to_sparse(t.unit):
            out.append(("not unital",))
        im = self.images()
        for i in range(s.dim):
            for j in range(s.dim):
                lhs = self.matrix.apply_sparse(s.sc(i, j))
                rhs = t.mul_sparse(im[i], im[j])
                if lhs != rhs:
                    out.append(("not multiplicative", i, j))
        if rref(self.matrix)[2] != s.dim:
            out.append(("not injective",))
        return out


def identity_morphism(a: Algebra) -> Morphism:
    return Morphism(a, a, Mat.identity(a.dim))


# ---------------------------------------------------------------------------

def centralizer(a: Algebra, elements) -> Subspace:
    """{y : y e = e y for every e in elements}."""
    blocks = [a.right_of(e) - a.left_of(e) for e in elements]
    if not blocks:
        return Subspace.full(a.dim)
    return kernel(Mat.vstack(blocks))


def center(a: Algebra) -> Subspace:
    return centralizer(a, [{i: ONE} for i in range(a.dim)])


def subalgebra(a: Algebra, space: Subspace, name: str = ""):
    """Realise a unital subalgebra subspace as an Algebra plus its embedding."""
    basis = space.basis_sparse
    prods = {}
    for i, u in enumerate(basis):
        for j, v in enumerate(basis):
            c = space.coords(a.mul_sparse(u, v))
            if c is None:
                raise AlgebraError(f"subspace not closed under multiplication ({i},{j})")
            c = {k: x for k, x in enumerate(c) if x}
            if c:
                prods[(i, j)] = c
    one = space.coords(a.unit)
    if one is None:
        raise AlgebraError("subspace does not contain the unit")
    sub = Algebra(space.dim, prods, one, name)
    return sub, Morphism(sub, a, space.basis_matrix())


# ---------------------------------------------------------------------------

class ExtensionError(AlgebraError):
    pass


class Extension:
    """A ring extension A|B given by an injective unital morphism iota: B -> A."""

    def __init__(self, B: Algebra, A: Algebra, iota: Morphism, name: str = ""):
        self.B = B
        self.A = A
        self.iota = iota
        self.name = name or f"{A.name}|{B.name}"
        self.b_images = iota.images()
        self.R = centralizer(A, self.b_images)
        self.lambda_reps = [A.left(i) for i in range(A.dim)]
        self.rho_reps = [A.right(i) for i in range(A.dim)]

    @property
    def n(self) -> int:
        return self.A.dim

    @cached_property
    def B_image(self) -> Subspace:
        return Subspace.span(self.b_images, self.A.dim)

    @cached_property
    def center_A(self) -> Subspace:
        return center(self.A)

    @cached_property
    def center_B_image(self) -> Subspace:
        """iota(Z(B)) inside A."""
        return center(self.B).image(self.iota.matrix)

    @cached_property
    def R_algebra(self):
        return subalgebra(self.A, self.R, "R")

    def __repr__(self):
        return f"Extension({self.name}: dim A={self.A.dim}, dim B={self.B.dim}, dim R={self.R.dim})"


def make_extension(B: Algebra, A: Algebra, iota, name: str = "") -> Extension:
    for alg in (A, B):
        rep = validate_algebra(alg)
        if not rep.ok:
            raise AlgebraError(f"algebra {alg.name or '?'} invalid: {rep.violations[0]}")
    if isinstance(iota, Mat):
        iota = Morphism(B, A, iota)
    probs = iota.problems()
    if probs:
        raise ExtensionError(f"iota rejected: {probs[0]}")
    return Extension(B, A, iota, name)


def trivial_extension(a: Algebra, name: str = "") -> Extension:
    return make_extension(a, a, identity_morphism(a), name or f"{a.name}|{a.name}")


# ---------------------------------------------------------------------------

class Ideal:
    """A two-sided ideal, given by its span; closure is checked on construction."""

    def __init__(self, parent: Algebra, span: Subspace):
        self.parent = parent
        self.span = span
        for v in span.basis_sparse:
            for i in range(parent.dim):
                e = {i: ONE}
                if not span.contains(parent.mul_sparse(e, v)) or \
                        not span.contains(parent.mul_sparse(v, e)):
                    raise AlgebraError("span is not a two-sided ideal")

    @classmethod
    def generated_by(cls, parent: Algebra, elements) -> "Ideal":
        n = parent.dim
        vecs = []
        for g in elements:
            g = to_sparse(g)
            for i in range(n):
                left = parent.mul_sparse({i: ONE}, g)
                for j in range(n):
                    vecs.append(parent.mul_sparse(left, {j: ONE}))
        return cls(parent, Subspace.span(vecs, n))


def products_span(a: Algebra, left: Subspace, right: Subspace) -> Subspace:
    return Subspace.span((a.mul_sparse(u, v) for u in left.basis_sparse for v in right.basis_sparse),
                         a.dim)


def sugano_ideal_identity(ext: Extension, ideal: Ideal) -> bool:
    """Whether I = A (I cap B) = (I cap B) A for the ideal I of A."""
    A = ext.A
    I = ideal.span
    contracted = intersect(I, ext.B_image)
    full = Subspace.full(A.dim)
    return products_span(A, full, contracted) == I and products_span(A, contracted, full) == I
