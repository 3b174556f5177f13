"""Exact linear algebra over the rationals.

Scalars are ``gmpy2.mpq``.  Matrices are stored row-sparse (one dict per
row, zero entries never stored) but expose a dense row-major view; every
reduction is exact.

The workhorse is :class:`Echelon`, an incrementally maintained reduced
row echelon basis.  ``rref``, ``solve``, ``kernel`` and :class:`Subspace`
are all thin layers on top of it.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "Q", "ZERO", "ONE", "Mat", "Echelon", "Subspace", "Solution",
    "rref", "solve", "solve_rows", "kernel", "intersect", "det",
    "generic_invertibility", "fmt", "unit", "zeros",
    "vadd", "vsub", "vscale", "vdot", "is_zero", "to_sparse", "to_dense",
    "inverse", "intertwiners",
]

ZERO = mpq(0)
ONE = mpq(1)


def Q(x) -> mpq:
    """Coerce ``x`` to an exact rational.

    Accepts ints, mpq, Fraction and strings such as ``"3"``, ``"-2/7"``.
    Floats are refused: they are never exact in this code base.
    """
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty scalar")
        if "/" in s:
            num, _, den = s.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError:
                raise ValueError(f"malformed scalar {x!r}") from None
            if q == 0:
                raise ValueError(f"zero denominator in {x!r}")
            return mpq(p, q)
        try:
            return mpq(int(s))
        except ValueError:
            raise ValueError(f"malformed scalar {x!r}") from None
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def fmt(x) -> str:
    """Serialise a scalar as ``p/q`` (or ``p`` when integral)."""
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# dense vector helpers (vectors are plain lists of mpq)

def zeros(n: int) -> list:
    return [ZERO] * n


def unit(n: int, i: int) -> list:
    v = [ZERO] * n
    v[i] = ONE
    return v


def vadd(u, v):
    return [a + b for a, b in zip(u, v)]


def vsub(u, v):
    return [a - b for a, b in zip(u, v)]


def vscale(c, v):
    return [c * a for a in v]


def vdot(u, v):
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def is_zero(v) -> bool:
    if isinstance(v, dict):
        return not v
    return not any(v)


def to_sparse(v) -> dict:
    if isinstance(v, dict):
        return v
    return {i: x for i, x in enumerate(v) if x}


def to_dense(v, n: int) -> list:
    if not isinstance(v, dict):
        return list(v)
    out = [ZERO] * n
    for i, x in v.items():
        out[i] = x
    return out


def _axpy(target: dict, c, row: dict) -> None:
    """target += c * row, dropping cancelled entries."""
    for j, x in row.items():
        y = target.get(j)
        if y is None:
            target[j] = c * x
        else:
            y = y + c * x
            if y:
                target[j] = y
            else:
                del target[j]


# ---------------------------------------------------------------------------

class Mat:
    """A rows x cols rational matrix with sparse row storage."""

    __slots__ = ("rows", "cols", "_r", "_cc")

    def __init__(self, rows: int, cols: int, data: Sequence[dict] | None = None):
        self.rows = rows
        self.cols = cols
        self._cc = None
        if data is None:
            self._r = tuple({} for _ in range(rows))
        else:
            if len(data) != rows:
                raise ValueError("row count mismatch")
            self._r = tuple(data)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_lists(cls, lists, cols: int | None = None) -> "Mat":
        lists = [list(r) for r in lists]
        if cols is None:
            cols = len(lists[0]) if lists else 0
        data = []
        for r in lists:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            data.append({j: Q(x) for j, x in enumerate(r) if Q(x)})
        return cls(len(lists), cols, data)

    @classmethod
    def from_columns(cls, columns, rows: int) -> "Mat":
        data = [{} for _ in range(rows)]
        for j, c in enumerate(columns):
            for i, x in to_sparse(c).items():
                if x:
                    data[i][j] = x
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [{i: ONE} for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols)

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self._r[i].get(j, ZERO)

    def row(self, i: int) -> list:
        return to_dense(self._r[i], self.cols)

    def row_sparse(self, i: int) -> dict:
        return self._r[i]

    def col(self, j: int) -> list:
        return [r.get(j, ZERO) for r in self._r]

    def col_sparse(self, j: int) -> dict:
        return {i: r[j] for i, r in enumerate(self._r) if j in r}

    def columns_sparse(self) -> list:
        cols = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._r):
            for j, x in r.items():
                cols[j][i] = x
        return cols

    def entries(self) -> list:
        """Dense row-major grid."""
        return [to_dense(r, self.cols) for r in self._r]

    def nnz(self) -> int:
        return sum(len(r) for r in self._r)

    @property
    def shape(self):
        return (self.rows, self.cols)

    # -- algebra ----------------------------------------------------------
    @property
    def T(self) -> "Mat":
        data = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._r):
            for j, x in r.items():
                data[j][i] = x
        return Mat(self.cols, self.rows, data)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            orows = other._r
            data = []
            for r in self._r:
                acc: dict = {}
                for k, x in r.items():
                    _axpy(acc, x, orows[k])
                data.append(acc)
            return Mat(self.rows, other.cols, data)
        if isinstance(other, dict):
            return self.apply_sparse(other)
        v = other
        if len(v) != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ vector[{len(v)}]")
        out = []
        for r in self._r:
            s = ZERO
            for j, x in r.items():
                y = v[j]
                if y:
                    s += x * y
            out.append(s)
        return out

    def apply_sparse(self, v: dict) -> dict:
        """Matrix times sparse vector, computed column-wise."""
        out: dict = {}
        cols = self._cols_cache()
        for j, x in v.items():
            _axpy(out, x, cols[j])
        return out

    def _cols_cache(self):
        if self._cc is None:
            self._cc = self.columns_sparse()
        return self._cc

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        data = []
        for a, b in zip(self._r, other._r):
            acc = dict(a)
            _axpy(acc, ONE, b)
            data.append(acc)
        return Mat(self.rows, self.cols, data)

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        data = []
        for a, b in zip(self._r, other._r):
            acc = dict(a)
            _axpy(acc, -ONE, b)
            data.append(acc)
        return Mat(self.rows, self.cols, data)

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [{j: -x for j, x in r.items()} for r in self._r])

    def scale(self, c) -> "Mat":
        c = Q(c)
        if not c:
            return Mat(self.rows, self.cols)
        return Mat(self.rows, self.cols, [{j: c * x for j, x in r.items()} for r in self._r])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self._r, other._r))

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._r)))

    def is_zero(self) -> bool:
        return not any(self._r)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def kron(self, other: "Mat") -> "Mat":
        data = []
        for ra in self._r:
            for rb in other._r:
                row = {}
                for j, x in ra.items():
                    off = j * other.cols
                    for k, y in rb.items():
                        row[off + k] = x * y
                data.append(row)
        return Mat(self.rows * other.rows, self.cols * other.cols, data)

    @staticmethod
    def vstack(mats: Sequence["Mat"]) -> "Mat":
        cols = mats[0].cols
        data = []
        for m in mats:
            if m.cols != cols:
                raise ValueError("column mismatch in vstack")
            data.extend(m._r)
        return Mat(len(data), cols, data)

    @staticmethod
    def hstack(mats: Sequence["Mat"]) -> "Mat":
        rows = mats[0].rows
        data = [dict() for _ in range(rows)]
        off = 0
        for m in mats:
            if m.rows != rows:
                raise ValueError("row mismatch in hstack")
            for i, r in enumerate(m._r):
                for j, x in r.items():
                    data[i][off + j] = x
            off += m.cols
        return Mat(rows, off, data)

    def vec(self) -> dict:
        """Row-major flattening as a sparse vector of length rows*cols."""
        out = {}
        for i, r in enumerate(self._r):
            base = i * self.cols
            for j, x in r.items():
                out[base + j] = x
        return out

    @classmethod
    def unvec(cls, v, rows: int, cols: int) -> "Mat":
        data = [{} for _ in range(rows)]
        for k, x in to_sparse(v).items():
            if x:
                data[k // cols][k % cols] = x
        return cls(rows, cols, data)

    def __repr__(self):
        if self.rows * self.cols <= 64:
            body = "; ".join(" ".join(fmt(x) for x in r) for r in self.entries())
            return f"Mat({self.rows}x{self.cols}: {body})"
        return f"Mat({self.rows}x{self.cols}, nnz={self.nnz()})"


# ---------------------------------------------------------------------------

class Echelon:
    """Reduced row echelon basis grown one vector at a time.

    Invariant: every stored row has a 1 at its pivot, zeros at every other
    pivot column, and its pivot is its leading column.  Sorting rows by
    pivot therefore gives the unique RREF of everything added so far.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}
        # non-pivot column -> pivots whose row touches it
        self._occ: dict[int, set] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list:
        return sorted(self.rows)

    def reduce(self, v) -> dict:
        """Residual of ``v`` modulo the current span (a fresh dict)."""
        v = dict(to_sparse(v))
        rows = self.rows
        for p in [c for c in v if c in rows]:
            c = v.pop(p)
            for j, x in rows[p].items():
                if j == p:
                    continue
                y = v.get(j)
                if y is None:
                    v[j] = -c * x
                else:
                    y = y - c * x
                    if y:
                        v[j] = y
                    else:
                        del v[j]
        return v

    def add(self, v) -> bool:
        """Insert ``v``; return True when it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        self._insert_reduced(r)
        return True

    def _insert_reduced(self, r: dict) -> int:
        q = min(r)
        inv = ONE / r[q]
        if inv != 1:
            r = {j: x * inv for j, x in r.items()}
        occ = self._occ
        for p in occ.pop(q, ()):
            row = self.rows[p]
            c = row.pop(q)
            for j, x in r.items():
                if j == q:
                    continue
                y = row.get(j)
                if y is None:
                    row[j] = -c * x
                    occ.setdefault(j, set()).add(p)
                else:
                    y = y - c * x
                    if y:
                        row[j] = y
                    else:
                        del row[j]
                        occ[j].discard(p)
        self.rows[q] = r
        for j in r:
            if j != q:
                occ.setdefault(j, set()).add(q)
        return q

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def sorted_rows(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]

    def copy(self) -> "Echelon":
        e = Echelon(self.ncols)
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        e._occ = {c: set(s) for c, s in self._occ.items()}
        return e


def rref(m: Mat):
    """Return ``(reduced, pivots, rank)`` for ``m``."""
    e = Echelon(m.cols)
    for r in m._r:
        if r:
            e.add(r)
    piv = e.pivots
    data = [e.rows[p] for p in piv] + [{} for _ in range(m.rows - len(piv))]
    return Mat(m.rows, m.cols, data), piv, len(piv)


# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of Q^n held by its RREF basis.

    Two subspaces are equal exactly when their stored bases are equal.
    """

    __slots__ = ("ambient_dim", "_rows", "_pivots")

    def __init__(self, ambient_dim: int, echelon: Echelon | None = None):
        self.ambient_dim = ambient_dim
        if echelon is None:
            self._pivots: tuple = ()
            self._rows: tuple = ()
        else:
            piv = echelon.pivots
            self._pivots = tuple(piv)
            self._rows = tuple(echelon.rows[p] for p in piv)

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int) -> "Subspace":
        e = Echelon(ambient_dim)
        for v in vectors:
            e.add(v)
        return cls(ambient_dim, e)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls.span(({i: ONE} for i in range(n)), n)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple:
        return self._pivots

    @property
    def basis_sparse(self) -> tuple:
        return self._rows

    @property
    def basis(self) -> list:
        return [to_dense(r, self.ambient_dim) for r in self._rows]

    def basis_matrix(self) -> Mat:
        """Columns are the basis vectors."""
        return Mat.from_columns(self._rows, self.ambient_dim)

    def echelon(self) -> Echelon:
        e = Echelon(self.ambient_dim)
        for p, r in zip(self._pivots, self._rows):
            e.rows[p] = dict(r)
            for j in r:
                if j != p:
                    e._occ.setdefault(j, set()).add(p)
        return e

    def coords(self, v) -> list | None:
        """Coefficients of ``v`` in the RREF basis, or None if v is outside."""
        v = to_sparse(v)
        c = [v.get(p, ZERO) for p in self._pivots]
        acc = dict(v)
        for x, r in zip(c, self._rows):
            if x:
                _axpy(acc, -x, r)
        return None if acc else c

    def from_coords(self, c) -> dict:
        acc: dict = {}
        for x, r in zip(c, self._rows):
            if x:
                _axpy(acc, x, r)
        return acc

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other._rows)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self._pivots == other._pivots
                and self._rows == other._rows)

    def __hash__(self):
        return hash((self.ambient_dim, self._pivots))

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        e = self.echelon()
        for r in other._rows:
            e.add(r)
        return Subspace(self.ambient_dim, e)

    def image(self, m: Mat) -> "Subspace":
        return Subspace.span((m.apply_sparse(r) for r in self._rows), m.rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(u: Subspace, v: Subspace):
    if u.ambient_dim != v.ambient_dim:
        raise ValueError(f"ambient mismatch {u.ambient_dim} vs {v.ambient_dim}")


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    if u.dim > v.dim:
        u, v = v, u
    ev = v.echelon()
    residues = [ev.reduce(r) for r in u.basis_sparse]
    # relations sum_i a_i residue_i = 0 give the intersection u-combinations
    rel = kernel(Mat.from_columns(residues, u.ambient_dim)) if residues else Subspace(0)
    vecs = []
    for a in rel.basis_sparse:
        acc: dict = {}
        for i, x in a.items():
            _axpy(acc, x, u.basis_sparse[i])
        vecs.append(acc)
    return Subspace.span(vecs, u.ambient_dim)


# ---------------------------------------------------------------------------

class Solution:
    """Particular solution of ``m x = b`` plus lazy access to the kernel."""

    def __init__(self, ncols: int, rows: list, pivots: list, particular: list):
        self.ncols = ncols
        self._rows = rows
        self._pivots = pivots
        self.particular = particular

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def nullity(self) -> int:
        return self.ncols - len(self._pivots)

    def _kernel_vector(self, f: int) -> dict:
        v = {f: ONE}
        for p, r in zip(self._pivots, self._rows):
            x = r.get(f)
            if x:
                v[p] = -x
        return v

    def some_homogeneous(self, count: int = 1) -> list:
        """A few kernel vectors without canonicalising the whole kernel."""
        piv = set(self._pivots)
        out = []
        for f in range(self.ncols):
            if f not in piv:
                out.append(to_dense(self._kernel_vector(f), self.ncols))
                if len(out) == count:
                    break
        return out

    @property
    def homogeneous(self) -> Subspace:
        piv = set(self._pivots)
        return Subspace.span((self._kernel_vector(f) for f in range(self.ncols) if f not in piv),
                             self.ncols)


def solve_rows(rows: Sequence[dict], rhs: Sequence, ncols: int) -> Solution | None:
    """Solve a sparse system given as equation rows; None if inconsistent."""
    if len(rows) != len(rhs):
        raise ValueError("rhs length does not match number of equations")
    e = Echelon(ncols + 1)
    for r, b in zip(rows, rhs):
        b = Q(b) if not isinstance(b, type(ZERO)) else b
        if b:
            r = dict(r)
            r[ncols] = b
        if r:
            e.add(r)
            if ncols in e.rows:
                return None
    piv = e.pivots
    srows = [e.rows[p] for p in piv]
    x = [ZERO] * ncols
    for p, r in zip(piv, srows):
        x[p] = r.get(ncols, ZERO)
    strip = [{j: v for j, v in r.items() if j != ncols} for r in srows]
    return Solution(ncols, strip, piv, x)


def solve(m: Mat, b) -> Solution | None:
    """Solve ``m x = b`` exactly.  Returns None when b is not in the column space."""
    if len(b) != m.rows:
        raise ValueError(f"rhs of length {len(b)} for a {m.rows}-row matrix")
    return solve_rows(m._r, [Q(x) for x in b], m.cols)


def kernel(m: Mat) -> Subspace:
    sol = solve_rows(m._r, [ZERO] * m.rows, m.cols)
    return sol.homogeneous


# ---------------------------------------------------------------------------

def det(m: Mat):
    """Exact determinant by Gaussian elimination."""
    if m.rows != m.cols:
        raise ValueError("det of a non-square matrix")
    n = m.rows
    a = m.entries()
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        pv = a[c][c]
        d *= pv
        rowc = a[c]
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f = mpq(f) / pv
                ri = a[i]
                for j in range(c, n):
                    if rowc[j]:
                        ri[j] -= f * rowc[j]
    return d


def _combine(space: Sequence[Mat], lam) -> Mat:
    n = space[0].rows
    acc = Mat(n, n)
    for x, m in zip(lam, space):
        if x:
            acc = acc + m.scale(x)
    return acc


def generic_invertibility(space: Sequence[Mat], budget: int = 20000, probes: int = 24, seed: int = 0):
    """Decide whether some linear combination of square matrices is invertible.

    det(sum l_i m_i) is a polynomial of degree <= n, so it is identically
    zero iff it vanishes on the grid {0..n}^k.  A seeded sample of grid
    points is tried first (cheap when the answer is yes); then the grid is
    swept exhaustively when it has at most ``budget`` points.  Beyond that
    budget, ``probes`` extra points from a wide range are tested and the
    answer is reported with ``complete=False``.

    Returns ``(found, witness, complete)``.
    """
    if not space:
        return (False, None, True)
    n = space[0].rows
    for m in space:
        if m.shape != (n, n):
            raise ValueError("generic_invertibility needs square matrices of one size")
    if n == 0:
        return (True, [ONE] * len(space), True)
    k = len(space)
    rng = random.Random(seed)
    tried = set()

    def attempt(lam):
        lam = tuple(lam)
        if lam in tried:
            return None
        tried.add(lam)
        if det(_combine(space, lam)):
            return [mpq(x) for x in lam]
        return None

    first = [tuple([1] * k)]
    first += [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
    first += [tuple(rng.randint(0, n) for _ in range(k)) for _ in range(probes)]
    for lam in first:
        w = attempt(lam)
        if w is not None:
            return (True, w, True)
    if (n + 1) ** k <= budget:
        for lam in itertools.product(range(n + 1), repeat=k):
            w = attempt(lam)
            if w is not None:
                return (True, w, True)
        return (False, None, True)
    for _ in range(probes):
        w = attempt(tuple(rng.randint(1, 1 << 20) for _ in range(k)))
        if w is not None:
            return (True, w, True)
    return (False, None, False)


def inverse(m: Mat) -> Mat:
    """Exact inverse of a square matrix; raises ValueError when singular."""
    n = m.rows
    if m.cols != n:
        raise ValueError("inverse of a non-square matrix")
    e = Echelon(2 * n)
    for i, r in enumerate(m._r):
        row = dict(r)
        row[n + i] = ONE
        e.add(row)
    if e.pivots[:n] != list(range(n)) or e.rank != n:
        raise ValueError("matrix is singular")
    return Mat(n, n, [{j - n: x for j, x in e.rows[i].items() if j >= n} for i in range(n)])


def intertwiners(src_actions: Sequence[Mat], dst_actions: Sequence[Mat],
                 dim_src: int, dim_dst: int) -> Subspace:
    """Linear maps f: src -> dst with f X_j = Y_j f for each paired action.

    Maps are flattened row-major (dim_dst x dim_src).
    """
    if len(src_actions) != len(dst_actions):
        raise ValueError("action lists differ in length")
    nv = dim_dst * dim_src
    rows = []
    for X, Y in zip(src_actions, dst_actions):
        xcols = X.columns_sparse()
        # (f X)[i, l] - (Y f)[i, l] = 0
        for i in range(dim_dst):
            yrow = Y._r[i]
            for l in range(dim_src):
                eq: dict = {}
                for k, x in xcols[l].items():
                    key = i * dim_src + k
                    eq[key] = eq.get(key, ZERO) + x
                for k, y in yrow.items():
                    key = k * dim_src + l
                    eq[key] = eq.get(key, ZERO) - y
                eq = {a: b for a, b in eq.items() if b}
                if eq:
                    rows.append(eq)
    if not rows:
        return Subspace.full(nv)
    return solve_rows(rows, [ZERO] * len(rows), nv).homogeneous
