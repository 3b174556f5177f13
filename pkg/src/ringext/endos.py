"""Endomorphism rings of A over B and the evaluation module of S on R.

E = End(A_B) and S = End(_B A_B) are held as spaces of n x n matrices
(flattened row-major).  Most constructions here are balanced tensor
products over S or R, built with :class:`tensorsq.BalancedTensor`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .algebra import Algebra, Extension
from .exactlin import (ONE, ZERO, Mat, Subspace, intertwiners, kernel, solve, solve_rows,
                       to_dense, to_sparse)
from .tensorsq import BalancedTensor, MapReport, SelfCheckError, map_report


class EndRing:
    """A space of linear maps A -> A closed under composition."""

    def __init__(self, ext: Extension, carrier: Subspace, name: str):
        self.ext = ext
        self.carrier = carrier
        self.name = name
        self.dim = carrier.dim

    @cached_property
    def maps(self) -> list:
        n = self.ext.n
        return [Mat.unvec(v, n, n) for v in self.carrier.basis_sparse]

    def coords(self, m: Mat):
        return self.carrier.coords(m.vec())

    def contains(self, m: Mat) -> bool:
        return self.carrier.contains(m.vec())

    def element(self, c) -> Mat:
        n = self.ext.n
        return Mat.unvec(self.carrier.from_coords(c), n, n)

    @cached_property
    def algebra(self) -> Algebra:
        maps = self.maps
        prods = {}
        for i, f in enumerate(maps):
            for j, g in enumerate(maps):
                c = self.coords(f @ g)
                if c is None:
                    raise SelfCheckError(f"{self.name} not closed under composition ({i},{j})")
                c = {k: x for k, x in enumerate(c) if x}
                if c:
                    prods[(i, j)] = c
        one = self.coords(Mat.identity(self.ext.n))
        if one is None:
            raise SelfCheckError(f"identity missing from {self.name}")
        return Algebra(self.dim, prods, one, self.name)

    def __repr__(self):
        return f"EndRing({self.name}, dim={self.dim})"


def compute_E(ext: Extension) -> EndRing:
    rb = [ext.A.right_of(b) for b in ext.b_images]
    return EndRing(ext, intertwiners(rb, rb, ext.n, ext.n), "End(A_B)")


def compute_S(ext: Extension) -> EndRing:
    A = ext.A
    acts = [A.right_of(b) for b in ext.b_images] + [A.left_of(b) for b in ext.b_images]
    return EndRing(ext, intertwiners(acts, acts, ext.n, ext.n), "End(_B A_B)")


def _stack_kernel(mats, dim):
    mats = [m for m in mats if not m.is_zero()]
    if not mats:
        return Subspace.full(dim)
    return kernel(Mat.vstack(mats))


def s_invariants(ext: Extension, S: EndRing) -> Subspace:
    """{a : alpha(a) = alpha(1) a for every alpha in S}."""
    A = ext.A
    unit = to_sparse(A.unit)
    return _stack_kernel([alpha - A.left_of(alpha.apply_sparse(unit)) for alpha in S.maps], ext.n)


def s_action(ext: Extension, S: EndRing | None = None):
    """Evaluation action of S on A: (basis matrices, A^S, A^S == iota(B))."""
    S = S or compute_S(ext)
    inv = s_invariants(ext, S)
    return S.maps, inv, inv == ext.B_image


# ---------------------------------------------------------------------------

@dataclass
class SRModule:
    S: EndRing
    r_space: Subspace
    action: list                       # per S-basis matrix on R-coordinates
    projective: bool = False
    projective_witness: object = None  # s in S with s(1) = 1 and image in A^S
    generator: bool = False
    generator_witness: list = field(default_factory=list)  # [(coeff, r, s)]

    def sigma(self, r) -> Mat:
        """The splitting R -> S, r -> lambda(r) o s."""
        A = self.S.ext.A
        return A.left_of(r) @ self.projective_witness


def _r_action(ext: Extension, S: EndRing) -> list:
    R = ext.R
    mats = []
    for alpha in S.maps:
        cols = []
        for r in R.basis_sparse:
            c = R.coords(alpha.apply_sparse(r))
            if c is None:
                raise SelfCheckError("evaluation of an S element left R")
            cols.append(c)
        mats.append(Mat.from_columns([to_sparse(c) for c in cols], R.dim))
    return mats


def hom_into_invariants(ext: Extension, S: EndRing, inv: Subspace) -> Subspace:
    """Coordinates of s in S whose image lies in the given subspace."""
    n = ext.n
    e = inv.echelon()
    rows = []
    # residue of column j of s modulo inv must vanish; residue is linear in s
    cols_by_basis = [m.columns_sparse() for m in S.maps]
    for j in range(n):
        res = [e.reduce(cols_by_basis[k][j]) for k in range(S.dim)]
        keys = set()
        for r in res:
            keys.update(r)
        for q in sorted(keys):
            row = {k: r[q] for k, r in enumerate(res) if q in r}
            if row:
                rows.append(row)
    if not rows:
        return Subspace.full(S.dim)
    return solve_rows(rows, [ZERO] * len(rows), S.dim).homogeneous


def sr_module(ext: Extension, S: EndRing | None = None) -> SRModule:
    """The module _S R with projectivity and generator tests.

    S-maps R -> S are r -> lambda(r) o s with s in J = {s in S : im s in A^S}
    (R is cyclic on 1).  Projective: some s in J has s(1) = 1.  Generator:
    id_A lies in the span of lambda(r) o s over r in R, s in J.
    """
    S = S or compute_S(ext)
    A = ext.A
    R = ext.R
    mod = SRModule(S, R, _r_action(ext, S))
    inv = s_invariants(ext, S)
    J = hom_into_invariants(ext, S, inv)
    js = [S.element(to_dense(c, S.dim)) for c in J.basis_sparse]
    unit = to_sparse(A.unit)
    # projective: sum c_k s_k(1) = 1
    if js:
        m = Mat.from_columns([s.apply_sparse(unit) for s in js], ext.n)
        sol = solve(m, A.unit)
        if sol is not None:
            s = Mat(ext.n, ext.n)
            for c, sk in zip(sol.particular, js):
                if c:
                    s = s + sk.scale(c)
            mod.projective = True
            mod.projective_witness = s
    # generator
    combos, labels = [], []
    for ri, r in enumerate(R.basis_sparse):
        lr = A.left_of(r)
        for si, s in enumerate(js):
            combos.append((lr @ s).vec())
            labels.append((ri, si))
    if combos:
        m = Mat.from_columns(combos, ext.n * ext.n)
        sol = solve(m, to_dense(Mat.identity(ext.n).vec(), ext.n * ext.n))
        if sol is not None:
            mod.generator = True
            mod.generator_witness = [(c, R.basis_sparse[ri], js[si])
                                     for c, (ri, si) in zip(sol.particular, labels) if c]
    return mod


def verify_sr_projective(ext: Extension, mod: SRModule) -> bool:
    """sigma is S-linear and splits evaluation at 1."""
    if not mod.projective:
        return False
    A = ext.A
    S = mod.S
    s = mod.projective_witness
    if not S.contains(s):
        return False
    unit = to_sparse(A.unit)
    for r in ext.R.basis_sparse:
        sig = mod.sigma(r)
        if not S.contains(sig) or sig.apply_sparse(unit) != r:
            return False
        for alpha in S.maps:
            if mod.sigma(alpha.apply_sparse(r)) != alpha @ sig:
                return False
    return True


def verify_sr_generator(ext: Extension, mod: SRModule) -> bool:
    """id_A = sum c lambda(r) o s with each r -> lambda(r) o s an S-map R -> S."""
    if not mod.generator:
        return False
    A = ext.A
    S = mod.S
    n = ext.n
    acc = Mat(n, n)
    unit = to_sparse(A.unit)
    for c, r, s in mod.generator_witness:
        acc = acc + (A.left_of(r) @ s).scale(c)
        if not S.contains(s):
            return False
        # x -> lambda(x) o s is S-linear iff (alpha - lambda(alpha(1))) o s = 0
        for alpha in S.maps:
            if not (alpha @ s - A.left_of(alpha.apply_sparse(unit)) @ s).is_zero():
                return False
    return acc == Mat.identity(n)


# ---------------------------------------------------------------------------

def balanced_check(ext: Extension, E: EndRing | None = None) -> bool:
    """End(_E A) equals rho(iota(B))."""
    E = E or compute_E(ext)
    comm = intertwiners(E.maps, E.maps, ext.n, ext.n)
    rb = Subspace.span((ext.A.right_of(b).vec() for b in ext.b_images), ext.n * ext.n)
    return comm == rb


@dataclass
class IsoResult:
    report: MapReport
    tensor: BalancedTensor
    inverse_ok: bool | None = None

    @property
    def bijective(self) -> bool:
        return self.report.bijective


def smash_iso(ext: Extension, S: EndRing | None = None, E: EndRing | None = None) -> IsoResult:
    """A (x)_R S -> E, a (x) alpha -> lambda(a) o alpha."""
    S = S or compute_S(ext)
    E = E or compute_E(ext)
    A = ext.A
    R = ext.R
    right = [A.right_of(r) for r in R.basis_sparse]
    left = []
    for r in R.basis_sparse:
        lr = A.left_of(r)
        cols = []
        for alpha in S.maps:
            c = S.coords(lr @ alpha)
            if c is None:
                raise SelfCheckError("lambda(R) o S not inside S")
            cols.append(to_sparse(c))
        left.append(Mat.from_columns(cols, S.dim))
    bt = BalancedTensor(right, left, ext.n, S.dim)

    def f(a, sc):
        m = A.left_of(a) @ S.element(to_dense(sc, S.dim))
        c = E.coords(m)
        if c is None:
            raise SelfCheckError("lambda(a) o alpha is not right B-linear")
        return to_sparse(c)

    return IsoResult(map_report(bt.induced(f, E.dim)), bt)


def e_tensor_r(ext: Extension, S: EndRing | None = None, E: EndRing | None = None) -> IsoResult:
    """E (x)_S R -> A by evaluation, plus the inverse a -> lambda(a) (x) 1."""
    S = S or compute_S(ext)
    E = E or compute_E(ext)
    A = ext.A
    R = ext.R
    right = []
    for alpha in S.maps:
        cols = []
        for f in E.maps:
            c = E.coords(f @ alpha)
            if c is None:
                raise SelfCheckError("E o S not inside E")
            cols.append(to_sparse(c))
        right.append(Mat.from_columns(cols, E.dim))
    left = _r_action(ext, S)
    bt = BalancedTensor(right, left, E.dim, R.dim)

    def ev(fc, rc):
        f = E.element(to_dense(fc, E.dim))
        return f.apply_sparse(R.from_coords(to_dense(rc, R.dim)))

    res = IsoResult(map_report(bt.induced(ev, ext.n)), bt)
    if res.bijective:
        one_r = R.coords(A.unit)
        ok = True
        for a in range(ext.n):
            cl = bt.pair(to_sparse(E.coords(A.left(a))), to_sparse(one_r))
            if res.report.matrix.apply_sparse(cl) != {a: ONE}:
                ok = False
                break
        if ok:
            for q, (m, r) in enumerate(bt.reps):
                a = ev({m: ONE}, {r: ONE})
                back = bt.pair(to_sparse(E.coords(A.left_of(a))), to_sparse(one_r))
                if back != {q: ONE}:
                    ok = False
                    break
        res.inverse_ok = ok
    return res


def end_sr(ext: Extension, S: EndRing | None = None):
    """End(_S R) as a subspace of R-coordinate matrices, and whether it equals Z(B)."""
    S = S or compute_S(ext)
    R = ext.R
    acts = _r_action(ext, S)
    comm = intertwiners(acts, acts, R.dim, R.dim)
    A = ext.A
    zb = []
    for z in ext.center_B_image.basis_sparse:
        cols = []
        for r in R.basis_sparse:
            c = R.coords(A.mul_sparse(z, r))
            if c is None:
                raise SelfCheckError("Z(B) R not inside R")
            cols.append(to_sparse(c))
        zb.append(Mat.from_columns(cols, R.dim).vec())
    zspace = Subspace.span(zb, R.dim * R.dim)
    return comm, comm == zspace


def s_on_r_is_cyclic(ext: Extension, S: EndRing) -> bool:
    """lambda(R) . 1 = R, the orbit of 1 under S."""
    A = ext.A
    unit = to_sparse(A.unit)
    orbit = Subspace.span((alpha.apply_sparse(unit) for alpha in S.maps), ext.n)
    return orbit == ext.R


def s_contains_lr(ext: Extension, S: EndRing) -> bool:
    A = ext.A
    return all(S.contains(A.left_of(r)) and S.contains(A.right_of(r)) for r in ext.R.basis_sparse)


__all__ = ["EndRing", "compute_E", "compute_S", "s_action", "s_invariants", "SRModule",
           "sr_module", "verify_sr_projective", "verify_sr_generator", "balanced_check",
           "IsoResult", "smash_iso", "e_tensor_r", "end_sr", "s_on_r_is_cyclic", "s_contains_lr"]
