"""Permutation groups, group algebras and their Hopf structure.

Permutations are tuples of images on {0..d-1}; the product p*q is the
composite "apply q, then p", i.e. (p*q)[i] = p[q[i]].
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .algebra import Algebra, AlgebraError, Extension, Morphism, make_extension
from .exactlin import ONE, ZERO, Mat, Subspace, _axpy, to_sparse


def compose(p, q):
    return tuple(p[i] for i in q)


def invert(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _check_perm(p, degree):
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise AlgebraError(f"not a permutation of degree {degree}: {p!r}")
    return tuple(p)


def cycles_to_perm(cycles, degree):
    """Build a permutation from 1-based cycles, e.g. [[1,2,3]] in degree 3."""
    img = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    return _check_perm(img, degree)


class PermGroup:
    def __init__(self, degree: int, generators=(), name: str = ""):
        self.degree = degree
        self.generators = [_check_perm(tuple(g), degree) for g in generators]
        self.name = name
        e = tuple(range(degree))
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = compose(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        self.elements = sorted(seen)
        self.index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self):
        return tuple(range(self.degree))

    def contains(self, p) -> bool:
        return tuple(p) in self.index

    def issubgroup(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.elements)

    def __repr__(self):
        return f"PermGroup({self.name or '?'}, order={self.order})"


def closure(generators, degree: int | None = None, name: str = "") -> PermGroup:
    generators = [tuple(g) for g in generators]
    if degree is None:
        if not generators:
            degree = 1
        else:
            degree = len(generators[0])
    return PermGroup(degree, generators, name)


def group_algebra(G: PermGroup, name: str = "") -> Algebra:
    idx = G.index
    prods = {}
    for i, g in enumerate(G.elements):
        for j, h in enumerate(G.elements):
            prods[(i, j)] = {idx[compose(g, h)]: ONE}
    unit = [ZERO] * G.order
    unit[idx[G.identity]] = ONE
    return Algebra(G.order, prods, unit, name or f"Q[{G.name}]")


def subgroup_extension(G: PermGroup, H: PermGroup, name: str = "") -> Extension:
    if not H.issubgroup(G):
        raise AlgebraError("H is not a subgroup of G")
    A = group_algebra(G)
    B = group_algebra(H)
    data = [{} for _ in range(G.order)]
    for j, h in enumerate(H.elements):
        data[G.index[h]][j] = ONE
    return make_extension(B, A, Mat(G.order, H.order, data),
                          name or f"{G.name or 'G'}>{H.name or 'H'}")


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    hs = set(H.elements)
    for g in G.generators or [G.identity]:
        gi = invert(g)
        for h in H.elements:
            if compose(compose(g, h), gi) not in hs:
                return False
    return True


# ---------------------------------------------------------------------------

@dataclass
class HopfData:
    algebra: Algebra
    comult: Mat      # A -> A (x) A, index i*n + j
    counit: list     # row vector
    antipode: Mat

    @cached_property
    def _n(self):
        return self.algebra.dim

    def problems(self) -> list:
        """Violated Hopf axioms on basis elements (empty when all hold)."""
        A = self.algebra
        n = A.dim
        out = []
        D = self.comult.columns_sparse()
        Sm = self.antipode.columns_sparse()
        eps = self.counit

        def d_left(w):   # (Delta (x) id) on A(x)A
            acc = {}
            for key, c in w.items():
                i, j = divmod(key, n)
                for k, x in D[i].items():
                    _axpy(acc, c * x, {k * n + j: ONE})
            return acc

        def d_right(w):
            acc = {}
            for key, c in w.items():
                i, j = divmod(key, n)
                for k, x in D[j].items():
                    _axpy(acc, c * x, {i * n * n + k: ONE})
            return acc

        unit = to_sparse(A.unit)
        for a in range(n):
            if d_left(D[a]) != d_right(D[a]):
                out.append(("coassociativity", a))
            l_cu, r_cu = {}, {}
            for key, c in D[a].items():
                i, j = divmod(key, n)
                _axpy(l_cu, c * eps[i], {j: ONE})
                _axpy(r_cu, c * eps[j], {i: ONE})
            if l_cu != {a: ONE} or r_cu != {a: ONE}:
                out.append(("counit", a))
            s1, s2 = {}, {}
            for key, c in D[a].items():
                i, j = divmod(key, n)
                _axpy(s1, c, A.mul_sparse(Sm[i], {j: ONE}))
                _axpy(s2, c, A.mul_sparse({i: ONE}, Sm[j]))
            target = {k: x * eps[a] for k, x in unit.items() if x * eps[a]}
            if s1 != target or s2 != target:
                out.append(("antipode", a))
        return out


def hopf_on_group_algebra(G: PermGroup) -> HopfData:
    A = group_algebra(G)
    n = G.order
    idx = G.index
    comult = Mat.from_columns([{i * n + i: ONE} for i in range(n)], n * n)
    anti = Mat.from_columns([{idx[invert(g)]: ONE} for g in G.elements], n)
    return HopfData(A, comult, [ONE] * n, anti)


def _hopf_subalgebra_space(hopf: HopfData, K: Morphism) -> Subspace:
    A = hopf.algebra
    n = A.dim
    Kspace = Subspace.span(K.images(), n)
    Kspace2 = Subspace.span(({i * n + j: ONE} for i in range(n) for j in range(n)), n * n)
    # closure under Delta: image must lie in K (x) K
    kk = Subspace.span((_kron(u, v, n) for u in Kspace.basis_sparse for v in Kspace.basis_sparse),
                       n * n)
    del Kspace2
    for u in Kspace.basis_sparse:
        if not kk.contains(hopf.comult.apply_sparse(u)):
            raise AlgebraError("K is not closed under the comultiplication")
        if not Kspace.contains(hopf.antipode.apply_sparse(u)):
            raise AlgebraError("K is not closed under the antipode")
    return Kspace


def _kron(u: dict, v: dict, n: int) -> dict:
    return {i * n + j: x * y for i, x in u.items() for j, y in v.items()}


def hopf_normal_check(hopf: HopfData, K: Morphism) -> bool:
    """Both adjoint actions of the big algebra preserve K."""
    A = hopf.algebra
    n = A.dim
    Kspace = _hopf_subalgebra_space(hopf, K)
    D = hopf.comult.columns_sparse()
    Sm = hopf.antipode.columns_sparse()
    for a in range(n):
        for k in Kspace.basis_sparse:
            left, right = {}, {}
            for key, c in D[a].items():
                i, j = divmod(key, n)
                _axpy(left, c, A.mul_sparse(A.mul_sparse(Sm[i], k), {j: ONE}))
                _axpy(right, c, A.mul_sparse(A.mul_sparse({i: ONE}, k), Sm[j]))
            if not Kspace.contains(left) or not Kspace.contains(right):
                return False
    return True


def bplus_criterion(hopf: HopfData, K: Morphism) -> bool:
    """A B+ = B+ A for B+ the augmentation ideal of K; also checks B+ = A+ cap K."""
    from .exactlin import intersect, kernel
    from .algebra import products_span
    A = hopf.algebra
    n = A.dim
    Kspace = _hopf_subalgebra_space(hopf, K)
    eps = Mat(1, n, [{i: x for i, x in enumerate(hopf.counit) if x}])
    a_plus = kernel(eps)
    # B+ as the kernel of eps restricted to K
    kb = Kspace.basis_sparse
    coeffs = kernel(Mat(1, len(kb), [{j: sum((hopf.counit[i] * x for i, x in v.items()), ZERO)
                                      for j, v in enumerate(kb)
                                      if sum((hopf.counit[i] * x for i, x in v.items()), ZERO)}]))
    vecs = []
    for c in coeffs.basis_sparse:
        acc = {}
        for j, x in c.items():
            _axpy(acc, x, kb[j])
        vecs.append(acc)
    b_plus = Subspace.span(vecs, n)
    if b_plus != intersect(a_plus, Kspace):
        raise AlgebraError("augmentation ideal of K differs from A+ cap K")
    full = Subspace.full(n)
    return products_span(A, full, b_plus) == products_span(A, b_plus, full)


# ---------------------------------------------------------------------------
# groups of order <= 12 and their subgroups

def _cyc(n, degree=None):
    d = degree or n
    return tuple([(i + 1) % n for i in range(n)] + list(range(n, d)))


def _shift(p, off, degree):
    img = list(range(degree))
    for i, x in enumerate(p):
        img[off + i] = off + x
    return tuple(img)


def _product(*parts):
    degree = sum(len(p[0]) if p else 0 for p in parts)
    gens, off = [], 0
    for p in parts:
        d = len(p[0])
        gens += [_shift(g, off, degree) for g in p]
        off += d
    return gens, degree


def _dihedral(n):
    r = _cyc(n)
    s = tuple((-i) % n for i in range(n))
    return [r, s]


def _regular(elements, mul):
    """Left regular permutation representation of an abstract group."""
    idx = {g: i for i, g in enumerate(elements)}
    return [tuple(idx[mul(g, h)] for h in elements) for g in elements]


def _quaternion_gens():
    # Q8 as {+-1, +-i, +-j, +-k} with quaternion multiplication on tuples (sign, unit)
    table = {("1", u): (1, u) for u in "1ijk"}
    table.update({(u, "1"): (1, u) for u in "1ijk"})
    table.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elements = [(s, u) for s in (1, -1) for u in "1ijk"]

    def mul(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)
    reg = _regular(elements, mul)
    return [reg[elements.index((1, "i"))], reg[elements.index((1, "j"))]]


def _dic3_gens():
    # <a, x | a^6 = 1, x^2 = a^3, x a x^-1 = a^-1>; elements a^k x^e, e in {0,1}
    elements = [(k, e) for e in (0, 1) for k in range(6)]

    def mul(g, h):
        k1, e1 = g
        k2, e2 = h
        k2 = k2 if e1 == 0 else -k2
        k = k1 + k2
        e = e1 + e2
        if e == 2:
            k += 3
            e = 0
        return (k % 6, e)
    reg = _regular(elements, mul)
    return [reg[elements.index((1, 0))], reg[elements.index((0, 1))]]


def group_catalog(max_order: int = 12) -> list:
    """Every group of order <= max_order up to isomorphism, as PermGroups."""
    cat = []
    for n in range(1, 13):
        cat.append((f"C{n}", [_cyc(n)] if n > 1 else [], max(n, 1)))
    for name, parts in [("C2xC2", [[_cyc(2)], [_cyc(2)]]),
                        ("C4xC2", [[_cyc(4)], [_cyc(2)]]),
                        ("C2xC2xC2", [[_cyc(2)], [_cyc(2)], [_cyc(2)]]),
                        ("C3xC3", [[_cyc(3)], [_cyc(3)]]),
                        ("C6xC2", [[_cyc(6)], [_cyc(2)]])]:
        gens, degree = _product(*parts)
        cat.append((name, gens, degree))
    for n in (3, 4, 5, 6):
        cat.append((f"D{n}", _dihedral(n), n))
    cat.append(("Q8", _quaternion_gens(), 8))
    cat.append(("A4", [cycles_to_perm([[1, 2, 3]], 4), cycles_to_perm([[1, 2], [3, 4]], 4)], 4))
    cat.append(("Dic3", _dic3_gens(), 12))
    out = []
    for name, gens, degree in cat:
        G = PermGroup(degree, gens, name)
        if G.order <= max_order:
            out.append(G)
    out.sort(key=lambda g: (g.order, g.name))
    return out


def subgroups(G: PermGroup) -> list:
    """All subgroups of G, each generated by its own elements' cyclic joins."""
    found = {}
    cyclic = {}
    for g in G.elements:
        H = PermGroup(G.degree, [g])
        cyclic[frozenset(H.elements)] = g
    frontier = {frozenset([G.identity]): []}
    found.update(frontier)
    cyc_items = sorted(cyclic.items(), key=lambda kv: sorted(kv[0]))
    while frontier:
        nxt = {}
        for elems, gens in frontier.items():
            for celems, g in cyc_items:
                if celems <= elems:
                    continue
                H = PermGroup(G.degree, gens + [g])
                key = frozenset(H.elements)
                if key not in found and key not in nxt:
                    nxt[key] = gens + [g]
        found.update(nxt)
        frontier = nxt
    out = [PermGroup(G.degree, gens) for gens in found.values()]
    out.sort(key=lambda h: (h.order, h.elements))
    for i, H in enumerate(out):
        H.name = f"{G.name}.H{i}(|{H.order}|)"
    return out


def subgroup_pairs(max_order: int = 12):
    for G in group_catalog(max_order):
        for H in subgroups(G):
            yield G, H
