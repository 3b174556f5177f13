"""Built-in example extensions E1..E6 and random matrix-subalgebra extensions."""
from __future__ import annotations

import random

from .algebra import Algebra, Extension, make_extension, subalgebra, trivial_extension
from .exactlin import ONE, Echelon, Mat, Subspace
from .grouphopf import PermGroup, cycles_to_perm, subgroup_extension


def scalars() -> Algebra:
    return Algebra(1, {(0, 0): {0: ONE}}, [1], "Q")


def matrix_algebra(d: int) -> Algebra:
    """M_d(Q) on matrix units e_ij (index i*d + j)."""
    prods = {}
    for i in range(d):
        for j in range(d):
            for l in range(d):
                prods[(i * d + j, j * d + l)] = {i * d + l: ONE}
    return Algebra(d * d, prods, [ONE if i == j else 0 for i in range(d) for j in range(d)],
                   f"M{d}")


def unit_embedding(A: Algebra) -> Mat:
    return Mat.from_columns([{i: x for i, x in enumerate(A.unit) if x}], A.dim)


def e1() -> Extension:
    A = Algebra(2, {(0, 0): {0: ONE}, (1, 1): {1: ONE}}, [1, 1], "QxQ")
    return make_extension(scalars(), A, unit_embedding(A), "E1")


def e2() -> Extension:
    A = matrix_algebra(2)
    return make_extension(scalars(), A, unit_embedding(A), "E2")


def _s3():
    return PermGroup(3, [cycles_to_perm([[1, 2, 3]], 3), cycles_to_perm([[1, 2]], 3)], "S3")


def e3() -> Extension:
    G = _s3()
    H = PermGroup(3, [cycles_to_perm([[1, 2, 3]], 3)], "A3")
    return subgroup_extension(G, H, "E3")


def e4() -> Extension:
    G = _s3()
    H = PermGroup(3, [cycles_to_perm([[1, 2]], 3)], "<(12)>")
    return subgroup_extension(G, H, "E4")


def upper_triangular() -> Algebra:
    # basis e11, e12, e22
    return Algebra(3, {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 2): {1: ONE}, (2, 2): {2: ONE}},
                   [1, 0, 1], "UT2")


def e5() -> Extension:
    A = upper_triangular()
    B = Algebra(2, {(0, 0): {0: ONE}, (1, 1): {1: ONE}}, [1, 1], "D2")
    iota = Mat.from_columns([{0: ONE}, {2: ONE}], 3)
    return make_extension(B, A, iota, "E5")


def e6(A: Algebra | None = None) -> Extension:
    """Trivial extension A|A; the default A is the 2x2 upper triangular algebra."""
    return trivial_extension(A or upper_triangular(), "E6")


BUILTINS = {
    "E1": (e1, "Q x Q over Q"),
    "E2": (e2, "M2(Q) over Q"),
    "E3": (e3, "Q[S3] over Q[A3]"),
    "E4": (e4, "Q[S3] over Q[<(12)>]"),
    "E5": (e5, "upper triangular 2x2 over diagonal"),
    "E6": (e6, "B = A (upper triangular 2x2)"),
}


def builtin(name: str) -> Extension:
    try:
        return BUILTINS[name][0]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}") from None


def all_fixtures() -> dict:
    return {k: builtin(k) for k in BUILTINS}


# ---------------------------------------------------------------------------

def generated_subalgebra(d: int, gens) -> Subspace:
    """Unital subalgebra of M_d spanned by words in the given matrices."""
    n = d * d
    e = Echelon(n)
    basis = []
    queue = [Mat.identity(d)] + list(gens)
    while queue:
        m = queue.pop(0)
        if e.add(m.vec()):
            basis.append(m)
            queue.extend(m @ g for g in gens)
    return Subspace.span((m.vec() for m in basis), n)


def random_matrix_extension(seed: int, d: int | None = None) -> Extension:
    """M_d(Q) over the unital subalgebra generated by 1-2 random sparse {-1,0,1} matrices."""
    rng = random.Random(seed)
    d = d or rng.choice((2, 3))
    k = rng.choice((1, 1, 2))
    density = rng.choice((0.25, 0.4, 0.6))
    gens = []
    for _ in range(k):
        rows = [[rng.choice((-1, 1)) if rng.random() < density else 0 for _ in range(d)]
                for _ in range(d)]
        gens.append(Mat.from_lists(rows))
    space = generated_subalgebra(d, gens)
    A = matrix_algebra(d)
    B, emb = subalgebra(A, space, f"B{seed}")
    return make_extension(B, A, emb.matrix, f"rand{seed}:M{d}")
