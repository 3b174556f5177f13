from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ringext.exactlin import (Mat, Q, Subspace, det, fmt, generic_invertibility, intersect, inverse,
                              kernel, rref, solve)


def M(rows):
    return Mat.from_lists(rows)


small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


def test_scalars_parse_and_print():
    assert Q("3/6") == Fraction(1, 2)
    assert fmt(Q("-4/2")) == "-2"
    assert fmt(Q("2/3")) == "2/3"
    with pytest.raises(ValueError):
        Q("1/0")


def test_rref_examples():
    red, piv, rank = rref(Mat.identity(3))
    assert red == Mat.identity(3) and list(piv) == [0, 1, 2] and rank == 3
    red, piv, rank = rref(Mat.zero(2, 2))
    assert red == Mat.zero(2, 2) and list(piv) == [] and rank == 0
    red, piv, rank = rref(M([[1, 2], [2, 4]]))
    assert red == M([[1, 2], [0, 0]]) and rank == 1


def test_solve_examples():
    b = [Q(3), Q("-1/2")]
    s = solve(Mat.identity(2), b)
    assert list(s.particular) == b and s.nullity == 0
    s = solve(Mat.zero(2, 2), [0, 0])
    assert s.nullity == 2 and not any(s.particular)
    s = solve(M([[1, 1], [1, 1]]), [1, 1])
    assert list(s.particular) == [1, 0]
    assert s.homogeneous == Subspace.span([[1, -1]], 2)
    assert solve(M([[1, 1], [1, 1]]), [1, 2]) is None


def test_kernel_examples():
    assert kernel(Mat.identity(3)).dim == 0
    assert kernel(Mat.zero(4, 4)) == Subspace.full(4)
    k = kernel(M([[1, 2], [2, 4]]))
    assert k == Subspace.span([[2, -1]], 2) and k.dim == 1


def test_intersect_examples():
    u = Subspace.span([[1, 0, 1], [0, 1, 0]], 3)
    assert intersect(u, u) == u
    assert intersect(Subspace.span([[1, 0]], 2), Subspace.span([[0, 1]], 2)).dim == 0
    v = Subspace.span([[1, 0, 0], [0, 0, 1]], 3)
    w = intersect(u, v)
    assert w == Subspace.span([[1, 0, 1]], 3)


def test_generic_invertibility_examples():
    found, lam, complete = generic_invertibility([Mat.identity(2)])
    assert found and [Q(x) for x in lam] == [1]
    found, lam, complete = generic_invertibility([Mat.zero(2, 2)])
    assert not found and complete
    e11, e22 = M([[1, 0], [0, 0]]), M([[0, 0], [0, 1]])
    found, lam, _ = generic_invertibility([e11, e22])
    assert found and all(x != 0 for x in lam)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rref(M(rows))[2] == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(rows):
    m = M(rows)
    k = kernel(m)
    assert k.dim + rref(m)[2] == m.cols
    for v in k.basis_sparse:
        assert m.apply_sparse(v) == {}


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent(rows, x):
    m = M(rows)
    x = x[:m.cols]
    b = m @ [Q(v) for v in x]
    s = solve(m, b)
    assert s is not None
    assert m @ list(s.particular) == list(b)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_det_and_inverse_match_sympy(rows):
    d = det(M(rows))
    assert d == Fraction(str(sympy.Matrix(rows).det()))
    if d:
        assert inverse(M(rows)) @ M(rows) == Mat.identity(len(rows))


@settings(max_examples=40, deadline=None)
@given(matrices(4), matrices(4))
def test_intersection_dimension_formula(a, b):
    n = 4
    u = Subspace.span([(r + [0] * n)[:n] for r in a], n)
    v = Subspace.span([(r + [0] * n)[:n] for r in b], n)
    assert (u + v).dim + intersect(u, v).dim == u.dim + v.dim
    assert all(u.contains(x) and v.contains(x) for x in intersect(u, v).basis_sparse)


def test_subspace_is_canonical():
    a = Subspace.span([[1, 2, 3], [0, 1, 1]], 3)
    b = Subspace.span([[1, 3, 4], [2, 4, 6]], 3)
    assert a == b and a.basis_sparse == b.basis_sparse
