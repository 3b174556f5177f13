from hypothesis import given, settings
from hypothesis import strategies as st

from ringext.algebra import validate_algebra
from ringext.exactlin import ONE, Q, to_sparse
from ringext.fixtures import random_matrix_extension
from ringext.tensorsq import (build_tensor_square, centralized_part, gamma_map, mu_action,
                              mu_action_matrices)

FIXTURE_DIMS = {"E1": 4, "E2": 16, "E3": 12, "E4": 18, "E5": 4, "E6": 3}
T_DIMS = {"E1": 4, "E2": 16, "E3": 8, "E4": 10, "E5": 2, "E6": 1}


def test_tensor_square_dims(contexts):
    for k, ctx in contexts.items():
        assert ctx.ts.dim == FIXTURE_DIMS[k], k
        assert ctx.ts.mu_well_defined(), k


def test_trivial_extension_collapses(fixtures):
    e6 = fixtures["E6"]
    assert build_tensor_square(e6).dim == e6.n


def test_centralized_parts(contexts):
    e6 = contexts["E6"]
    assert centralized_part(e6.ts, "B").dim == e6.ext.center_A.dim == 1
    e2 = contexts["E2"]
    assert centralized_part(e2.ts, "B").dim == 16
    # A (x) A = A^e = M4 as an A-bimodule: its A-central part is 4-dimensional
    ac = centralized_part(e2.ts, "A")
    assert ac.dim == 4
    ts = e2.ts
    sep = {}
    for i in range(2):
        for k, c in ts.simple({2 * i: ONE}, {i: ONE}).items():
            sep[k] = sep.get(k, 0) + c
    assert ac.contains({k: c for k, c in sep.items() if c})


def test_t_ring_is_an_algebra(contexts):
    for k, ctx in contexts.items():
        T = ctx.T
        assert T.dim == T_DIMS[k], k
        assert validate_algebra(T.algebra).ok, k


def test_t_ring_examples(contexts):
    assert contexts["E1"].T.algebra.is_commutative()
    e6 = contexts["E6"]
    # T of A|A is Z(A) = Q 1 for UT2
    assert e6.T.dim == e6.ext.center_A.dim


def test_mu_action_is_right_action(contexts):
    for k in ("E1", "E3", "E5"):
        T = contexts[k].T
        R = contexts[k].ext.R
        mats = mu_action_matrices(T)
        one = T.one
        for r in R.basis_sparse:
            r = [r.get(i, 0) for i in range(contexts[k].ext.n)]
            assert [Q(x) for x in mu_action(T, r, one)] == [Q(x) for x in r], k
        for i in range(T.dim):
            for j in range(T.dim):
                ei = [ONE if t == i else 0 for t in range(T.dim)]
                ej = [ONE if t == j else 0 for t in range(T.dim)]
                prod = T.mul(ei, ej)
                lhs = sum((m.scale(c) for c, m in zip(prod, mats) if c), mats[0].scale(0))
                # r.(t t') = (r.t).t'
                assert lhs == mats[j] @ mats[i], k


def test_gamma_bijective(contexts):
    for k in ("E6", "E3", "E2", "E1"):
        assert gamma_map(contexts[k].T)[0].bijective, k
    assert not gamma_map(contexts["E5"].T)[0].bijective


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 500), st.data())
def test_balanced_relations_hold(seed, data):
    ext = random_matrix_extension(seed, 2)
    ts = build_tensor_square(ext)
    A = ext.A
    a = to_sparse([Q(x) for x in data.draw(st.lists(st.integers(-2, 2), min_size=4, max_size=4))])
    b = to_sparse([Q(x) for x in data.draw(st.lists(st.integers(-2, 2), min_size=4, max_size=4))])
    for beta in ext.b_images:
        assert ts.simple(A.mul_sparse(a, beta), b) == ts.simple(a, A.mul_sparse(beta, b))
    # mu is the multiplication on representatives
    assert ts.mu.apply_sparse(ts.simple(a, b)) == A.mul_sparse(a, b)
    # the section is a right inverse of the projection
    for q in range(ts.dim):
        assert ts.project.apply_sparse(ts.rep({q: ONE})) == {q: ONE}
