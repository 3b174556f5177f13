from hypothesis import given, settings
from hypothesis import strategies as st

from ringext.bicoring import (build_coring, build_t_bialgebroid, closing_criterion, coaction,
                              coinvariants, delta_agreement, galois_check, integrals, pairing)
from ringext.classify import (Context, FrobeniusWitness, check_d2, check_frobenius,
                              frobenius_dual_bases)
from ringext.endos import balanced_check
from ringext.exactlin import ONE, Mat, Q, to_sparse
from ringext.fixtures import random_matrix_extension

D2 = ("E1", "E2", "E3", "E6")


def _coring(ctx):
    qb = check_d2(ctx)
    assert qb.d2
    return qb, build_coring(ctx, qb)


def test_t_bialgebroid(contexts):
    for k in D2:
        ctx = contexts[k]
        qb = check_d2(ctx)
        _, rec = build_t_bialgebroid(ctx, qb)
        assert rec.ok, (k, rec.failed)
        # the coproduct does not depend on the chosen quasibase
        assert delta_agreement(ctx, qb) in (True, None), k


def test_galois_coring(contexts):
    for k in D2:
        ctx = contexts[k]
        _, cor = _coring(ctx)
        g = galois_check(ctx, cor)
        assert g.ok and g.can_bijective and g.beta_bijective, (k, g.record.failed)
        for item in ("Delta_C(x) = x (x)_A x", "eps_C(x) = 1", "can o beta = id",
                     "beta o can = id"):
            assert g.record[item], (k, item)


def test_e6_can_is_identity_sized(contexts):
    ctx = contexts["E6"]
    _, cor = _coring(ctx)
    assert cor.dim == ctx.ts.dim == 3


def test_coaction_and_coinvariants(contexts):
    dims = {"E1": 1, "E2": 1, "E3": 3, "E6": 3}
    for k in D2:
        ctx = contexts[k]
        qb, cor = _coring(ctx)
        co = coaction(ctx, qb, cor)
        assert co.record.ok, (k, co.record.failed)
        sp, equal, excess = coinvariants(ctx, co, cor)
        assert equal and excess == 0 and sp.dim == dims[k], k
        assert balanced_check(ctx.ext)


def test_pairing_nondegenerate(contexts):
    for k in ("E3", "E6", "E1", "E2"):
        assert pairing(contexts[k]).nondegenerate, k


def test_closing_criterion(contexts):
    for k, ctx in contexts.items():
        lhs, rd2, agree = closing_criterion(ctx, check_d2(ctx, sides=("right",)).right_d2)
        assert agree, k


def test_integrals_fixtures(contexts):
    ks = {"E1": 1, "E3": Q("1/2"), "E4": Q("1/3"), "E6": 1}
    for k, ctx in contexts.items():
        fr = check_frobenius(ctx.ext)
        if not fr.frobenius:
            continue
        r = integrals(ctx, fr.witness)
        assert r.in_T and r.integral_law and r.central_inverse and r.eps_t0_ok and r.E_integral, k
        if k in ks:
            assert r.k == ks[k], k


def test_integrals_e6_trivial(contexts):
    ctx = contexts["E6"]
    u = to_sparse(ctx.ext.A.unit)
    r = integrals(ctx, FrobeniusWitness(Mat.identity(3), [u], [u]))
    assert r.t0 == ctx.ts.one and r.k == 1 and r.E_integral


def test_integrals_e2_trace(contexts):
    ctx = contexts["E2"]
    w = frobenius_dual_bases(ctx.ext, Mat.from_lists([[1, 0, 0, 1]]))
    r = integrals(ctx, w)
    expected = {}
    for i in range(2):
        for j in range(2):
            for key, c in ctx.ts.simple({2 * i + j: ONE}, {2 * j + i: ONE}).items():
                expected[key] = expected.get(key, 0) + c
    assert r.t0 == expected
    assert r.k == Q("1/2") and r.central_inverse and r.integral_law


def test_integrals_e3_truncation(contexts):
    ctx = contexts["E3"]
    ext = ctx.ext
    E = Mat.from_lists([list(r) for r in zip(*ext.iota.matrix.entries())], ext.n)
    r = integrals(ctx, frobenius_dual_bases(ext, E))
    assert r.integral_law and r.k == Q("1/2")


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 100_000))
def test_random_coring(seed):
    ctx = Context(random_matrix_extension(seed))
    qb = check_d2(ctx)
    assert qb.d2
    cor = build_coring(ctx, qb)
    assert galois_check(ctx, cor).ok
    sp, equal, excess = coinvariants(ctx, coaction(ctx, qb, cor), cor)
    assert sp.contains_subspace(ctx.ext.B_image) and excess >= 0
    if balanced_check(ctx.ext):
        assert equal


def test_unbalanced_random_has_extra_coinvariants():
    # seed 11 (first hit of a scan): D2 but not balanced, and A^coC is bigger than B
    ctx = Context(random_matrix_extension(11))
    qb = check_d2(ctx)
    cor = build_coring(ctx, qb)
    assert qb.d2 and galois_check(ctx, cor).ok
    assert not balanced_check(ctx.ext)
    _, equal, excess = coinvariants(ctx, coaction(ctx, qb, cor), cor)
    assert not equal and excess > 0
