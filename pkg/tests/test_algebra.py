import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringext.algebra import (Algebra, AlgebraError, Ideal, Morphism, center, make_extension,
                             sugano_ideal_identity, validate_algebra)
from ringext.exactlin import ONE, Mat, Subspace
from ringext.fixtures import matrix_algebra, random_matrix_extension, scalars, unit_embedding
from ringext.grouphopf import PermGroup, cycles_to_perm, group_algebra


def s3():
    return PermGroup(3, [cycles_to_perm([[1, 2, 3]], 3), cycles_to_perm([[1, 2]], 3)], "S3")


def test_fixture_algebras_validate(fixtures):
    for ext in fixtures.values():
        assert validate_algebra(ext.A).ok, ext.name
        assert validate_algebra(ext.B).ok, ext.name
        assert ext.iota.problems() == [], ext.name


def test_matrix_units_validate():
    assert validate_algebra(matrix_algebra(2)).ok
    assert validate_algebra(matrix_algebra(3)).ok


def test_perturbed_constants_report_triple():
    # E1 with x0 x0 = x0 + x1: associativity breaks at (0, 0, 1)
    bad = Algebra(2, {(0, 0): {0: ONE, 1: ONE}, (1, 1): {1: ONE}}, [1, 1], "bad")
    rep = validate_algebra(bad)
    assert not rep.ok
    assert ("associativity", 0, 0, 1) in rep.violations


def test_centralizer_examples(fixtures):
    e6 = fixtures["E6"]
    assert e6.R == e6.center_A
    assert fixtures["E1"].R.dim == 2
    assert fixtures["E2"].R == Subspace.full(4)


def test_center_examples():
    a3 = PermGroup(3, [cycles_to_perm([[1, 2, 3]], 3)])
    assert center(group_algebra(a3)).dim == 3
    assert center(matrix_algebra(2)) == Subspace.span([[1, 0, 0, 1]], 4)
    G = s3()
    z = center(group_algebra(G))
    assert z.dim == 3
    # class sums are central
    classes = {}
    for g in G.elements:
        key = tuple(sorted(len(c) for c in _cycles(g)))
        classes.setdefault(key, []).append(G.index[g])
    for idxs in classes.values():
        assert z.contains({i: ONE for i in idxs})


def _cycles(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i not in seen:
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j)
                j = p[j]
            out.append(c)
    return out


def test_bad_morphism_rejected():
    A = matrix_algebra(2)
    with pytest.raises(AlgebraError):
        make_extension(scalars(), A, Mat.from_lists([[1], [0], [0], [0]]))
    with pytest.raises(AlgebraError):
        Morphism(scalars(), A, Mat.identity(2))


def test_sugano_ideal_identity(fixtures):
    e2 = fixtures["E2"]
    A = e2.A
    zero = Ideal(A, Subspace.zero(4))
    whole = Ideal(A, Subspace.full(4))
    assert sugano_ideal_identity(e2, zero)
    assert sugano_ideal_identity(e2, whole)
    # every ideal of M2 is generated by any of its elements: exhaust via matrix units
    for i in range(4):
        assert Ideal.generated_by(A, [{i: ONE}]).span == Subspace.full(4)
    with pytest.raises(AlgebraError):
        Ideal(A, Subspace.span([{0: ONE}], 4))


def test_sugano_fails_without_hseparability():
    # UT2 over its diagonal: the radical e12 contracts to zero
    from ringext.fixtures import e5
    ext = e5()
    rad = Ideal(ext.A, Subspace.span([{1: ONE}], 3))
    assert not sugano_ideal_identity(ext, rad)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_random_extensions_valid(seed):
    ext = random_matrix_extension(seed)
    assert validate_algebra(ext.B).ok
    assert ext.iota.problems() == []
    # B lies inside the centralizer of R
    for r in ext.R.basis_sparse:
        for b in ext.b_images:
            assert ext.A.mul_sparse(r, b) == ext.A.mul_sparse(b, r)
