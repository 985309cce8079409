"""Exact integer linear algebra: Smith form, solvers, groups, maps."""

from hypothesis import given, settings
from hypothesis import strategies as st

from dihedralhz.abelian import (
    FgAbGroup,
    FgAbMap,
    FreeComplex,
    Presentation,
    det,
    from_columns,
    identity,
    in_lattice,
    invariant_factors_of_quotient,
    kernel_basis,
    lattice_basis,
    mat_mul,
    mat_vec,
    merge_invariant_factors,
    smith_normal_form,
    snf_diagonal,
    solve_int,
)

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_reconstruction(M):
    D, U, V = smith_normal_form(M)
    assert mat_mul(mat_mul(U, M), V) == D
    assert abs(det(U)) == 1
    assert abs(det(V)) == 1
    diag = snf_diagonal(M)
    assert all(x >= 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]) if a)
    for r in range(len(D)):
        for c in range(len(D[0])):
            if r != c:
                assert D[r][c] == 0


@settings(max_examples=200, deadline=None)
@given(matrices, st.lists(st.integers(-5, 5), min_size=1, max_size=5))
def test_solve_int_roundtrip(A, x):
    x = (x + [0] * len(A[0]))[: len(A[0])]
    b = mat_vec(A, x)
    sol = solve_int(A, b)
    assert sol is not None
    assert mat_vec(A, sol) == b


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_kernel_basis_annihilates(A):
    ker = kernel_basis(A)
    for v in ker:
        assert mat_vec(A, v) == [0] * len(A)
    rank = sum(1 for d in snf_diagonal(A) if d)
    assert len(ker) == len(A[0]) - rank


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), max_size=4))
def test_lattice_membership(gens):
    basis = lattice_basis(gens, 4)
    for g in gens:
        assert in_lattice(g, basis) if basis else not any(g)
    for v in basis:
        assert in_lattice(v, gens)


def test_invariant_factors_basics():
    assert invariant_factors_of_quotient(2, [[2, 0], [0, 3]]) == (0, [6])
    assert invariant_factors_of_quotient(2, [[2], [0]]) == (1, [2])
    assert invariant_factors_of_quotient(3, []) == (3, [])
    assert invariant_factors_of_quotient(0, []) == (0, [])


def test_group_canonical_forms():
    assert FgAbGroup.from_relations(2, [[2, 0], [0, 3]]) == FgAbGroup(0, (6,))
    assert FgAbGroup.cyclic(1) == FgAbGroup.zero()
    assert str(FgAbGroup(1, (2, 4))) == "Z + Z/2 + Z/4"
    assert FgAbGroup.free(2).direct_sum(FgAbGroup.cyclic(3)) == FgAbGroup(2, (3,))
    merged = FgAbGroup(0, (2,)).direct_sum(FgAbGroup(0, (3,)))
    assert merged == FgAbGroup(0, (6,))
    assert tuple(merge_invariant_factors((2, 4), (6,))) == (2, 2, 12)
    assert FgAbGroup.zero().is_zero
    assert FgAbGroup(0, (5,)).order == 5


def test_map_kernel_image_cokernel():
    Z = Presentation.free(1)
    times6 = FgAbMap(Z, Z, [[6]])
    assert times6.kernel_presentation().group().is_zero
    assert times6.cokernel_presentation().group() == FgAbGroup(0, (6,))
    assert times6.image_presentation().group() == FgAbGroup(1, ())
    Z2 = Presentation.free(2)
    f = FgAbMap(Z2, Z2, [[2, 0], [0, 0]])
    assert f.kernel_presentation().group() == FgAbGroup(1, ())
    assert f.cokernel_presentation().group() == FgAbGroup(1, (2,))
    assert f.signature() == ((1, ()), (1, ()), (1, (2,)))


def test_map_respects_torsion_relations():
    mod4 = Presentation.make(1, [[4]])
    Z = Presentation.free(1)
    proj = FgAbMap(Z, mod4, [[1]])
    quad = proj.scale(4)
    assert quad.is_zero()
    double = proj.scale(2)
    assert double.equals(proj.add(proj))
    assert not double.is_zero()


def test_free_complex_homology():
    # 0 -> Z --6--> Z -> 0 concentrated in degrees 1, 0
    cx = FreeComplex({0: 1, 1: 1}, {1: [[6]]})
    _, pres0 = cx.homology_presentation(0)
    _, pres1 = cx.homology_presentation(1)
    assert pres0.group() == FgAbGroup(0, (6,))
    assert pres1.group().is_zero
    shifted = cx.shifted(3)
    _, spres = shifted.homology_presentation(3)
    assert spres.group() == FgAbGroup(0, (6,))


def test_from_columns_identity():
    cols = [[1, 0], [0, 1]]
    assert from_columns(cols, 2) == identity(2)
