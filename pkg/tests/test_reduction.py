"""Sparse chain reduction against direct Smith-form homology."""

from dihedralhz.abelian import FgAbGroup, homology_at
from dihedralhz.dihedral import group_spec
from dihedralhz.gmodules import fixed_subcomplex, hom_total_complex
from dihedralhz.oracle import rep_sphere_complex, s_gamma_complex
from dihedralhz.reduction import (
    SparseComplex,
    homology_of,
    level_to_sparse,
    reduce_complex,
)

LEVELS = ("G", "Cp", "C2", "e")


def _level_sparse(spec, bp, cp, bm, cm, tag):
    hom = hom_total_complex(
        rep_sphere_complex(spec, bp, cp), rep_sphere_complex(spec, bm, cm)
    )
    return level_to_sparse(fixed_subcomplex(hom, tag))


def test_reduction_matches_direct_homology():
    spec = group_spec(3)
    cases = [(1, 0, 0, 1), (0, 1, 1, 0), (1, 1, 0, 0), (0, 0, 1, 1)]
    for bp, cp, bm, cm in cases:
        for tag in LEVELS:
            sparse = _level_sparse(spec, bp, cp, bm, cm, tag)
            direct = sparse.to_free_complex()
            degrees = set(sparse.degrees()) | set(direct.degrees())
            for n in sorted(degrees):
                assert homology_of(sparse, n) == homology_at(direct, n), (
                    bp,
                    cp,
                    bm,
                    cm,
                    tag,
                    n,
                )


def test_reduction_core_is_smaller():
    spec = group_spec(3)
    sparse = _level_sparse(spec, 1, 1, 0, 0, "e")
    red = reduce_complex(sparse)
    assert red.core.total_rank() <= sparse.total_rank()


def test_known_sphere_homology():
    # the underlying level of the 2-dimensional rotation sphere is S^2
    spec = group_spec(3)
    sparse = level_to_sparse(fixed_subcomplex(s_gamma_complex(spec), "e"))
    assert homology_of(sparse, 2) == FgAbGroup(1, ())
    assert homology_of(sparse, 1) == FgAbGroup.zero()
    assert homology_of(sparse, 0) == FgAbGroup.zero()


def test_project_include_identity_on_homology():
    spec = group_spec(3)
    sparse = _level_sparse(spec, 1, 0, 0, 0, "G")
    red = reduce_complex(sparse)
    for n in red.core.degrees():
        for idx in range(red.core.rank(n)):
            unit = {idx: 1}
            back = red.project(n, red.include(n, unit))
            assert back == unit or (not back and not unit)


def test_sparse_complex_verify():
    x = SparseComplex({0: 1, 1: 2}, {1: [{0: 2}, {0: 3}]})
    x.verify()
    assert x.total_rank() == 3
    # gcd(2, 3) = 1 kills degree 0; the kernel in degree 1 is one line
    assert homology_of(x, 0) == FgAbGroup.zero()
    assert homology_of(x, 1) == FgAbGroup(1, ())
