"""Cellular ground-truth computations at hand-checkable gradings."""

import pytest

from dihedralhz.abelian import FgAbGroup
from dihedralhz.dihedral import Grading, group_spec
from dihedralhz.oracle import (
    ResourceBudget,
    axioms_pass,
    mackey_axiom_check,
    pi_mackey,
)


def test_constant_mackey_functor_at_zero():
    for p in (3, 5):
        spec = group_spec(p)
        ans = pi_mackey(spec, Grading(0, 0, 0))
        for tag in ("G", "Cp", "C2", "e"):
            assert ans.groups[tag] == FgAbGroup(1, ())
        for key, f in ans.res.items():
            assert f.matrix == [[1]], key
        assert ans.tr[("Cp", "G")].matrix == [[2]]
        assert ans.tr[("C2", "G")].matrix == [[p]]
        assert ans.tr[("e", "Cp")].matrix == [[p]]
        assert ans.tr[("e", "C2")].matrix == [[2]]
        assert ans.weyl.matrix == [[1]]
        assert ans.e_tau.matrix == [[1]]


def test_nonzero_degree_vanishing():
    spec = group_spec(3)
    for a in (-2, -1, 1, 2):
        ans = pi_mackey(spec, Grading(a, 0, 0))
        for tag in ("G", "Cp", "C2", "e"):
            assert ans.groups[tag].is_zero, (a, tag)


def test_sign_sphere_euler_class():
    # one negative sign representation: the top level is Z/2 on the Euler
    # class square, the rotation level still sees the full orientation
    spec = group_spec(3)
    ans = pi_mackey(spec, Grading(0, -1, 0))
    assert ans.groups["G"] == FgAbGroup(0, (2,))
    assert ans.groups["Cp"] == FgAbGroup.zero()
    assert ans.groups["e"] == FgAbGroup.zero()


def test_rotation_sphere_homology():
    # reduced equivariant homology of the 2-dimensional rotation sphere
    spec = group_spec(3)
    values = {0: FgAbGroup(0, (3,)), 1: FgAbGroup(0, (2,)), 2: FgAbGroup.zero()}
    for degree, want in values.items():
        ans = pi_mackey(spec, Grading(degree, 0, -1))
        assert ans.groups["G"] == want, degree


def test_axioms_hold_on_samples():
    spec = group_spec(3)
    for g in (
        Grading(0, 0, 0),
        Grading(-1, -1, 0),
        Grading(1, 1, -1),
        Grading(-3, 1, 1),
        Grading(2, -2, 1),
    ):
        report = mackey_axiom_check(pi_mackey(spec, g))
        assert axioms_pass(report), [r for r in report if not r[1]]


def test_resource_budget():
    spec = group_spec(5)
    with pytest.raises(ResourceBudget):
        pi_mackey(spec, Grading(0, 3, -3), max_cells=10)
